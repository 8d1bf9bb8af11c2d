#include <doctest.h>

#include <sstream>

#include "irg/graph.hpp"
#include "irg/rng.hpp"
#include "irg/sampler.hpp"
#include "oracles.hpp"

using namespace irg;

TEST_CASE("construction normalizes and validates") {
    const Graph p3(3, {{1, 2}, {2, 3}});
    CHECK(p3.vertex_count() == 3);
    CHECK(p3.edge_count() == 2);

    const Graph dedup(3, {{2, 1}, {1, 2}});
    CHECK(dedup.edge_count() == 1);
    CHECK(dedup.edges().front() == Edge{1, 2});

    CHECK_THROWS_AS(Graph(2, {{1, 1}}), SelfLoop);
    CHECK_THROWS_AS(Graph(2, {{1, 3}}), OutOfRangeVertex);
    CHECK_THROWS_AS(Graph(2, {{0, 1}}), OutOfRangeVertex);
}

TEST_CASE("edge-subgraph partial order") {
    const Graph p3(3, {{1, 2}, {2, 3}});
    const Graph k3(3, {{1, 2}, {2, 3}, {1, 3}});
    CHECK(is_edge_subgraph(p3, k3));
    CHECK_FALSE(is_edge_subgraph(k3, p3));
    CHECK(is_edge_subgraph(k3, k3)); // reflexive
    CHECK_FALSE(is_edge_subgraph(p3, Graph(4, {{1, 2}, {2, 3}}))); // different n

    // Partial-order laws on random chains: remove edges twice to get
    // g2 <= g1 <= g and check transitivity plus antisymmetry.
    const UniformStream root(2024);
    for (std::uint64_t t = 0; t < 50; ++t) {
        const Graph g = sample_er(8, 0.5, root.split(t));
        std::vector<Edge> e1(g.edges().begin(),
                             g.edges().begin() + g.edge_count() / 2 + g.edge_count() % 2);
        const Graph g1(8, e1);
        std::vector<Edge> e2(e1.begin(), e1.begin() + e1.size() / 2);
        const Graph g2(8, e2);
        CHECK(is_edge_subgraph(g2, g1));
        CHECK(is_edge_subgraph(g1, g));
        CHECK(is_edge_subgraph(g2, g)); // transitivity
        if (is_edge_subgraph(g, g1)) CHECK(g == g1); // antisymmetry
    }
}

TEST_CASE("isolated vertices and induced subgraphs") {
    const Graph k3(3, {{1, 2}, {2, 3}, {1, 3}});
    const Graph k3plus = add_isolated_vertices(k3, 2);
    CHECK(k3plus.vertex_count() == 5);
    CHECK(k3plus.edge_count() == 3);
    CHECK(add_isolated_vertices(k3, 0) == k3);
    CHECK(add_isolated_vertices(Graph(0, {}), 3).vertex_count() == 3);

    const Graph k4(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    const Graph sub = induced_subgraph(k4, VertexSubset::of({1, 2, 3}));
    CHECK(sub == Graph(3, {{1, 2}, {1, 3}, {2, 3}}));

    const Graph p3(3, {{1, 2}, {2, 3}});
    CHECK(induced_subgraph(p3, VertexSubset::of({1, 3})) == Graph(2, {}));
    CHECK_THROWS_AS(induced_subgraph(p3, VertexSubset::of({1, 4})), OutOfRangeVertex);

    // Full-set induction is the identity.
    const UniformStream root(99);
    const Graph g = sample_er(8, 0.5, root);
    CHECK(induced_subgraph(g, VertexSubset::of({1, 2, 3, 4, 5, 6, 7, 8})) == g);

    // Edge counts of induced subgraphs match a direct pair scan.
    for (std::uint64_t t = 0; t < 20; ++t) {
        const Graph fixture = sample_er(8, 0.5, root.split(t));
        const VertexSubset s = VertexSubset::of(
            {1 + static_cast<Vertex>(t % 8), 2 + static_cast<Vertex>((t + 2) % 6), 7, 8});
        std::size_t direct = 0;
        for (std::size_t i = 0; i < s.members.size(); ++i) {
            for (std::size_t j = i + 1; j < s.members.size(); ++j) {
                if (fixture.has_edge(s.members[i], s.members[j])) ++direct;
            }
        }
        CHECK(induced_subgraph(fixture, s).edge_count() == direct);
    }
}

TEST_CASE("average distance") {
    const Graph pair_plus_isolated(3, {{1, 2}});
    CHECK(average_distance(pair_plus_isolated) == 1.0);

    // The counterexample: joining components raises the average.
    const Graph path(3, {{1, 2}, {2, 3}});
    CHECK(*average_distance(path) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    for (Vertex n = 2; n <= 6; ++n) {
        std::vector<Edge> edges;
        for (Vertex i = 1; i <= n; ++i) {
            for (Vertex j = i + 1; j <= n; ++j) edges.emplace_back(i, j);
        }
        CHECK(average_distance(Graph(n, edges)) == 1.0); // complete graphs
    }

    // Paths: closed form (k+1)/3 against the BFS implementation.
    for (Vertex k = 2; k <= 20; ++k) {
        std::vector<Edge> edges;
        for (Vertex i = 1; i < k; ++i) edges.emplace_back(i, i + 1);
        CHECK(*average_distance(Graph(k, edges)) ==
              doctest::Approx((k + 1) / 3.0).epsilon(1e-12));
    }

    // No same-component pair: the empty average is a signal, not zero.
    CHECK_FALSE(average_distance(Graph(3, {})).has_value());
    CHECK_FALSE(average_distance(Graph(0, {})).has_value());
    CHECK_FALSE(average_distance(Graph(1, {})).has_value());
}

TEST_CASE("degrees and components") {
    const Graph k3(3, {{1, 2}, {2, 3}, {1, 3}});
    CHECK(degree_sequence(k3) == std::vector<std::uint32_t>{2, 2, 2});
    CHECK(connected_components(k3).size() == 1);

    const Graph isolated(3, {});
    CHECK(degree_sequence(isolated) == std::vector<std::uint32_t>{0, 0, 0});
    CHECK(connected_components(isolated).size() == 3);

    const Graph p3(3, {{1, 2}, {2, 3}});
    CHECK(degree_sequence(p3) == std::vector<std::uint32_t>{1, 2, 1});

    // Degree sum = 2|E|; components partition [n].
    const UniformStream root(5);
    for (std::uint64_t t = 0; t < 20; ++t) {
        const Graph g = sample_er(12, 0.3, root.split(t));
        std::uint64_t sum = 0;
        for (auto d : degree_sequence(g)) sum += d;
        CHECK(sum == 2 * g.edge_count());
        std::size_t covered = 0;
        for (const auto& comp : connected_components(g)) covered += comp.size();
        CHECK(covered == g.vertex_count());
    }
}

TEST_CASE("edge-list format is bit-exact") {
    const Graph g(4, {{3, 4}, {1, 2}, {1, 4}});
    std::ostringstream out;
    write_edge_list(g, out);
    CHECK(out.str() == "4 3\n1 2\n1 4\n3 4\n");

    std::istringstream in(out.str());
    CHECK(read_edge_list(in) == g);

    std::istringstream truncated("4 3\n1 2\n");
    CHECK_THROWS_AS(read_edge_list(truncated), IoError);
}
