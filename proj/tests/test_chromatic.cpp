#include <doctest.h>

#include "irg/sampler.hpp"
#include "irg/solvers.hpp"
#include "oracles.hpp"

using namespace irg;

namespace {

Graph complete(Vertex n) {
    std::vector<Edge> edges;
    for (Vertex i = 1; i <= n; ++i) {
        for (Vertex j = i + 1; j <= n; ++j) edges.emplace_back(i, j);
    }
    return Graph(n, edges);
}

Graph cycle(Vertex n) {
    std::vector<Edge> edges;
    for (Vertex i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(1, n);
    return Graph(n, edges);
}

bool proper(const Graph& g, const std::vector<std::uint32_t>& coloring, std::uint32_t colors) {
    if (coloring.size() != g.vertex_count()) return false;
    std::uint32_t maxc = 0;
    for (auto c : coloring) {
        if (c == 0) return false;
        maxc = std::max(maxc, c);
    }
    if (g.vertex_count() > 0 && maxc != colors) return false;
    for (const auto& [a, b] : g.edges()) {
        if (coloring[a - 1] == coloring[b - 1]) return false;
    }
    return true;
}

} // namespace

TEST_CASE("chromatic number on known graphs") {
    CHECK(chromatic_number_exact(Graph(0, {})).value == 0);
    CHECK(chromatic_number_exact(Graph(5, {})).value == 1);
    CHECK(chromatic_number_exact(complete(4)).value == 4);
    CHECK(chromatic_number_exact(cycle(5)).value == 3);  // odd cycle
    CHECK(chromatic_number_exact(cycle(6)).value == 2);

    // Petersen: no 2-coloring exists, a 3-coloring does (oracle enumerates
    // assignments directly).
    const Graph pet = oracle::petersen();
    CHECK_FALSE(oracle::brute_k_colorable(pet, 2));
    CHECK(oracle::brute_k_colorable(pet, 3));
    const auto r = chromatic_number_exact(pet);
    CHECK(r.outcome == SolveOutcome::exact);
    CHECK(r.value == 3);
    CHECK(proper(pet, r.coloring, 3));
}

TEST_CASE("exact solver agrees with brute force on random fixtures") {
    const UniformStream root(1001);
    for (std::uint64_t t = 0; t < 120; ++t) {
        const Vertex n = 4 + static_cast<Vertex>(t % 5); // 4..8
        const double p = 0.25 + 0.25 * static_cast<double>(t % 3);
        const Graph g = sample_er(n, p, root.split(t));
        const auto r = chromatic_number_exact(g);
        REQUIRE(r.outcome == SolveOutcome::exact);
        CHECK(r.value == oracle::brute_chromatic(g));
        CHECK(proper(g, r.coloring, r.value));
    }
}

TEST_CASE("greedy and clique brackets") {
    std::vector<std::uint32_t> coloring;
    CHECK(chromatic_upper_greedy(complete(5), &coloring) == 5);
    CHECK(chromatic_lower_clique(complete(5)) == 5);
    CHECK(chromatic_upper_greedy(Graph(7, {})) == 1);
    CHECK(chromatic_lower_clique(Graph(7, {})) == 1);

    const UniformStream root(3030);
    for (std::uint64_t t = 0; t < 5; ++t) {
        const Graph g = sample_er(50, 0.5, root.split(t));
        const std::uint32_t lo = chromatic_lower_clique(g);
        const std::uint32_t hi = chromatic_upper_greedy(g);
        const auto exact = chromatic_number_exact(g);
        REQUIRE(exact.outcome == SolveOutcome::exact);
        CHECK(lo <= exact.value);
        CHECK(exact.value <= hi);
    }
}

TEST_CASE("budget exhaustion yields a sound bracket, not an error") {
    const Graph g = sample_er(60, 0.5, UniformStream(404));
    SolveBudget tiny;
    tiny.node_limit = 50;
    const auto bracket = chromatic_number_exact(g, tiny);
    CHECK(bracket.outcome == SolveOutcome::lower_upper_only);
    CHECK(bracket.lower <= bracket.upper);
    CHECK(proper(g, bracket.coloring, bracket.upper));

    const auto exact = chromatic_number_exact(g);
    REQUIRE(exact.outcome == SolveOutcome::exact);
    CHECK(bracket.lower <= exact.value);
    CHECK(exact.value <= bracket.upper);
}

TEST_CASE("chromatic number ignores isolated vertices") {
    const UniformStream root(555);
    for (std::uint64_t t = 0; t < 25; ++t) {
        const Graph g = sample_er(9, 0.4, root.split(t));
        const auto before = chromatic_number_exact(g).value;
        CHECK(chromatic_number_exact(add_isolated_vertices(g, 3)).value == before);
    }
}

TEST_CASE("sparse instances solve exactly well above the oracle range") {
    // lambda_n = n keeps the mean degree constant; kernelization peels
    // nearly everything when testing small k.
    const auto [g, w] = sample_irg(400, Kernel::bump(0.5, 3.0, 2.0), ScalingSequence::linear(1.0),
                                   UniformStream(77));
    const auto r = chromatic_number_exact(g);
    CHECK(r.outcome == SolveOutcome::exact);
    CHECK(r.value >= 2);
    CHECK(r.value <= 5);
    CHECK(proper(g, r.coloring, r.value));
}
