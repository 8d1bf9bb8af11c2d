#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "irg/errors.hpp"

namespace irg {

// Vertices are 1-based: the vertex set of a graph on n vertices is {1,...,n}.
using Vertex = std::uint32_t;

// Normalized edge: first < second.
using Edge = std::pair<Vertex, Vertex>;

// Immutable undirected simple graph. Edges are kept both as a sorted,
// deduplicated edge list (fast subset comparison) and as per-vertex
// neighbor lists (fast iteration in the solvers).
class Graph {
public:
    Graph() = default;

    // Validates and normalizes: pairs are reordered so i<j, duplicates are
    // dropped. Throws OutOfRangeVertex / SelfLoop on bad input.
    Graph(Vertex n, const std::vector<Edge>& edges);

    // Trusted fast path for the samplers: `edges` must already be sorted
    // ascending, deduplicated, with 1 <= i < j <= n.
    static Graph from_sorted_edges(Vertex n, std::vector<Edge> edges);

    Vertex vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    // Neighbors of v (1-based), sorted ascending.
    const std::vector<Vertex>& neighbors(Vertex v) const;

    bool has_edge(Vertex i, Vertex j) const;

    bool operator==(const Graph& other) const noexcept {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    void build_adjacency();

    Vertex n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adj_; // size n_, index v-1
};

// Sorted set of distinct vertex indices.
struct VertexSubset {
    std::vector<Vertex> members;

    static VertexSubset of(std::vector<Vertex> vs); // sorts + dedups
    bool contains(Vertex v) const;
    std::size_t size() const noexcept { return members.size(); }
    bool operator==(const VertexSubset&) const = default;
};

// The partial order G1 <= G2: same vertex count and edge containment.
bool is_edge_subgraph(const Graph& g1, const Graph& g2);

// Graph on n+k vertices with the same edge set.
Graph add_isolated_vertices(const Graph& g, Vertex k);

// Subgraph induced by s, relabeled 1..|s| preserving order.
// Throws OutOfRangeVertex if s reaches outside [n].
Graph induced_subgraph(const Graph& g, const VertexSubset& s);

// Mean BFS distance over unordered same-component vertex pairs.
// Returns nullopt when the graph has no such pair (the empty average is a
// distinct signal, not zero, so monotonicity checks cannot pass silently).
std::optional<double> average_distance(const Graph& g);

std::vector<std::uint32_t> degree_sequence(const Graph& g);
std::vector<VertexSubset> connected_components(const Graph& g);

// Edge-list text format (bit-exact for golden files):
// first line "n m", then m lines "i j" with 1-based i<j in ascending
// lexicographic order, LF line endings.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);
void save_edge_list(const Graph& g, const std::filesystem::path& path);
Graph load_edge_list(const std::filesystem::path& path);

} // namespace irg
