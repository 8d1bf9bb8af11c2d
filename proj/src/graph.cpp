#include "irg/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace irg {

Graph::Graph(Vertex n, const std::vector<Edge>& edges) : n_(n) {
    edges_.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        if (a < 1 || a > n || b < 1 || b > n) {
            throw OutOfRangeVertex("edge endpoint outside [1," + std::to_string(n) + "]");
        }
        if (a == b) {
            throw SelfLoop("self-loop at vertex " + std::to_string(a));
        }
        edges_.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    build_adjacency();
}

Graph Graph::from_sorted_edges(Vertex n, std::vector<Edge> edges) {
    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.build_adjacency();
    return g;
}

void Graph::build_adjacency() {
    adj_.assign(n_, {});
    std::vector<std::uint32_t> deg(n_, 0);
    for (const auto& [a, b] : edges_) {
        ++deg[a - 1];
        ++deg[b - 1];
    }
    for (Vertex v = 0; v < n_; ++v) adj_[v].reserve(deg[v]);
    for (const auto& [a, b] : edges_) {
        adj_[a - 1].push_back(b);
        adj_[b - 1].push_back(a);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

const std::vector<Vertex>& Graph::neighbors(Vertex v) const {
    if (v < 1 || v > n_) throw OutOfRangeVertex("vertex " + std::to_string(v));
    return adj_[v - 1];
}

bool Graph::has_edge(Vertex i, Vertex j) const {
    if (i == j) return false;
    const Edge e{std::min(i, j), std::max(i, j)};
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

VertexSubset VertexSubset::of(std::vector<Vertex> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return VertexSubset{std::move(vs)};
}

bool VertexSubset::contains(Vertex v) const {
    return std::binary_search(members.begin(), members.end(), v);
}

bool is_edge_subgraph(const Graph& g1, const Graph& g2) {
    if (g1.vertex_count() != g2.vertex_count()) return false;
    if (g1.edge_count() > g2.edge_count()) return false;
    // Both edge lists are sorted.
    return std::includes(g2.edges().begin(), g2.edges().end(), g1.edges().begin(),
                         g1.edges().end());
}

Graph add_isolated_vertices(const Graph& g, Vertex k) {
    return Graph::from_sorted_edges(g.vertex_count() + k, g.edges());
}

Graph induced_subgraph(const Graph& g, const VertexSubset& s) {
    std::vector<Vertex> relabel(g.vertex_count() + 1, 0);
    Vertex next = 1;
    for (Vertex v : s.members) {
        if (v < 1 || v > g.vertex_count()) {
            throw OutOfRangeVertex("subset member " + std::to_string(v));
        }
        relabel[v] = next++;
    }
    std::vector<Edge> kept;
    for (const auto& [a, b] : g.edges()) {
        if (relabel[a] != 0 && relabel[b] != 0) kept.emplace_back(relabel[a], relabel[b]);
    }
    std::sort(kept.begin(), kept.end());
    return Graph::from_sorted_edges(static_cast<Vertex>(s.members.size()), std::move(kept));
}

std::optional<double> average_distance(const Graph& g) {
    const Vertex n = g.vertex_count();
    std::uint64_t pairs = 0;
    std::uint64_t total = 0;
    std::vector<std::int64_t> dist(n + 1);
    std::deque<Vertex> queue;
    for (Vertex src = 1; src <= n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        queue.clear();
        queue.push_back(src);
        while (!queue.empty()) {
            const Vertex u = queue.front();
            queue.pop_front();
            for (Vertex w : g.neighbors(u)) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (Vertex v = src + 1; v <= n; ++v) {
            if (dist[v] > 0) {
                ++pairs;
                total += static_cast<std::uint64_t>(dist[v]);
            }
        }
    }
    if (pairs == 0) return std::nullopt;
    return static_cast<double>(total) / static_cast<double>(pairs);
}

std::vector<std::uint32_t> degree_sequence(const Graph& g) {
    std::vector<std::uint32_t> deg(g.vertex_count(), 0);
    for (const auto& [a, b] : g.edges()) {
        ++deg[a - 1];
        ++deg[b - 1];
    }
    return deg;
}

std::vector<VertexSubset> connected_components(const Graph& g) {
    const Vertex n = g.vertex_count();
    std::vector<bool> seen(n + 1, false);
    std::vector<VertexSubset> out;
    std::vector<Vertex> stack;
    for (Vertex s = 1; s <= n; ++s) {
        if (seen[s]) continue;
        std::vector<Vertex> comp;
        stack.push_back(s);
        seen[s] = true;
        while (!stack.empty()) {
            const Vertex u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (Vertex w : g.neighbors(u)) {
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(VertexSubset{std::move(comp)});
    }
    return out;
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [a, b] : g.edges()) out << a << ' ' << b << '\n';
}

Graph read_edge_list(std::istream& in) {
    Vertex n = 0;
    std::size_t m = 0;
    if (!(in >> n >> m)) throw IoError("edge list: missing header");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::size_t e = 0; e < m; ++e) {
        Vertex a = 0, b = 0;
        if (!(in >> a >> b)) throw IoError("edge list: truncated at edge " + std::to_string(e));
        edges.emplace_back(a, b);
    }
    return Graph(n, edges);
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string());
    write_edge_list(g, out);
    if (!out) throw IoError("write failed: " + path.string());
}

Graph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_edge_list(in);
}

} // namespace irg
