#include <algorithm>
#include <numeric>

#include "irg/solvers.hpp"
#include "solver_internal.hpp"

namespace irg {

using detail::BudgetState;
using detail::Tri;

namespace {

// Next vertex by saturation degree; ties by degree then index (normative).
struct DsaturPick {
    const std::vector<std::uint32_t>& sat;
    const std::vector<std::uint32_t>& deg;

    // candidates: 0-based local ids with color == 0
    std::uint32_t operator()(const std::vector<std::uint32_t>& color) const {
        std::uint32_t best = UINT32_MAX;
        for (std::uint32_t v = 0; v < color.size(); ++v) {
            if (color[v] != 0) continue;
            if (best == UINT32_MAX || sat[v] > sat[best] ||
                (sat[v] == sat[best] && (deg[v] > deg[best] ||
                                         (deg[v] == deg[best] && v < best)))) {
                best = v;
            }
        }
        return best;
    }
};

// One connected induced piece of the kernelized core, in local 0-based ids.
struct Component {
    std::vector<Vertex> original;             // local id -> original vertex (1-based)
    std::vector<std::vector<std::uint32_t>> adj; // local adjacency
};

// Backtracking k-colorability on one component with first-clique symmetry
// breaking and the canonical new-color rule (a vertex may open at most one
// color beyond the highest used so far).
class ComponentColoring {
public:
    ComponentColoring(const Component& comp, std::uint32_t k, BudgetState& budget)
        : comp_(comp), k_(k), budget_(budget) {
        const auto n = static_cast<std::uint32_t>(comp.adj.size());
        color_.assign(n, 0);
        sat_.assign(n, 0);
        deg_.assign(n, 0);
        for (std::uint32_t v = 0; v < n; ++v) deg_[v] = static_cast<std::uint32_t>(comp.adj[v].size());
        counts_.assign(static_cast<std::size_t>(n) * (k + 1), 0);
    }

    Tri solve(std::vector<std::uint32_t>& colors_out) {
        const auto n = static_cast<std::uint32_t>(comp_.adj.size());

        // Greedy clique seeded from the highest-degree vertex.
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (deg_[a] != deg_[b]) return deg_[a] > deg_[b];
            return a < b;
        });
        std::vector<std::uint32_t> clique;
        for (std::uint32_t v : order) {
            bool all = true;
            for (std::uint32_t u : clique) {
                if (!std::binary_search(comp_.adj[v].begin(), comp_.adj[v].end(), u)) {
                    all = false;
                    break;
                }
            }
            if (all) clique.push_back(v);
        }
        if (clique.size() > k_) return Tri::no;
        std::uint32_t max_used = 0;
        for (std::uint32_t i = 0; i < clique.size(); ++i) {
            assign(clique[i], i + 1);
            max_used = i + 1;
        }

        const Tri r = recurse(n - static_cast<std::uint32_t>(clique.size()), max_used);
        if (r == Tri::yes) colors_out = color_;
        return r;
    }

private:
    std::uint16_t& count(std::uint32_t v, std::uint32_t c) {
        return counts_[static_cast<std::size_t>(v) * (k_ + 1) + c];
    }

    void assign(std::uint32_t v, std::uint32_t c) {
        color_[v] = c;
        for (std::uint32_t w : comp_.adj[v]) {
            if (count(w, c)++ == 0) ++sat_[w];
        }
    }

    void unassign(std::uint32_t v, std::uint32_t c) {
        color_[v] = 0;
        for (std::uint32_t w : comp_.adj[v]) {
            if (--count(w, c) == 0) --sat_[w];
        }
    }

    Tri recurse(std::uint32_t uncolored, std::uint32_t max_used) {
        if (!budget_.tick()) return Tri::unknown;
        if (uncolored == 0) return Tri::yes;
        const std::uint32_t v = DsaturPick{sat_, deg_}(color_);
        const std::uint32_t limit = std::min(k_, max_used + 1);
        for (std::uint32_t c = 1; c <= limit; ++c) {
            if (count(v, c) != 0) continue;
            assign(v, c);
            const Tri r = recurse(uncolored - 1, std::max(max_used, c));
            if (r != Tri::no) {
                if (r == Tri::unknown) unassign(v, c);
                return r;
            }
            unassign(v, c);
        }
        return Tri::no;
    }

    const Component& comp_;
    std::uint32_t k_;
    BudgetState& budget_;
    std::vector<std::uint32_t> color_;
    std::vector<std::uint32_t> sat_;
    std::vector<std::uint32_t> deg_;
    std::vector<std::uint16_t> counts_; // per (vertex, color) neighbor count
};

// k-colorability of the whole graph: peel vertices of degree < k (always
// colorable last), split the core into components, solve each.
Tri k_colorable(const Graph& g, std::uint32_t k, BudgetState& budget,
                std::vector<std::uint32_t>& coloring_out) {
    const Vertex n = g.vertex_count();
    coloring_out.assign(n + 1, 0);
    if (n == 0) return Tri::yes;
    if (k == 0) return Tri::no;

    std::vector<std::uint32_t> deg = degree_sequence(g);
    std::vector<bool> alive(n + 1, true);
    std::vector<Vertex> peel_order;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Vertex v = 1; v <= n; ++v) {
            if (alive[v] && deg[v - 1] < k) {
                alive[v] = false;
                peel_order.push_back(v);
                for (Vertex w : g.neighbors(v)) {
                    if (alive[w]) --deg[w - 1];
                }
                changed = true;
            }
        }
    }

    // Components of the core and their local solves.
    std::vector<std::int64_t> local(n + 1, -1);
    std::vector<bool> seen(n + 1, false);
    for (Vertex s = 1; s <= n; ++s) {
        if (!alive[s] || seen[s]) continue;
        std::vector<Vertex> stack{s};
        seen[s] = true;
        Component comp;
        while (!stack.empty()) {
            const Vertex u = stack.back();
            stack.pop_back();
            local[u] = static_cast<std::int64_t>(comp.original.size());
            comp.original.push_back(u);
            for (Vertex w : g.neighbors(u)) {
                if (alive[w] && !seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.original.begin(), comp.original.end());
        for (std::uint32_t i = 0; i < comp.original.size(); ++i) local[comp.original[i]] = i;
        comp.adj.resize(comp.original.size());
        for (std::uint32_t i = 0; i < comp.original.size(); ++i) {
            for (Vertex w : g.neighbors(comp.original[i])) {
                if (alive[w]) comp.adj[i].push_back(static_cast<std::uint32_t>(local[w]));
            }
            std::sort(comp.adj[i].begin(), comp.adj[i].end());
        }

        ComponentColoring solver(comp, k, budget);
        std::vector<std::uint32_t> colors;
        const Tri r = solver.solve(colors);
        if (r != Tri::yes) return r;
        for (std::uint32_t i = 0; i < comp.original.size(); ++i) {
            coloring_out[comp.original[i]] = colors[i];
        }
    }

    // Reinsert peeled vertices in reverse removal order; each has fewer than
    // k colored neighbors at reinsertion time, so a free color exists.
    for (auto it = peel_order.rbegin(); it != peel_order.rend(); ++it) {
        const Vertex v = *it;
        std::vector<bool> used(k + 2, false);
        for (Vertex w : g.neighbors(v)) {
            if (coloring_out[w] != 0 && coloring_out[w] <= k) used[coloring_out[w]] = true;
        }
        for (std::uint32_t c = 1; c <= k; ++c) {
            if (!used[c]) {
                coloring_out[v] = c;
                break;
            }
        }
    }
    return Tri::yes;
}

} // namespace

std::uint32_t chromatic_upper_greedy(const Graph& g, std::vector<std::uint32_t>* coloring) {
    const Vertex n = g.vertex_count();
    std::vector<std::uint32_t> color(n + 1, 0);
    std::vector<std::uint32_t> sat(n + 1, 0);
    const std::vector<std::uint32_t> deg = degree_sequence(g);
    // per-vertex neighbor color marks
    std::vector<std::vector<bool>> mark(n + 1, std::vector<bool>(n + 2, false));

    std::uint32_t used = 0;
    for (Vertex step = 0; step < n; ++step) {
        Vertex best = 0;
        for (Vertex v = 1; v <= n; ++v) {
            if (color[v] != 0) continue;
            if (best == 0 || sat[v] > sat[best] ||
                (sat[v] == sat[best] &&
                 (deg[v - 1] > deg[best - 1] || (deg[v - 1] == deg[best - 1] && v < best)))) {
                best = v;
            }
        }
        std::uint32_t c = 1;
        while (mark[best][c]) ++c;
        color[best] = c;
        used = std::max(used, c);
        for (Vertex w : g.neighbors(best)) {
            if (!mark[w][c]) {
                mark[w][c] = true;
                ++sat[w];
            }
        }
    }
    if (coloring) {
        coloring->assign(color.begin() + 1, color.end());
    }
    return used;
}

std::uint32_t chromatic_lower_clique(const Graph& g, const SolveBudget& budget) {
    if (g.vertex_count() == 0) return 0;
    const QuasiCliqueResult r = max_clique_exact(g, budget);
    return std::max<std::uint32_t>(1, r.lower);
}

ChromaticResult chromatic_number_exact(const Graph& g, const SolveBudget& budget) {
    ChromaticResult res;
    const Vertex n = g.vertex_count();
    if (n == 0) {
        res.outcome = SolveOutcome::exact;
        return res;
    }

    BudgetState bs(budget);
    std::vector<std::uint32_t> greedy;
    const std::uint32_t upper = chromatic_upper_greedy(g, &greedy);

    SolveBudget clique_budget;
    clique_budget.node_limit = std::min<std::uint64_t>(budget.node_limit / 4 + 1024, 2'000'000);
    clique_budget.time_limit_s = budget.time_limit_s;
    const QuasiCliqueResult clq = max_clique_exact(g, clique_budget);
    bs.nodes += clq.nodes;
    const std::uint32_t lower = std::max<std::uint32_t>(1, clq.lower);

    res.upper = upper;
    res.coloring = greedy;
    if (lower >= upper) {
        res.outcome = SolveOutcome::exact;
        res.value = upper;
        res.lower = upper;
        res.nodes = bs.nodes;
        res.wall_s = bs.elapsed();
        return res;
    }

    for (std::uint32_t k = lower; k < upper; ++k) {
        std::vector<std::uint32_t> colors;
        const Tri r = k_colorable(g, k, bs, colors);
        if (r == Tri::yes) {
            res.outcome = SolveOutcome::exact;
            res.value = k;
            res.lower = k;
            res.upper = k;
            res.coloring.assign(colors.begin() + 1, colors.end());
            res.nodes = bs.nodes;
            res.wall_s = bs.elapsed();
            return res;
        }
        if (r == Tri::unknown) {
            // chi >= k is proven: every smaller k was refuted (or k is the
            // clique bound); the greedy coloring certifies the upper end.
            res.outcome = SolveOutcome::lower_upper_only;
            res.lower = k;
            res.nodes = bs.nodes;
            res.wall_s = bs.elapsed();
            return res;
        }
    }
    res.outcome = SolveOutcome::exact;
    res.value = upper;
    res.lower = upper;
    res.nodes = bs.nodes;
    res.wall_s = bs.elapsed();
    return res;
}

} // namespace irg
