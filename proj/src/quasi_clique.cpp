#include <algorithm>
#include <numeric>

#include "irg/solvers.hpp"
#include "solver_internal.hpp"

namespace irg {

using detail::BitRows;
using detail::BudgetState;
using detail::Tri;

namespace {

// Maximum-clique branch and bound with a greedy-coloring bound (Tomita
// style). Vertices are renumbered into a degree-descending order; candidate
// sets are bitsets over positions.
class MaxCliqueEngine {
public:
    MaxCliqueEngine(const Graph& g, BudgetState& budget) : g_(g), budget_(budget) {
        n_ = g.vertex_count();
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), 0u);
        const auto deg = degree_sequence(g);
        std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (deg[a] != deg[b]) return deg[a] > deg[b];
            return a < b;
        });
        pos_of_.resize(n_);
        for (std::uint32_t p = 0; p < n_; ++p) pos_of_[order_[p]] = p;
        adj_.init(n_);
        for (const auto& [a, b] : g.edges()) {
            adj_.set(pos_of_[a - 1], pos_of_[b - 1]);
            adj_.set(pos_of_[b - 1], pos_of_[a - 1]);
        }
        words_ = adj_.words;
    }

    QuasiCliqueResult run() {
        QuasiCliqueResult res;
        if (n_ == 0) {
            res.outcome = SolveOutcome::exact;
            res.value = res.lower = res.upper = 0;
            return res;
        }
        best_ = {0}; // any single vertex is a clique
        std::vector<std::uint64_t> all(words_, 0);
        for (std::uint32_t v = 0; v < n_; ++v) all[v >> 6] |= 1ull << (v & 63);

        root_ub_ = color_bound(all.data());
        std::vector<std::uint32_t> current;
        expand(current, all.data());

        res.nodes = budget_.nodes;
        res.witness.reserve(best_.size());
        for (std::uint32_t p : best_) res.witness.push_back(order_[p] + 1);
        std::sort(res.witness.begin(), res.witness.end());
        res.lower = static_cast<std::uint32_t>(best_.size());
        if (budget_.exhausted) {
            res.outcome = SolveOutcome::lower_upper_only;
            res.upper = std::max(res.lower, root_ub_);
        } else {
            res.outcome = SolveOutcome::exact;
            res.value = res.lower;
            res.upper = res.lower;
        }
        return res;
    }

private:
    // Sequential greedy coloring of the candidate set; returns the class
    // count and (optionally) the candidates sorted by ascending color.
    std::uint32_t color_bound(const std::uint64_t* cand,
                              std::vector<std::pair<std::uint32_t, std::uint32_t>>* sorted = nullptr) {
        class_masks_.clear();
        if (sorted) sorted->clear();
        for (std::uint32_t w = 0; w < words_; ++w) {
            std::uint64_t bitsw = cand[w];
            while (bitsw) {
                const std::uint32_t v = (w << 6) + static_cast<std::uint32_t>(std::countr_zero(bitsw));
                bitsw &= bitsw - 1;
                std::uint32_t cls = 0;
                for (; cls < class_masks_.size(); ++cls) {
                    const std::uint64_t* mask = class_masks_[cls].data();
                    const std::uint64_t* nb = adj_.row(v);
                    bool clash = false;
                    for (std::uint32_t i = 0; i < words_; ++i) {
                        if (mask[i] & nb[i]) {
                            clash = true;
                            break;
                        }
                    }
                    if (!clash) break;
                }
                if (cls == class_masks_.size()) class_masks_.emplace_back(words_, 0);
                class_masks_[cls][v >> 6] |= 1ull << (v & 63);
                if (sorted) sorted->emplace_back(v, cls + 1);
            }
        }
        if (sorted) {
            std::stable_sort(sorted->begin(), sorted->end(),
                             [](const auto& a, const auto& b) { return a.second < b.second; });
        }
        return static_cast<std::uint32_t>(class_masks_.size());
    }

    void expand(std::vector<std::uint32_t>& current, const std::uint64_t* cand) {
        if (!budget_.tick()) return;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> sorted;
        color_bound(cand, &sorted);
        if (sorted.empty()) {
            if (current.size() > best_.size()) best_ = current;
            return;
        }
        std::vector<std::uint64_t> live(cand, cand + words_);
        std::vector<std::uint64_t> next(words_);
        for (std::size_t idx = sorted.size(); idx-- > 0;) {
            const auto [v, color] = sorted[idx];
            if (current.size() + color <= best_.size()) return;
            const std::uint64_t* nb = adj_.row(v);
            bool any = false;
            for (std::uint32_t i = 0; i < words_; ++i) {
                next[i] = live[i] & nb[i];
                any |= next[i] != 0;
            }
            current.push_back(v);
            if (!any) {
                if (current.size() > best_.size()) best_ = current;
            } else {
                expand(current, next.data());
                if (budget_.exhausted) {
                    current.pop_back();
                    return;
                }
            }
            current.pop_back();
            live[v >> 6] &= ~(1ull << (v & 63));
        }
    }

    const Graph& g_;
    BudgetState& budget_;
    std::uint32_t n_ = 0;
    std::uint32_t words_ = 0;
    std::vector<std::uint32_t> order_;  // position -> original index (0-based)
    std::vector<std::uint32_t> pos_of_; // original index -> position
    BitRows adj_;
    std::vector<std::uint32_t> best_; // positions
    std::vector<std::vector<std::uint64_t>> class_masks_;
    std::uint32_t root_ub_ = 0;
};

// Decision search: is there a vertex subset of size exactly s whose induced
// edge count meets the real-valued threshold? Candidates are branched in
// degree-descending order; a partial set P with pool C is pruned when
// edges(P) plus the optimistic completion (top s-|P| pool connectivities
// into P plus all pairs among the added) cannot reach the threshold.
class FixedSizeSearch {
public:
    FixedSizeSearch(const Graph& g, double need, std::uint32_t s, BudgetState& budget)
        : need_(need), s_(s), budget_(budget) {
        n_ = g.vertex_count();
        cand_.resize(n_);
        std::iota(cand_.begin(), cand_.end(), 0u);
        const auto deg = degree_sequence(g);
        std::sort(cand_.begin(), cand_.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (deg[a] != deg[b]) return deg[a] > deg[b];
            return a < b;
        });
        std::vector<std::uint32_t> pos(n_);
        for (std::uint32_t p = 0; p < n_; ++p) pos[cand_[p]] = p;
        adj_.init(n_);
        for (const auto& [a, b] : g.edges()) {
            adj_.set(pos[a - 1], pos[b - 1]);
            adj_.set(pos[b - 1], pos[a - 1]);
        }
        links_.assign(n_, 0);
    }

    Tri search(std::vector<Vertex>& witness_out) {
        chosen_.clear();
        edges_p_ = 0;
        const Tri r = branch(0);
        if (r == Tri::yes) {
            witness_out.clear();
            for (std::uint32_t p : chosen_) witness_out.push_back(cand_[p] + 1);
            std::sort(witness_out.begin(), witness_out.end());
        }
        return r;
    }

private:
    Tri branch(std::uint32_t pos) {
        if (!budget_.tick()) return Tri::unknown;
        if (chosen_.size() == s_) {
            return static_cast<double>(edges_p_) >= need_ ? Tri::yes : Tri::no;
        }
        if (pos >= n_ || chosen_.size() + (n_ - pos) < s_) return Tri::no;

        const std::uint32_t t = s_ - static_cast<std::uint32_t>(chosen_.size());
        scratch_.clear();
        for (std::uint32_t q = pos; q < n_; ++q) scratch_.push_back(links_[q]);
        if (scratch_.size() > t) {
            std::nth_element(scratch_.begin(), scratch_.begin() + t - 1, scratch_.end(),
                             std::greater<>());
        }
        std::uint64_t opt = 0;
        const std::uint32_t take = std::min<std::uint32_t>(t, static_cast<std::uint32_t>(scratch_.size()));
        for (std::uint32_t i = 0; i < take; ++i) opt += scratch_[i];
        opt += static_cast<std::uint64_t>(t) * (t - 1) / 2;
        if (static_cast<double>(edges_p_ + opt) < need_) return Tri::no;

        // include cand_[pos]
        chosen_.push_back(pos);
        edges_p_ += links_[pos];
        const std::uint64_t* nb = adj_.row(pos);
        for (std::uint32_t q = pos + 1; q < n_; ++q) {
            if ((nb[q >> 6] >> (q & 63)) & 1ull) ++links_[q];
        }
        Tri r = branch(pos + 1);
        for (std::uint32_t q = pos + 1; q < n_; ++q) {
            if ((nb[q >> 6] >> (q & 63)) & 1ull) --links_[q];
        }
        edges_p_ -= links_[pos];
        if (r != Tri::no) {
            if (r == Tri::unknown) chosen_.pop_back();
            return r; // yes keeps `chosen_` for the witness
        }
        chosen_.pop_back();

        // exclude cand_[pos]
        return branch(pos + 1);
    }

    double need_;
    std::uint32_t s_;
    BudgetState& budget_;
    std::uint32_t n_ = 0;
    std::vector<std::uint32_t> cand_; // position -> original 0-based vertex
    BitRows adj_;
    std::vector<std::uint32_t> links_; // edges from position into chosen set
    std::vector<std::uint32_t> chosen_;
    std::uint64_t edges_p_ = 0;
    std::vector<std::uint32_t> scratch_;
};

double threshold(double gamma, std::uint32_t s) {
    return gamma * (static_cast<double>(s) * (s - 1) / 2.0);
}

// Min-degree peeling; returns the largest feasible prefix and its witness.
std::pair<std::uint32_t, std::vector<Vertex>> peel_lower_bound(const Graph& g, double gamma) {
    const Vertex n = g.vertex_count();
    std::vector<std::uint32_t> deg = degree_sequence(g);
    std::vector<bool> alive(n + 1, true);
    std::uint64_t edges = g.edge_count();
    std::uint32_t size = n;

    const auto feasible = [&] { return static_cast<double>(edges) >= threshold(gamma, size); };
    while (size > 0 && !feasible()) {
        Vertex victim = 0;
        std::uint32_t dmin = UINT32_MAX;
        for (Vertex v = 1; v <= n; ++v) {
            if (alive[v] && deg[v - 1] < dmin) {
                dmin = deg[v - 1];
                victim = v;
            }
        }
        alive[victim] = false;
        edges -= dmin;
        --size;
        for (Vertex w : g.neighbors(victim)) {
            if (alive[w]) --deg[w - 1];
        }
    }
    std::vector<Vertex> witness;
    for (Vertex v = 1; v <= n; ++v) {
        if (alive[v]) witness.push_back(v);
    }
    return {size, std::move(witness)};
}

} // namespace

QuasiCliqueResult max_clique_exact(const Graph& g, const SolveBudget& budget) {
    BudgetState bs(budget);
    MaxCliqueEngine engine(g, bs);
    QuasiCliqueResult res = engine.run();
    res.wall_s = bs.elapsed();
    return res;
}

QuasiCliqueResult quasi_clique_number_exact(const Graph& g, double gamma,
                                            const SolveBudget& budget) {
    if (!(gamma > 0.0) || gamma > 1.0) {
        throw DomainError("quasi-clique density must lie in (0,1]");
    }
    if (gamma == 1.0) return max_clique_exact(g, budget);

    const Vertex n = g.vertex_count();
    QuasiCliqueResult res;
    if (n == 0) {
        res.outcome = SolveOutcome::exact;
        return res;
    }

    BudgetState bs(budget);
    auto [best_lo, witness] = peel_lower_bound(g, gamma);

    // Necessary condition for any s-set: its edge count is at most
    // min(C(s,2), |E|, half the top-s degree sum).
    std::vector<std::uint32_t> deg = degree_sequence(g);
    std::sort(deg.begin(), deg.end(), std::greater<>());
    std::vector<std::uint64_t> prefix(n + 1, 0);
    for (Vertex i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + deg[i];
    std::uint32_t s_ub = best_lo;
    for (std::uint32_t s = n; s > best_lo; --s) {
        const std::uint64_t cap = std::min<std::uint64_t>(
            {static_cast<std::uint64_t>(s) * (s - 1) / 2, g.edge_count(), prefix[s] / 2});
        if (static_cast<double>(cap) >= threshold(gamma, s)) {
            s_ub = s;
            break;
        }
    }

    res.lower = best_lo;
    res.witness = witness;
    for (std::uint32_t s = s_ub; s > best_lo; --s) {
        FixedSizeSearch search(g, threshold(gamma, s), s, bs);
        std::vector<Vertex> found;
        const Tri r = search.search(found);
        if (r == Tri::yes) {
            res.outcome = SolveOutcome::exact;
            res.value = s;
            res.lower = res.upper = s;
            res.witness = std::move(found);
            res.nodes = bs.nodes;
            res.wall_s = bs.elapsed();
            return res;
        }
        if (r == Tri::unknown) {
            res.outcome = SolveOutcome::lower_upper_only;
            res.upper = s;
            res.nodes = bs.nodes;
            res.wall_s = bs.elapsed();
            return res;
        }
    }
    res.outcome = SolveOutcome::exact;
    res.value = best_lo;
    res.upper = best_lo;
    res.nodes = bs.nodes;
    res.wall_s = bs.elapsed();
    return res;
}

nlohmann::json chromatic_record(const ChromaticResult& r) {
    nlohmann::json j = {
        {"property", "chromatic_number"},
        {"outcome", r.outcome == SolveOutcome::exact ? "exact" : "lower_upper_only"},
        {"lower", r.lower},
        {"upper", r.upper},
        {"nodes", r.nodes},
        {"wall_s", r.wall_s},
        {"certificate", r.coloring},
    };
    if (r.outcome == SolveOutcome::exact) j["value"] = r.value;
    return j;
}

nlohmann::json quasi_clique_record(const QuasiCliqueResult& r, double gamma) {
    nlohmann::json j = {
        {"property", "quasi_clique_number"},
        {"gamma", gamma},
        {"outcome", r.outcome == SolveOutcome::exact ? "exact" : "lower_upper_only"},
        {"lower", r.lower},
        {"upper", r.upper},
        {"nodes", r.nodes},
        {"wall_s", r.wall_s},
        {"certificate", r.witness},
    };
    if (r.outcome == SolveOutcome::exact) j["value"] = r.value;
    return j;
}

} // namespace irg
