#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <json.hpp>

#include "irg/graph.hpp"

namespace irg {

struct SolveBudget {
    std::uint64_t node_limit = 50'000'000;
    // Finite time limits make outcomes machine-dependent; experiment runs
    // leave this infinite so reports stay reproducible.
    double time_limit_s = std::numeric_limits<double>::infinity();
};

enum class SolveOutcome { exact, lower_upper_only };

struct ChromaticResult {
    SolveOutcome outcome = SolveOutcome::lower_upper_only;
    std::uint32_t value = 0; // chi(g) when exact
    std::uint32_t lower = 0;
    std::uint32_t upper = 0;
    std::vector<std::uint32_t> coloring; // proper coloring with `upper` colors, 1-based
    std::uint64_t nodes = 0;
    double wall_s = 0.0;
};

// Exact chromatic number by iterated k-colorability: DSATUR greedy upper
// bound, bounded-clique lower bound, then for ascending k a backtracking
// search with saturation-degree ordering, first-clique symmetry breaking and
// degree-< k kernelization. Budget exhaustion is an outcome, not an error.
ChromaticResult chromatic_number_exact(const Graph& g, const SolveBudget& budget = {});

// Greedy DSATUR bound. Ties: saturation desc, degree desc, index asc.
std::uint32_t chromatic_upper_greedy(const Graph& g, std::vector<std::uint32_t>* coloring = nullptr);

// Size of a clique found by bounded branch and bound (lower bound for chi).
std::uint32_t chromatic_lower_clique(const Graph& g, const SolveBudget& budget = {});

struct QuasiCliqueResult {
    SolveOutcome outcome = SolveOutcome::lower_upper_only;
    std::uint32_t value = 0; // omega^gamma(g) when exact
    std::uint32_t lower = 0;
    std::uint32_t upper = 0;
    std::vector<Vertex> witness; // feasible subset of size `lower`
    std::uint64_t nodes = 0;
    double wall_s = 0.0;
};

// Largest |Q| with edges(G[Q]) >= gamma * C(|Q|,2); the threshold is the
// real-valued inequality exactly as defined, no integer rounding.
// gamma = 1 specializes to maximum clique with a greedy-coloring bound.
QuasiCliqueResult quasi_clique_number_exact(const Graph& g, double gamma,
                                            const SolveBudget& budget = {});

QuasiCliqueResult max_clique_exact(const Graph& g, const SolveBudget& budget = {});

// Serialized solver record with the certificate, for independent
// re-verification.
nlohmann::json chromatic_record(const ChromaticResult& r);
nlohmann::json quasi_clique_record(const QuasiCliqueResult& r, double gamma);

} // namespace irg
