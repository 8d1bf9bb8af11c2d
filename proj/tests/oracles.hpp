#pragma once

// Test-side oracles, deliberately independent of the solver implementations:
// plain enumeration, exact binomial arithmetic and numerical quadrature.

#include <cstdint>
#include <vector>

#include "irg/graph.hpp"
#include "irg/kernel.hpp"

namespace oracle {

// Minimum colors over all assignments, by plain recursion in vertex-index
// order (no ordering heuristics, no kernelization, no clique seeding).
std::uint32_t brute_chromatic(const irg::Graph& g);

// True when some assignment of exactly k colors properly colors g.
bool brute_k_colorable(const irg::Graph& g, std::uint32_t k);

// Largest subset size meeting the quasi-clique threshold, by enumerating
// all 2^n subsets. Requires n <= 24.
std::uint32_t brute_quasi_clique(const irg::Graph& g, double gamma);

// Exact P(Binomial(n, p) <= k), summed in long double.
double binomial_cdf(std::uint32_t n, double p, std::int64_t k);

// Midpoint-rule estimate of E[k(X,Y)] over the unit square (points^2 cells).
double mean_kernel_quadrature(const irg::Kernel& k, std::uint32_t points);

// Midpoint-rule estimate of E_x[(E_y k(x,y))^2]; used for the variance of
// the IRG edge count (pairs sharing a vertex are weight-correlated).
double mean_row_square_quadrature(const irg::Kernel& k, std::uint32_t points);

// The Petersen graph (10 vertices, 15 edges, 3-chromatic, triangle-free).
irg::Graph petersen();

} // namespace oracle
