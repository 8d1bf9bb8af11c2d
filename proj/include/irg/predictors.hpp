#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "irg/errors.hpp"

namespace irg {

// Kullback-Leibler divergence between Ber(gamma) and Ber(p), natural log.
// gamma = 0 and gamma = 1 use the 0*log 0 = 0 convention; p in (0,1) strictly
// (DomainError otherwise).
double kl_divergence_bernoulli(double gamma, double p);

// A theorem-predicted window for a graph property at finite parameters.
struct PredictionWindow {
    enum class Kind { chromatic_sparse, chromatic_lambda_n, quasi_clique };

    Kind kind = Kind::chromatic_sparse;

    // chromatic kinds
    std::uint32_t base = 0;                                // ell or d
    std::vector<std::uint32_t> members;                    // {ell..ell+2} or {d,d+1}
    std::optional<std::vector<std::uint32_t>> narrowed;    // refinement, when its condition holds
    bool refinement_reading_flagged = false; // the lambda_n = n refinement condition is
                                             // printed with an unbound variable; we read it
                                             // as k(m,m) in ((2d-1)log d, 2d log d)

    // quasi-clique kind
    double kl = 0.0;
    double omega = 0.0;          // 2 log(n) / D
    double coarse_lo = 0.0, coarse_hi = 0.0;   // (1 +- epsilon) omega
    double refined_center = 0.0;               // (2/D)(log n - log log n + log(e D / 2))
    double refined_lo = 0.0, refined_hi = 0.0; // [center - eps, center + 1 + eps]
    bool divergence_flag = false;              // D ~ 0, omega blowing up
    bool max_clique_specialization = false;    // gamma = 1

    nlohmann::json params; // the inputs that produced the window

    bool contains_chromatic(std::uint32_t chi) const;
    bool narrowed_contains(std::uint32_t chi) const;
    bool coarse_contains(double v) const;
    bool refined_contains(double v) const;

    nlohmann::json to_json() const;
};

// Theorem-scale predictor for the sparse regime:
//   ell = max{ l in N : 2(l-1) log(l-1) <= p_max (n-1) }
// (l = 2 is always feasible via 2*1*log 1 = 0). Window {ell, ell+1, ell+2},
// narrowed to {ell, ell+1} when p_max(n-1) lies in
// ((2 ell - 1) log ell + refine_epsilon, 2 ell log ell).
// Throws DegenerateProduct when p_max (n-1) <= 0.
PredictionWindow predict_chromatic_sparse_ell(double p_max_n, std::uint64_t n,
                                              double refine_epsilon = 1e-6);

// Predictor for lambda_n = n:
//   d = min{ c in N : k(m,m) < 2 c log(c) },
// window {d, d+1}, narrowed to {d} when k(m,m) in ((2d-1) log d, 2d log d).
PredictionWindow predict_chromatic_dense_d(double k_mm);

// Quasi-clique windows: center omega = 2 log(n)/D(gamma, p_max), coarse
// interval (1 +- epsilon) omega, and the refined interval
// [B - epsilon, B + 1 + epsilon] with B = (2/D)(log n - log log n + log(eD/2)).
// Accepts gamma in (p_max, 1]; gamma = 1 is the maximum-clique
// specialization with D = log(1/p_max). Throws HypothesisViolation when
// gamma <= p_max or gamma > 1.
PredictionWindow predict_quasi_clique(std::uint64_t n, double gamma, double p_max,
                                      double epsilon);

} // namespace irg
