#include "irg/predictors.hpp"

#include <algorithm>
#include <cmath>

namespace irg {

double kl_divergence_bernoulli(double gamma, double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw DomainError("KL divergence needs p strictly inside (0,1)");
    }
    if (gamma < 0.0 || gamma > 1.0) {
        throw DomainError("KL divergence needs gamma in [0,1]");
    }
    if (gamma == 1.0) return std::log(1.0 / p);
    if (gamma == 0.0) return std::log(1.0 / (1.0 - p));
    return gamma * std::log(gamma / p) + (1.0 - gamma) * std::log((1.0 - gamma) / (1.0 - p));
}

bool PredictionWindow::contains_chromatic(std::uint32_t chi) const {
    return std::find(members.begin(), members.end(), chi) != members.end();
}

bool PredictionWindow::narrowed_contains(std::uint32_t chi) const {
    if (!narrowed) return contains_chromatic(chi);
    return std::find(narrowed->begin(), narrowed->end(), chi) != narrowed->end();
}

bool PredictionWindow::coarse_contains(double v) const {
    return coarse_lo <= v && v <= coarse_hi;
}

bool PredictionWindow::refined_contains(double v) const {
    return refined_lo <= v && v <= refined_hi;
}

nlohmann::json PredictionWindow::to_json() const {
    nlohmann::json j;
    j["params"] = params;
    switch (kind) {
    case Kind::chromatic_sparse:
        j["kind"] = "chromatic_sparse";
        j["ell"] = base;
        j["members"] = members;
        if (narrowed) j["narrowed"] = *narrowed;
        break;
    case Kind::chromatic_lambda_n:
        j["kind"] = "chromatic_lambda_n";
        j["d"] = base;
        j["members"] = members;
        if (narrowed) j["narrowed"] = *narrowed;
        j["refinement_reading_flagged"] = refinement_reading_flagged;
        break;
    case Kind::quasi_clique:
        j["kind"] = "quasi_clique";
        j["kl"] = kl;
        j["omega"] = omega;
        j["coarse"] = {coarse_lo, coarse_hi};
        j["refined_center"] = refined_center;
        j["refined"] = {refined_lo, refined_hi};
        j["divergence_flag"] = divergence_flag;
        j["max_clique_specialization"] = max_clique_specialization;
        break;
    }
    return j;
}

PredictionWindow predict_chromatic_sparse_ell(double p_max_n, std::uint64_t n,
                                              double refine_epsilon) {
    const double x = p_max_n * static_cast<double>(n - 1);
    if (!(x > 0.0)) {
        throw DegenerateProduct("p_max (n-1) must be positive");
    }
    // l = 2 is always feasible: 2 * 1 * log(1) = 0 <= x. Ascend while the
    // next l stays feasible.
    std::uint32_t ell = 2;
    while (2.0 * ell * std::log(static_cast<double>(ell)) <= x) ++ell;

    PredictionWindow w;
    w.kind = PredictionWindow::Kind::chromatic_sparse;
    w.base = ell;
    w.members = {ell, ell + 1, ell + 2};
    const double lo = (2.0 * ell - 1.0) * std::log(static_cast<double>(ell)) + refine_epsilon;
    const double hi = 2.0 * ell * std::log(static_cast<double>(ell));
    if (x > lo && x < hi) w.narrowed = std::vector<std::uint32_t>{ell, ell + 1};
    w.params = {{"p_max", p_max_n}, {"n", n}, {"product", x}, {"refine_epsilon", refine_epsilon}};
    return w;
}

PredictionWindow predict_chromatic_dense_d(double k_mm) {
    if (!(k_mm > 0.0)) {
        throw DegenerateProduct("k(m,m) must be positive");
    }
    std::uint32_t d = 2;
    while (!(k_mm < 2.0 * d * std::log(static_cast<double>(d)))) ++d;

    PredictionWindow w;
    w.kind = PredictionWindow::Kind::chromatic_lambda_n;
    w.base = d;
    w.members = {d, d + 1};
    // The printed refinement condition leaves its variable unbound; read it
    // as k(m,m) in ((2d-1) log d, 2d log d), mirroring the sparse case.
    w.refinement_reading_flagged = true;
    const double lo = (2.0 * d - 1.0) * std::log(static_cast<double>(d));
    const double hi = 2.0 * d * std::log(static_cast<double>(d));
    if (k_mm > lo && k_mm < hi) w.narrowed = std::vector<std::uint32_t>{d};
    w.params = {{"k_mm", k_mm}};
    return w;
}

PredictionWindow predict_quasi_clique(std::uint64_t n, double gamma, double p_max,
                                      double epsilon) {
    if (n < 3) throw DomainError("quasi-clique predictor needs n >= 3 (log log n)");
    if (!(gamma > p_max) || gamma > 1.0) {
        throw HypothesisViolation("predictor needs p_max < gamma <= 1");
    }
    const double d = kl_divergence_bernoulli(gamma, p_max);

    PredictionWindow w;
    w.kind = PredictionWindow::Kind::quasi_clique;
    w.kl = d;
    w.max_clique_specialization = gamma == 1.0;
    w.divergence_flag = d < 1e-9;
    const double logn = std::log(static_cast<double>(n));
    w.omega = 2.0 * logn / d;
    w.coarse_lo = (1.0 - epsilon) * w.omega;
    w.coarse_hi = (1.0 + epsilon) * w.omega;
    w.refined_center =
        (2.0 / d) * (logn - std::log(logn) + std::log(std::exp(1.0) * d / 2.0));
    w.refined_lo = w.refined_center - epsilon;
    w.refined_hi = w.refined_center + 1.0 + epsilon;
    w.params = {{"n", n}, {"gamma", gamma}, {"p_max", p_max}, {"epsilon", epsilon}};
    return w;
}

} // namespace irg
