#include "irg/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace irg {

namespace {

void require_finite_nonnegative(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0) {
        throw ValueOutOfRange(std::string(what) + " must be finite and nonnegative");
    }
}

// Dense scan plus golden-section refinement of f on [lo,hi].
// sign = +1 locates a maximum, -1 a minimum. Returns the extremal point.
double refine_extremum_1d(const std::function<double(double)>& f, double lo, double hi, int sign) {
    constexpr int kScan = 4097;
    double best_x = lo;
    double best = sign * f(lo);
    for (int i = 1; i < kScan; ++i) {
        const double x = lo + (hi - lo) * i / (kScan - 1);
        const double v = sign * f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    const double cell = (hi - lo) / (kScan - 1);
    double a = std::max(lo, best_x - cell);
    double b = std::min(hi, best_x + cell);
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = sign * f(c);
    double fd = sign * f(d);
    for (int it = 0; it < 80 && (b - a) > 1e-15; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = sign * f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = sign * f(d);
        }
    }
    const double mid = 0.5 * (a + b);
    return sign * f(mid) > best ? mid : best_x;
}

// Adaptive grid refinement for the infimum of f over [lo,hi]^2: evaluate a
// 64x64 grid, zoom into the cell neighborhood of the current minimum, stop
// when successive estimates differ by less than 1e-9 relative.
double adaptive_inf_2d(const std::function<double(double, double)>& f, double lo, double hi) {
    constexpr int kGrid = 64;
    double xlo = lo, xhi = hi, ylo = lo, yhi = hi;
    double best = std::numeric_limits<double>::infinity();
    double prev = best;
    for (int iter = 0; iter < 100; ++iter) {
        int bi = 0, bj = 0;
        double cur = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kGrid; ++i) {
            for (int j = 0; j < kGrid; ++j) {
                const double x = xlo + (xhi - xlo) * i / (kGrid - 1);
                const double y = ylo + (yhi - ylo) * j / (kGrid - 1);
                const double v = f(x, y);
                if (v < cur) {
                    cur = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        best = std::min(best, cur);
        if (iter > 0 && std::abs(prev - best) <= 1e-9 * std::max(1.0, std::abs(best))) break;
        prev = best;
        const double cx = (xhi - xlo) / (kGrid - 1);
        const double cy = (yhi - ylo) / (kGrid - 1);
        const double nx = xlo + cx * bi;
        const double ny = ylo + cy * bj;
        xlo = std::max(lo, nx - cx);
        xhi = std::min(hi, nx + cx);
        ylo = std::max(lo, ny - cy);
        yhi = std::min(hi, ny + cy);
    }
    return best;
}

} // namespace

double Kernel::operator()(double x, double y) const {
    switch (family_) {
    case Family::constant:
        return const_p_;
    case Family::bump: {
        const double dx = x - bump_m_;
        const double dy = y - bump_m_;
        return bump_peak_ * std::exp(-(dx * dx + dy * dy) / (bump_width_ * bump_width_));
    }
    case Family::block:
        return cells_[block_index(x)][block_index(y)];
    case Family::rank1:
        return rank1_g_(x) * rank1_g_(y);
    case Family::custom:
        return custom_f_(x, y);
    }
    return 0.0;
}

std::size_t Kernel::block_index(double x) const {
    // Cell t covers [cut_{t-1}, cut_t); x = 1 falls into the last cell.
    std::size_t t = 0;
    while (t < cuts_.size() && x >= cuts_[t]) ++t;
    return t;
}

double Kernel::infimum_over(const Region& region) const {
    switch (family_) {
    case Family::constant:
        return const_p_;
    case Family::bump: {
        // Decreasing in the distance from (m,m): the infimum over the square
        // sits at the corner farthest from m in both coordinates.
        const double d = std::max(std::abs(region.lo - bump_m_), std::abs(region.hi - bump_m_));
        return bump_peak_ * std::exp(-2.0 * d * d / (bump_width_ * bump_width_));
    }
    case Family::block: {
        const std::size_t t_lo = block_index(region.lo);
        const std::size_t t_hi = block_index(region.hi);
        double vmin = std::numeric_limits<double>::infinity();
        for (std::size_t t = t_lo; t <= t_hi; ++t) {
            for (std::size_t u = t_lo; u <= t_hi; ++u) {
                vmin = std::min(vmin, cells_[t][u]);
            }
        }
        return vmin;
    }
    case Family::rank1: {
        const double xmin = refine_extremum_1d(rank1_g_, region.lo, region.hi, -1);
        const double gmin = rank1_g_(xmin);
        return gmin * gmin;
    }
    case Family::custom:
        return adaptive_inf_2d(custom_f_, region.lo, region.hi);
    }
    return 0.0;
}

Kernel Kernel::constant(double p) {
    require_finite_nonnegative(p, "constant kernel value");
    Kernel k;
    k.family_ = Family::constant;
    k.const_p_ = p;
    k.max_ = {0.5, p};
    k.spec_ = {{"family", "constant"}, {"p", p}};
    return k;
}

Kernel Kernel::bump(double m, double peak, double width) {
    require_finite_nonnegative(peak, "bump peak");
    if (m < 0.0 || m > 1.0) throw ValueOutOfRange("bump center must lie in [0,1]");
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw ValueOutOfRange("bump width must be positive");
    }
    Kernel k;
    k.family_ = Family::bump;
    k.bump_m_ = m;
    k.bump_peak_ = peak;
    k.bump_width_ = width;
    k.max_ = {m, peak};
    k.spec_ = {{"family", "bump"}, {"m", m}, {"peak", peak}, {"width", width}};
    return k;
}

Kernel Kernel::block(std::vector<std::vector<double>> values, std::vector<double> breakpoints) {
    const std::size_t dim = values.size();
    if (dim == 0) throw ValueOutOfRange("block kernel needs at least one cell");
    for (const auto& row : values) {
        if (row.size() != dim) throw AsymmetricBlockMatrix("block matrix must be square");
        for (double v : row) require_finite_nonnegative(v, "block cell value");
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
            if (values[i][j] != values[j][i]) {
                throw AsymmetricBlockMatrix("block matrix must be symmetric");
            }
        }
    }
    if (breakpoints.size() + 1 != dim) {
        throw ValueOutOfRange("block kernel needs dim-1 interior breakpoints");
    }
    double prev = 0.0;
    for (double b : breakpoints) {
        if (!(b > prev) || !(b < 1.0)) {
            throw ValueOutOfRange("breakpoints must be strictly ascending inside (0,1)");
        }
        prev = b;
    }

    // Declared max: midpoint of the maximal diagonal cell.
    std::size_t best = 0;
    for (std::size_t t = 1; t < dim; ++t) {
        if (values[t][t] > values[best][best]) best = t;
    }
    const double lo = best == 0 ? 0.0 : breakpoints[best - 1];
    const double hi = best == dim - 1 ? 1.0 : breakpoints[best];

    Kernel k;
    k.family_ = Family::block;
    k.cells_ = std::move(values);
    k.cuts_ = std::move(breakpoints);
    k.max_ = {0.5 * (lo + hi), k.cells_[best][best]};
    k.spec_ = {{"family", "block"}, {"values", k.cells_}, {"breakpoints", k.cuts_}};
    return k;
}

Kernel Kernel::rank1(std::function<double(double)> g) {
    constexpr int kScan = 4097;
    for (int i = 0; i < kScan; ++i) {
        const double x = static_cast<double>(i) / (kScan - 1);
        const double v = g(x);
        if (!std::isfinite(v) || v < 0.0) {
            throw ValueOutOfRange("rank-1 factor must be finite and nonnegative on [0,1]");
        }
    }
    const double m = refine_extremum_1d(g, 0.0, 1.0, +1);
    const double gm = g(m);
    Kernel k;
    k.family_ = Family::rank1;
    k.rank1_g_ = std::move(g);
    k.max_ = {m, gm * gm};
    k.spec_ = {{"family", "rank1"}};
    return k;
}

Kernel Kernel::custom(std::function<double(double, double)> f, DiagonalMax declared) {
    require_finite_nonnegative(declared.value, "declared max value");
    if (declared.location < 0.0 || declared.location > 1.0) {
        throw ValueOutOfRange("declared max location must lie in [0,1]");
    }
    Kernel k;
    k.family_ = Family::custom;
    k.custom_f_ = std::move(f);
    k.max_ = declared;
    k.spec_ = {{"family", "custom"}};
    return k;
}

Kernel Kernel::block_from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open kernel grid file " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("kernel grid file is empty: " + path.string());
    const std::size_t dim = rows.size();
    std::vector<double> cuts;
    for (std::size_t t = 1; t < dim; ++t) {
        cuts.push_back(static_cast<double>(t) / static_cast<double>(dim));
    }
    Kernel k = block(std::move(rows), std::move(cuts));
    k.spec_ = {{"family", "block_file"}, {"path", path.string()}};
    return k;
}

Kernel Kernel::from_json(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("family")) {
        throw ConfigError("kernel spec needs a \"family\" field");
    }
    const std::string family = spec.at("family").get<std::string>();
    try {
        if (family == "constant") {
            return constant(spec.at("p").get<double>());
        }
        if (family == "bump") {
            return bump(spec.at("m").get<double>(), spec.at("peak").get<double>(),
                        spec.at("width").get<double>());
        }
        if (family == "block") {
            return block(spec.at("values").get<std::vector<std::vector<double>>>(),
                         spec.at("breakpoints").get<std::vector<double>>());
        }
        if (family == "block_file" || family == "custom") {
            return block_from_file(spec.at("path").get<std::string>());
        }
        if (family == "rank1") {
            const auto coeffs = spec.at("coeffs").get<std::vector<double>>();
            if (coeffs.empty()) throw ConfigError("rank1 kernel needs polynomial coefficients");
            Kernel k = rank1([coeffs](double x) {
                double acc = 0.0;
                for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
                return acc;
            });
            k.spec_ = {{"family", "rank1"}, {"coeffs", coeffs}};
            return k;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("kernel spec: ") + e.what());
    }
    throw ConfigError("unknown kernel family \"" + family + "\"");
}

nlohmann::json Kernel::describe() const {
    nlohmann::json j = spec_.is_null() ? nlohmann::json{{"family", "custom"}} : spec_;
    j["declared_max"] = {{"m", max_.location}, {"value", max_.value}};
    return j;
}

ScalingSequence ScalingSequence::constant(double c) {
    if (!(c > 0.0)) throw ValueOutOfRange("scaling constant must be positive");
    return ScalingSequence(Rule::constant, c, 0.0);
}

ScalingSequence ScalingSequence::linear(double c) {
    if (!(c > 0.0)) throw ValueOutOfRange("scaling coefficient must be positive");
    return ScalingSequence(Rule::linear, c, 1.0);
}

ScalingSequence ScalingSequence::power(double c, double alpha) {
    if (!(c > 0.0) || !(alpha > 0.0)) {
        throw ValueOutOfRange("scaling power rule needs positive coefficient and exponent");
    }
    return ScalingSequence(Rule::power, c, alpha);
}

double ScalingSequence::operator()(std::uint64_t n) const {
    switch (rule_) {
    case Rule::constant:
        return c_;
    case Rule::linear:
        return c_ * static_cast<double>(n);
    case Rule::power:
        return c_ * std::pow(static_cast<double>(n), alpha_);
    }
    return c_;
}

nlohmann::json ScalingSequence::describe() const {
    switch (rule_) {
    case Rule::constant:
        return {{"rule", "constant"}, {"c", c_}};
    case Rule::linear:
        return {{"rule", "linear"}, {"c", c_}};
    case Rule::power:
        return {{"rule", "power"}, {"c", c_}, {"alpha", alpha_}};
    }
    return {};
}

ScalingSequence ScalingSequence::from_json(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("rule")) {
        throw ConfigError("scaling spec needs a \"rule\" field");
    }
    const std::string rule = spec.at("rule").get<std::string>();
    try {
        const double c = spec.value("c", 1.0);
        if (rule == "constant") return constant(c);
        if (rule == "linear") return linear(c);
        if (rule == "power") return power(c, spec.at("alpha").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scaling spec: ") + e.what());
    } catch (const ValueOutOfRange& e) {
        throw ConfigError(std::string("scaling spec: ") + e.what());
    }
    throw ConfigError("unknown scaling rule \"" + rule + "\"");
}

Region::Region(double lo_in, double hi_in) {
    lo = std::max(0.0, lo_in);
    hi = std::min(1.0, hi_in);
    if (lo > hi) throw EmptyRegion("region is empty after clipping to [0,1]");
}

Region Region::around(double m, double r) {
    return Region(m - r, m + r);
}

nlohmann::json KernelValidationReport::to_json() const {
    return {
        {"max_symmetry_violation", max_symmetry_violation},
        {"max_excess_over_declared", max_excess_over_declared},
        {"box_half_widths", box_half_widths},
        {"oscillation", oscillation},
        {"tolerance", tolerance},
        {"continuity_threshold", continuity_threshold},
        {"symmetry_ok", symmetry_ok},
        {"boundedness_ok", boundedness_ok},
        {"continuity_ok", continuity_ok},
        {"pass", pass()},
    };
}

KernelValidationReport validate_kernel(const Kernel& k, std::uint32_t grid_resolution,
                                       double continuity_threshold) {
    if (grid_resolution < 2) throw ValueOutOfRange("grid resolution must be >= 2");
    KernelValidationReport rep;
    rep.continuity_threshold = continuity_threshold;

    const auto grid_point = [&](std::uint32_t i) {
        return static_cast<double>(i) / (grid_resolution - 1);
    };
    for (std::uint32_t i = 0; i < grid_resolution; ++i) {
        for (std::uint32_t j = i; j < grid_resolution; ++j) {
            const double x = grid_point(i);
            const double y = grid_point(j);
            const double v = k(x, y);
            rep.max_symmetry_violation =
                std::max(rep.max_symmetry_violation, std::abs(v - k(y, x)));
            rep.max_excess_over_declared =
                std::max(rep.max_excess_over_declared, v - k.declared_max().value);
        }
    }
    rep.symmetry_ok = rep.max_symmetry_violation <= rep.tolerance;
    rep.boundedness_ok = rep.max_excess_over_declared <= rep.tolerance;

    // Oscillation over shrinking boxes around (m,m); a continuity proxy.
    const double m = k.declared_max().location;
    rep.box_half_widths = {0.1, 0.05, 0.01, 0.005};
    constexpr int kBoxSamples = 33;
    for (double h : rep.box_half_widths) {
        const double lo = std::max(0.0, m - h);
        const double hi = std::min(1.0, m + h);
        double vmin = std::numeric_limits<double>::infinity();
        double vmax = -vmin;
        for (int i = 0; i < kBoxSamples; ++i) {
            for (int j = 0; j < kBoxSamples; ++j) {
                const double x = lo + (hi - lo) * i / (kBoxSamples - 1);
                const double y = lo + (hi - lo) * j / (kBoxSamples - 1);
                const double v = k(x, y);
                vmin = std::min(vmin, v);
                vmax = std::max(vmax, v);
            }
        }
        rep.oscillation.push_back(vmax - vmin);
    }
    bool nonincreasing = true;
    for (std::size_t i = 1; i < rep.oscillation.size(); ++i) {
        if (rep.oscillation[i] > rep.oscillation[i - 1] + rep.tolerance) nonincreasing = false;
    }
    rep.continuity_ok = nonincreasing && rep.oscillation.back() <= continuity_threshold;
    return rep;
}

double p_max(const Kernel& k, const ScalingSequence& lambda, std::uint64_t n) {
    const double p = k.declared_max().value / lambda(n);
    if (p > 1.0) {
        throw ProbabilityExceedsOne("p_max = " + std::to_string(p) +
                                    " exceeds 1; kernel values above lambda_n");
    }
    return p;
}

double p_inf_over_region(const Kernel& k, const Region& region, const ScalingSequence& lambda,
                         std::uint64_t n) {
    return k.infimum_over(region) / lambda(n);
}

} // namespace irg
