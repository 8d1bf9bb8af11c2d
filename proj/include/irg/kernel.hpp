#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include <json.hpp>

#include "irg/errors.hpp"

namespace irg {

// Declared maximizer of the kernel on the diagonal: the point (m,m) and the
// value k(m,m). The toolkit never searches for the maximizer globally; it is
// declared by the constructor (built-ins) or the caller (custom) and
// cross-checked by validate_kernel.
struct DiagonalMax {
    double location = 0.0; // m
    double value = 0.0;    // k(m,m)
};

// Closed interval [lo,hi] inside [0,1]; the weight window R_n.
struct Region {
    double lo = 0.0;
    double hi = 1.0;

    Region() = default;
    Region(double lo, double hi); // clips to [0,1]; throws EmptyRegion if lo > hi

    static Region around(double m, double r); // [m-r, m+r] clipped to [0,1]

    double length() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

// Symmetric kernel on [0,1]^2. Values may exceed 1: such kernels are usable
// only with scalings satisfying lambda_n >= sup k, and the connection
// probability k/lambda_n is range-checked at sampling time.
class Kernel {
public:
    enum class Family { constant, rank1, block, bump, custom };

    double operator()(double x, double y) const;
    Family family() const noexcept { return family_; }
    const DiagonalMax& declared_max() const noexcept { return max_; }

    nlohmann::json describe() const;

    // k(x,y) = p everywhere. Declared max at m = 0.5.
    static Kernel constant(double p);

    // k(x,y) = g(x) g(y) for a nonnegative g. Only the symmetric product is
    // supported; the declared max is located by a dense scan of g plus local
    // refinement, so g should be reasonably smooth.
    static Kernel rank1(std::function<double(double)> g);

    // Piecewise-constant kernel: `breakpoints` are the interior cuts
    // 0 < b_1 < ... < b_{k-1} < 1 and `values` is the symmetric k x k cell
    // matrix. Cell t covers [b_{t-1}, b_t) (last cell closed at 1).
    // Declared max: midpoint of the maximal diagonal cell.
    static Kernel block(std::vector<std::vector<double>> values,
                        std::vector<double> breakpoints);

    // k(x,y) = peak * exp(-((x-m)^2 + (y-m)^2) / width^2).
    static Kernel bump(double m, double peak, double width);

    // Arbitrary symmetric evaluator with a caller-declared diagonal max.
    static Kernel custom(std::function<double(double, double)> f, DiagonalMax declared);

    // Whitespace-separated square matrix -> block kernel on a uniform grid.
    static Kernel block_from_file(const std::filesystem::path& path);

    static Kernel from_json(const nlohmann::json& spec);

    // Infimum of k over region^2 (undivided by lambda). Exact for the
    // closed-form families, adaptive refinement otherwise.
    double infimum_over(const Region& region) const;

private:
    Kernel() = default;

    Family family_ = Family::constant;
    DiagonalMax max_;
    double const_p_ = 0.0;
    double bump_m_ = 0.0, bump_peak_ = 0.0, bump_width_ = 1.0;
    std::vector<double> cuts_;
    std::vector<std::vector<double>> cells_;
    std::function<double(double)> rank1_g_;
    std::function<double(double, double)> custom_f_;
    nlohmann::json spec_; // config echo, when available

    std::size_t block_index(double x) const;
};

// lambda_n, the scaling sequence dividing the kernel.
class ScalingSequence {
public:
    enum class Rule { constant, linear, power };

    static ScalingSequence constant(double c);         // lambda_n = c
    static ScalingSequence linear(double c);           // lambda_n = c * n
    static ScalingSequence power(double c, double alpha); // lambda_n = c * n^alpha

    double operator()(std::uint64_t n) const;
    Rule rule() const noexcept { return rule_; }
    double coefficient() const noexcept { return c_; }
    double exponent() const noexcept { return alpha_; }

    nlohmann::json describe() const;
    static ScalingSequence from_json(const nlohmann::json& spec);

private:
    ScalingSequence(Rule rule, double c, double alpha) : rule_(rule), c_(c), alpha_(alpha) {}
    Rule rule_;
    double c_;
    double alpha_;
};

struct KernelValidationReport {
    double max_symmetry_violation = 0.0;
    double max_excess_over_declared = 0.0;
    // Oscillation of k over boxes around (m,m) of half-width 0.1, 0.05,
    // 0.01, 0.005 — a machine-checkable proxy for continuity at (m,m).
    std::vector<double> box_half_widths;
    std::vector<double> oscillation;
    double tolerance = 1e-12;
    double continuity_threshold = 0.05;
    bool symmetry_ok = false;
    bool boundedness_ok = false;
    bool continuity_ok = false;

    bool pass() const noexcept { return symmetry_ok && boundedness_ok && continuity_ok; }
    nlohmann::json to_json() const;
};

KernelValidationReport validate_kernel(const Kernel& k, std::uint32_t grid_resolution,
                                       double continuity_threshold = 0.05);

// k(m,m) / lambda_n. Throws ProbabilityExceedsOne if the result leaves [0,1].
double p_max(const Kernel& k, const ScalingSequence& lambda, std::uint64_t n);

// inf over region^2 of k / lambda_n. Exact for constant/block/bump/rank1;
// otherwise an adaptive 64x64 grid refined around the current minimum until
// successive estimates agree to 1e-9 relative.
double p_inf_over_region(const Kernel& k, const Region& region,
                         const ScalingSequence& lambda, std::uint64_t n);

} // namespace irg
