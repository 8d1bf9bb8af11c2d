#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "irg/graph.hpp"
#include "irg/kernel.hpp"
#include "irg/rng.hpp"

namespace irg {

// r(n): the shrinking half-width of the weight window R_n.
class RateFunction {
public:
    enum class Form { inverse_log, inverse_log_power, table };

    static RateFunction inverse_log();                  // r(n) = 1/log(n)
    static RateFunction inverse_log_power(double alpha); // r(n) = 1/log(n)^alpha
    static RateFunction table(std::map<std::uint64_t, double> entries);

    // Requires n >= 2 for the log forms; table lookups must hit exactly.
    double operator()(std::uint64_t n) const;
    Form form() const noexcept { return form_; }

    nlohmann::json describe() const;
    static RateFunction from_json(const nlohmann::json& spec);

    // r(n) -> 0 and n r(n) -> inf are asymptotic; on a finite n range we can
    // only report whether the sampled values move the right way.
    struct Diagnostics {
        bool r_nonincreasing = true;
        bool nr_nondecreasing = true;
        std::vector<std::pair<std::uint64_t, double>> values;
    };
    Diagnostics diagnostics(std::span<const std::uint32_t> ns) const;

private:
    Form form_ = Form::inverse_log;
    double alpha_ = 1.0;
    std::map<std::uint64_t, double> table_;
};

// Erdos-Renyi sample: edge {i,j} present iff U_{ij} <= p. Uses the stream's
// pair addressing, so the same stream produces the same U_{ij} regardless of
// what else is drawn.
Graph sample_er(Vertex n, double p, const UniformStream& stream);

// Inhomogeneous random graph: weights W_i from the stream, edge {i,j}
// present iff U_{ij} <= k(W_i,W_j)/lambda_n. Throws ProbabilityExceedsOne
// when the declared max makes any connection probability exceed 1.
std::pair<Graph, std::vector<double>> sample_irg(Vertex n, const Kernel& k,
                                                 const ScalingSequence& lambda,
                                                 const UniformStream& stream);

// Jointly sampled (G'_n, G_n, G''_n) from one stream of shared uniforms:
//   middle edge  iff U_{ij} <= k(W_i,W_j)/lambda_n
//   upper edge   iff U_{ij} <= p_max
//   lower edge   iff both weights lie in R_n and U_{ij} <= p_inf
// The sandwich lower <= middle <= upper holds for every sample by
// construction, not just with high probability.
struct CoupledTriple {
    Graph lower;
    Graph middle;
    Graph upper;
    std::vector<double> weights;
    VertexSubset heavy_set; // V' = { i : W_i in R_n }
    Region region;          // R_n
    double rate_value = 0;  // r(n)
    double p_inf = 0;
    double p_max = 0;
    std::uint64_t seed = 0;
};

CoupledTriple sample_coupled_triple(Vertex n, const Kernel& k, const ScalingSequence& lambda,
                                    const RateFunction& r, const UniformStream& stream);

// Induced subgraph of the lower graph on the heavy set; conditionally on the
// weights this is an ER graph on |V'| vertices with probability p_inf.
Graph lower_bound_core(const CoupledTriple& t);

// E|V'| = n * length(R_n); equals 2 n r(n) when the window is interior and
// is smaller when clipped at the boundary of [0,1].
double expected_heavy_count(std::uint64_t n, const RateFunction& r, double m);

// Directory layout: lower.el / middle.el / upper.el, weights.txt (one value
// per line, 17 significant digits), meta.json.
void save_coupled_triple(const CoupledTriple& t, const std::filesystem::path& dir,
                         const nlohmann::json& kernel_desc);
CoupledTriple load_coupled_triple(const std::filesystem::path& dir);

} // namespace irg
