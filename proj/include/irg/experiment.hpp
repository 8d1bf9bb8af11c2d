#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "irg/kernel.hpp"
#include "irg/sampler.hpp"
#include "irg/solvers.hpp"

namespace irg {

enum class ExperimentKind {
    coupling_validation,
    chromatic_window,
    quasi_clique_window,
    concentration,
    assumption_suite,
    counterexample,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

// Parsed, validated experiment configuration. The seed is mandatory: there
// is no wall-clock default, a config names its randomness completely.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::coupling_validation;
    nlohmann::json kernel;  // kernel spec (family + parameters)
    nlohmann::json scaling; // {"rule": ...}
    nlohmann::json rate;    // {"form": ...}
    std::vector<std::uint32_t> n_values;
    std::uint32_t trials = 1;
    double gamma = 1.0;
    double epsilon = 0.35;
    std::uint64_t seed = 0;
    SolveBudget budget;
    std::uint32_t threads = 1;
    double coverage_threshold = 0.8;
    std::vector<std::uint32_t> t_values; // concentration offsets
    std::string window_gate = "refined"; // quasi-clique: which window gates pass
    std::string model = "irg";           // "er" samples ER(n, p_max) instead (baseline)
    bool record_bounding_graphs = true;  // also solve the coupled lower/upper graphs
    std::string output_path;

    // Throws ConfigError on missing/invalid/unknown fields.
    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    std::string hash() const; // fnv1a of the canonical compact dump

    Kernel make_kernel() const;
    ScalingSequence make_scaling() const;
    RateFunction make_rate() const;
};

// A finished experiment. `records` has exactly trials * |n_values| entries;
// inconclusive solver outcomes are present with their brackets, never
// dropped. Reports contain no wall-clock data so identical configs produce
// byte-identical reports on any machine and any thread count.
struct ExperimentReport {
    ExperimentConfig config;
    std::string config_hash;
    std::string version;
    nlohmann::json records = nlohmann::json::array();
    nlohmann::json aggregates = nlohmann::json::object();
    bool passed = true;
    std::vector<std::string> failures;

    nlohmann::json to_json() const;
};

ExperimentReport run_coupling_validation(const ExperimentConfig& cfg);
ExperimentReport run_chromatic_window(const ExperimentConfig& cfg);
ExperimentReport run_quasi_clique_window(const ExperimentConfig& cfg);
ExperimentReport run_concentration_check(const ExperimentConfig& cfg);
ExperimentReport run_assumption_suite(const ExperimentConfig& cfg);
ExperimentReport run_counterexample(const ExperimentConfig& cfg);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Writes <base>.json, <base>.csv and <base>.plot. Output is bit-stable:
// identical reports produce identical bytes.
void emit_report(const ExperimentReport& report, const std::filesystem::path& base);

std::string report_csv(const ExperimentReport& report);
std::string report_plotdata(const ExperimentReport& report);

// Independent re-verification of an emitted report: config hash, record
// counts, aggregate recomputation, certificate checks against re-sampled
// graphs, and sandwich/window flags. Returns process-style exit codes:
// 0 = verified, 1 = verification failure, 2 = malformed input.
struct VerifyResult {
    int exit_code = 0;
    std::vector<std::string> notes;
};
VerifyResult verify_report(const std::filesystem::path& report_json);

extern const char* const kVersion;

} // namespace irg
