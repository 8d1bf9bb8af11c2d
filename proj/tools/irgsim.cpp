// Command-line front end: sampling, coupling, solving, predicting and the
// Monte Carlo experiment harness.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "irg/experiment.hpp"
#include "irg/graph.hpp"
#include "irg/json_util.hpp"
#include "irg/kernel.hpp"
#include "irg/predictors.hpp"
#include "irg/sampler.hpp"
#include "irg/solvers.hpp"

namespace {

struct KernelOptions {
    std::optional<double> constant_p;
    std::vector<double> bump; // m, peak, width
    std::string block_file;
    std::string kernel_json;

    void attach(CLI::App* app) {
        auto* p = app->add_option("--p", constant_p, "constant kernel value");
        auto* b = app->add_option("--bump", bump, "bump kernel: m peak width")->expected(3);
        auto* f = app->add_option("--block-file", block_file,
                                  "whitespace-separated square grid file (block kernel)");
        auto* j = app->add_option("--kernel-json", kernel_json, "full kernel spec as JSON");
        p->excludes(b)->excludes(f)->excludes(j);
        b->excludes(f)->excludes(j);
        f->excludes(j);
    }

    irg::Kernel build() const {
        if (constant_p) return irg::Kernel::constant(*constant_p);
        if (!bump.empty()) return irg::Kernel::bump(bump[0], bump[1], bump[2]);
        if (!block_file.empty()) return irg::Kernel::block_from_file(block_file);
        if (!kernel_json.empty()) return irg::Kernel::from_json(nlohmann::json::parse(kernel_json));
        return irg::Kernel::constant(0.5);
    }
};

struct ScalingOptions {
    std::string rule = "constant";
    double c = 1.0;
    double alpha = 1.0;

    void attach(CLI::App* app) {
        app->add_option("--lambda-rule", rule, "scaling rule: constant|linear|power")
            ->check(CLI::IsMember({"constant", "linear", "power"}));
        app->add_option("--lambda-c", c, "scaling coefficient");
        app->add_option("--lambda-alpha", alpha, "exponent for the power rule");
    }

    irg::ScalingSequence build() const {
        if (rule == "linear") return irg::ScalingSequence::linear(c);
        if (rule == "power") return irg::ScalingSequence::power(c, alpha);
        return irg::ScalingSequence::constant(c);
    }
};

struct RateOptions {
    std::string form = "inverse_log";
    double alpha = 1.0;

    void attach(CLI::App* app) {
        app->add_option("--rate", form, "rate form: inverse_log|inverse_log_power")
            ->check(CLI::IsMember({"inverse_log", "inverse_log_power"}));
        app->add_option("--rate-alpha", alpha, "exponent for inverse_log_power");
    }

    irg::RateFunction build() const {
        if (form == "inverse_log_power") return irg::RateFunction::inverse_log_power(alpha);
        return irg::RateFunction::inverse_log();
    }
};

void write_graph_output(const irg::Graph& g, const std::string& out) {
    if (out == "-") {
        irg::write_edge_list(g, std::cout);
    } else {
        irg::save_edge_list(g, out);
    }
}

int run_experiment_command(const std::string& config_path, const nlohmann::json& overrides) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open config " << config_path << "\n";
        return 2;
    }
    nlohmann::json raw = nlohmann::json::parse(in);
    for (auto it = overrides.begin(); it != overrides.end(); ++it) raw[it.key()] = it.value();

    const irg::ExperimentConfig cfg = irg::ExperimentConfig::from_json(raw);
    const irg::ExperimentReport report = irg::run_experiment(cfg);

    const std::string base = cfg.output_path.empty() ? "report" : cfg.output_path;
    irg::emit_report(report, base);

    std::cout << "report: " << base << ".json (config " << report.config_hash << ")\n";
    for (const auto& f : report.failures) std::cout << "failure: " << f << "\n";
    std::cout << (report.passed ? "all assertions passed" : "assertion failures present") << "\n";
    return report.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled random graph simulation and verification toolkit"};
    app.require_subcommand(1);

    // ---- sample ----
    auto* sample = app.add_subcommand("sample", "sample an ER graph or an IRG");
    std::uint32_t s_n = 0;
    std::uint64_t s_seed = 0;
    std::string s_out = "-";
    std::string s_weights_out;
    bool s_er = false;
    KernelOptions s_kernel;
    ScalingOptions s_scaling;
    sample->add_option("--n", s_n, "vertex count")->required();
    sample->add_option("--seed", s_seed, "stream seed")->required();
    sample->add_option("-o,--out", s_out, "edge-list output path ('-' = stdout)");
    sample->add_option("--weights-out", s_weights_out, "also write the sampled weights");
    sample->add_flag("--er", s_er, "sample ER(n, p) directly (requires --p)");
    s_kernel.attach(sample);
    s_scaling.attach(sample);

    // ---- couple ----
    auto* couple = app.add_subcommand("couple", "sample a coupled triple into a directory");
    std::uint32_t c_n = 0;
    std::uint64_t c_seed = 0;
    std::string c_out;
    KernelOptions c_kernel;
    ScalingOptions c_scaling;
    RateOptions c_rate;
    couple->add_option("--n", c_n, "vertex count")->required();
    couple->add_option("--seed", c_seed, "stream seed")->required();
    couple->add_option("-o,--out", c_out, "output directory")->required();
    c_kernel.attach(couple);
    c_scaling.attach(couple);
    c_rate.attach(couple);

    // ---- chromatic ----
    auto* chrom = app.add_subcommand("chromatic", "exact chromatic number of an edge-list graph");
    std::string ch_file;
    irg::SolveBudget ch_budget;
    chrom->add_option("graph", ch_file, "edge-list file")->required();
    chrom->add_option("--node-limit", ch_budget.node_limit, "search node budget");
    chrom->add_option("--time-limit-s", ch_budget.time_limit_s, "wall-clock budget (seconds)");

    // ---- quasi-clique ----
    auto* quasi = app.add_subcommand("quasi-clique",
                                     "exact gamma-quasi-clique number of an edge-list graph");
    std::string q_file;
    double q_gamma = 1.0;
    irg::SolveBudget q_budget;
    quasi->add_option("graph", q_file, "edge-list file")->required();
    quasi->add_option("--gamma", q_gamma, "density threshold in (0,1]")->required();
    quasi->add_option("--node-limit", q_budget.node_limit, "search node budget");
    quasi->add_option("--time-limit-s", q_budget.time_limit_s, "wall-clock budget (seconds)");

    // ---- predict ----
    auto* predict = app.add_subcommand("predict", "theorem-scale predictor windows");
    predict->require_subcommand(1);
    auto* p_ell = predict->add_subcommand("ell", "sparse-regime chromatic window");
    double pe_pmax = 0;
    std::uint64_t pe_n = 0;
    double pe_eps = 1e-6;
    p_ell->add_option("--pmax", pe_pmax, "peak connection probability")->required();
    p_ell->add_option("--n", pe_n, "vertex count")->required();
    p_ell->add_option("--refine-epsilon", pe_eps, "epsilon for the narrowing condition");
    auto* p_d = predict->add_subcommand("d", "lambda_n = n chromatic window");
    double pd_kmm = 0;
    p_d->add_option("--kmm", pd_kmm, "kernel peak k(m,m)")->required();
    auto* p_q = predict->add_subcommand("quasi", "quasi-clique windows");
    std::uint64_t pq_n = 0;
    double pq_gamma = 0, pq_pmax = 0, pq_eps = 0.35;
    p_q->add_option("--n", pq_n, "vertex count")->required();
    p_q->add_option("--gamma", pq_gamma, "density threshold")->required();
    p_q->add_option("--pmax", pq_pmax, "peak connection probability")->required();
    p_q->add_option("--epsilon", pq_eps, "window tolerance");

    // ---- experiment ----
    auto* experiment = app.add_subcommand("experiment", "run or verify experiment configs");
    experiment->require_subcommand(1);
    auto* exp_run = experiment->add_subcommand("run", "run an experiment config");
    std::string er_config;
    std::optional<std::uint64_t> er_seed;
    std::optional<std::uint32_t> er_trials, er_threads;
    std::optional<double> er_cov, er_gamma, er_epsilon;
    std::optional<std::string> er_output, er_model;
    std::vector<std::string> er_sets;
    exp_run->add_option("config", er_config, "config JSON path")->required();
    exp_run->add_option("--seed", er_seed, "override config seed");
    exp_run->add_option("--trials", er_trials, "override trials per n");
    exp_run->add_option("--threads", er_threads, "override worker count");
    exp_run->add_option("--coverage-threshold", er_cov, "override coverage threshold");
    exp_run->add_option("--gamma", er_gamma, "override gamma");
    exp_run->add_option("--epsilon", er_epsilon, "override epsilon");
    exp_run->add_option("--output", er_output, "override output base path");
    exp_run->add_option("--model", er_model, "override sampling model (irg|er)");
    exp_run->add_option("--set", er_sets,
                        "override any config field as key=JSON, e.g. --set 'n=[100,200]'");
    auto* exp_verify = experiment->add_subcommand("verify", "verify an emitted report");
    std::string ev_report;
    exp_verify->add_option("report", ev_report, "report JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) {
            const irg::UniformStream stream(s_seed);
            if (s_er) {
                if (!s_kernel.constant_p) {
                    std::cerr << "error: --er requires --p\n";
                    return 2;
                }
                write_graph_output(irg::sample_er(s_n, *s_kernel.constant_p, stream), s_out);
                return 0;
            }
            const auto [graph, weights] =
                irg::sample_irg(s_n, s_kernel.build(), s_scaling.build(), stream);
            write_graph_output(graph, s_out);
            if (!s_weights_out.empty()) {
                std::ofstream wout(s_weights_out, std::ios::binary);
                for (double w : weights) {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%.17g\n", w);
                    wout << buf;
                }
            }
            return 0;
        }
        if (couple->parsed()) {
            const irg::Kernel kernel = c_kernel.build();
            const irg::CoupledTriple t = irg::sample_coupled_triple(
                c_n, kernel, c_scaling.build(), c_rate.build(), irg::UniformStream(c_seed));
            irg::save_coupled_triple(t, c_out, kernel.describe());
            std::cout << "triple written to " << c_out << " (|V'| = " << t.heavy_set.size()
                      << ", p_inf = " << t.p_inf << ", p_max = " << t.p_max << ")\n";
            return 0;
        }
        if (chrom->parsed()) {
            const irg::Graph g = irg::load_edge_list(ch_file);
            const irg::ChromaticResult r = irg::chromatic_number_exact(g, ch_budget);
            std::cout << irg::dump_json_stable(irg::chromatic_record(r));
            return 0;
        }
        if (quasi->parsed()) {
            const irg::Graph g = irg::load_edge_list(q_file);
            const irg::QuasiCliqueResult r = irg::quasi_clique_number_exact(g, q_gamma, q_budget);
            std::cout << irg::dump_json_stable(irg::quasi_clique_record(r, q_gamma));
            return 0;
        }
        if (predict->parsed()) {
            irg::PredictionWindow w;
            if (p_ell->parsed()) w = irg::predict_chromatic_sparse_ell(pe_pmax, pe_n, pe_eps);
            else if (p_d->parsed()) w = irg::predict_chromatic_dense_d(pd_kmm);
            else w = irg::predict_quasi_clique(pq_n, pq_gamma, pq_pmax, pq_eps);
            std::cout << irg::dump_json_stable(w.to_json());
            return 0;
        }
        if (exp_run->parsed()) {
            nlohmann::json overrides = nlohmann::json::object();
            for (const auto& kv : er_sets) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "config error: --set expects key=value, got \"" << kv << "\"\n";
                    return 2;
                }
                const std::string key = kv.substr(0, eq);
                const std::string raw = kv.substr(eq + 1);
                overrides[key] = nlohmann::json::accept(raw) ? nlohmann::json::parse(raw)
                                                             : nlohmann::json(raw);
            }
            if (er_seed) overrides["seed"] = *er_seed;
            if (er_trials) overrides["trials"] = *er_trials;
            if (er_threads) overrides["threads"] = *er_threads;
            if (er_cov) overrides["coverage_threshold"] = *er_cov;
            if (er_gamma) overrides["gamma"] = *er_gamma;
            if (er_epsilon) overrides["epsilon"] = *er_epsilon;
            if (er_output) overrides["output"] = *er_output;
            if (er_model) overrides["model"] = *er_model;
            return run_experiment_command(er_config, overrides);
        }
        if (exp_verify->parsed()) {
            const irg::VerifyResult r = irg::verify_report(ev_report);
            for (const auto& note : r.notes) std::cout << note << "\n";
            return r.exit_code;
        }
    } catch (const irg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const irg::HypothesisViolation& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const irg::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const irg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
