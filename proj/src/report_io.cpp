#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "irg/experiment.hpp"
#include "irg/json_util.hpp"
#include "irg/predictors.hpp"
#include "irg/stats.hpp"

namespace irg {

namespace {

std::string real17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_cell(const nlohmann::json& rec, const std::string& dotted) {
    const nlohmann::json* cur = &rec;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot - start);
        if (!cur->is_object() || !cur->contains(key)) return "";
        cur = &cur->at(key);
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    const nlohmann::json& v = *cur;
    switch (v.type()) {
    case nlohmann::json::value_t::null: return "";
    case nlohmann::json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case nlohmann::json::value_t::number_integer: return std::to_string(v.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned: return std::to_string(v.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float: return real17(v.get<double>());
    case nlohmann::json::value_t::string: return v.get<std::string>();
    default: return "";
    }
}

struct CsvColumn {
    const char* name;
    const char* path;
    const char* doc;
};

std::vector<CsvColumn> csv_columns(ExperimentKind kind) {
    std::vector<CsvColumn> cols = {
        {"trial", "trial", "global trial index"},
        {"n", "n", "vertex count"},
        {"seed", "seed", "per-trial stream seed"},
    };
    switch (kind) {
    case ExperimentKind::coupling_validation:
        cols.insert(cols.end(), {{"lower_edges", "lower_edges", "edge count of G'_n"},
                                 {"middle_edges", "middle_edges", "edge count of G_n"},
                                 {"upper_edges", "upper_edges", "edge count of G''_n"},
                                 {"heavy_count", "heavy_count", "|V'|"},
                                 {"p_inf", "p_inf", "floor probability"},
                                 {"p_max", "p_max", "peak probability"},
                                 {"sandwich_ok", "sandwich_ok", "lower<=middle<=upper held"}});
        break;
    case ExperimentKind::chromatic_window:
        cols.insert(cols.end(),
                    {{"heavy_count", "heavy_count", "|V'| (empty for er model)"},
                     {"outcome", "middle.outcome", "solver outcome for the sampled graph"},
                     {"lower", "middle.lower", "certified lower bound"},
                     {"upper", "middle.upper", "certified upper bound"},
                     {"value", "middle.value", "chi when exact"},
                     {"nodes", "middle.nodes", "search nodes"},
                     {"lower_graph_value", "lower.value", "chi of the coupled lower graph"},
                     {"upper_graph_value", "upper.value", "chi of the coupled upper graph"},
                     {"in_window", "in_window", "window membership (yes/no/indeterminate)"},
                     {"in_window_narrowed", "in_window_narrowed", "narrowed-window membership"},
                     {"sandwich_ok", "sandwich_ok", "value ordering across the triple"}});
        break;
    case ExperimentKind::quasi_clique_window:
        cols.insert(cols.end(),
                    {{"heavy_count", "heavy_count", "|V'| (empty for er model)"},
                     {"outcome", "middle.outcome", "solver outcome for the sampled graph"},
                     {"lower", "middle.lower", "certified lower bound"},
                     {"upper", "middle.upper", "certified upper bound"},
                     {"value", "middle.value", "omega^gamma when exact"},
                     {"nodes", "middle.nodes", "search nodes"},
                     {"lower_graph_value", "lower.value", "omega^gamma of the lower graph"},
                     {"upper_graph_value", "upper.value", "omega^gamma of the upper graph"},
                     {"in_coarse", "in_coarse", "coarse-window membership"},
                     {"in_refined", "in_refined", "refined-window membership"},
                     {"sandwich_ok", "sandwich_ok", "value ordering across the triple"}});
        break;
    case ExperimentKind::concentration:
        cols.push_back({"heavy_count", "heavy_count", "|V'| from the weight draw"});
        break;
    case ExperimentKind::assumption_suite:
        cols.insert(cols.end(),
                    {{"chi", "chi", "chromatic number of the fixture"},
                     {"chi_edge_added", "chi_edge_added", "chi after one edge addition"},
                     {"chi_isolated_added", "chi_isolated_added", "chi after adding 2 isolated"},
                     {"h1_ok", "h1_ok", "monotone under edge addition"},
                     {"h2_chi_ok", "h2_chi_ok", "chi unchanged by isolated vertices"},
                     {"h2_quasi_changed", "h2_quasi_changed",
                      "quasi-clique number moved under isolated vertices"}});
        break;
    case ExperimentKind::counterexample:
        cols.push_back({"witness_found", "witness_found",
                        "an inter-component edge raised the average distance"});
        break;
    }
    return cols;
}

} // namespace

std::string report_csv(const ExperimentReport& report) {
    const auto cols = csv_columns(report.config.kind);
    std::string out;
    out += "# irgsim experiment CSV (";
    out += to_string(report.config.kind);
    out += ")\n";
    out += "# config_hash: " + report.config_hash + "\n";
    for (const auto& c : cols) {
        out += "# column ";
        out += c.name;
        out += ": ";
        out += c.doc;
        out += "\n";
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += cols[i].name;
        out += i + 1 < cols.size() ? "," : "\n";
    }
    for (const auto& rec : report.records) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            out += csv_cell(rec, cols[i].path);
            out += i + 1 < cols.size() ? "," : "\n";
        }
    }
    return out;
}

namespace {

// Per-n plot tuple: coverage plus window bounds plus an empirical mean,
// derived from aggregates (or records for the flat-aggregate kinds).
struct PlotRow {
    std::uint32_t n;
    double coverage, wilson_lo, wilson_hi, window_lo, window_hi, mean;
};

std::vector<PlotRow> plot_rows(const ExperimentReport& rep) {
    std::vector<PlotRow> rows;
    const ExperimentConfig& cfg = rep.config;
    const auto num_or = [](const nlohmann::json& j, double fallback) {
        return j.is_number() ? j.get<double>() : fallback;
    };
    switch (cfg.kind) {
    case ExperimentKind::coupling_validation:
        for (std::uint32_t n : cfg.n_values) {
            const auto& a = rep.aggregates.at(std::to_string(n));
            const std::uint64_t trials = a.at("trials").get<std::uint64_t>();
            const std::uint64_t ok = trials - a.at("violations").get<std::uint64_t>();
            const auto w = wilson_score_interval(ok, trials);
            rows.push_back({n, static_cast<double>(ok) / trials, w.lo, w.hi, 1.0, 1.0,
                            num_or(a.at("mean_middle_edges"), 0.0)});
        }
        break;
    case ExperimentKind::chromatic_window:
    case ExperimentKind::quasi_clique_window:
        for (std::uint32_t n : cfg.n_values) {
            const auto& a = rep.aggregates.at(std::to_string(n));
            double wlo = 0, whi = 0;
            const auto& w = a.at("window");
            if (cfg.kind == ExperimentKind::chromatic_window) {
                wlo = w.at("members").front().get<double>();
                whi = w.at("members").back().get<double>();
            } else {
                const auto& gate = cfg.window_gate == "coarse" ? w.at("coarse") : w.at("refined");
                wlo = gate[0].get<double>();
                whi = gate[1].get<double>();
            }
            rows.push_back({n, a.at("coverage").get<double>(), a.at("wilson_lo").get<double>(),
                            a.at("wilson_hi").get<double>(), wlo, whi,
                            num_or(a.at("mean_value"), 0.0)});
        }
        break;
    case ExperimentKind::concentration:
        for (std::uint32_t n : cfg.n_values) {
            const auto& a = rep.aggregates.at(std::to_string(n));
            const auto& checks = a.at("t_checks");
            std::uint64_t ok = 0;
            double tmax = 0;
            for (const auto& c : checks) {
                if (c.at("ok").get<bool>()) ++ok;
                tmax = std::max(tmax, c.at("t").get<double>());
            }
            const double expected = a.at("expected_heavy_count").get<double>();
            rows.push_back({n,
                            checks.empty() ? 1.0
                                           : static_cast<double>(ok) / checks.size(),
                            0.0, 1.0, expected - tmax, expected,
                            num_or(a.at("mean_heavy_count"), 0.0)});
        }
        break;
    case ExperimentKind::assumption_suite:
    case ExperimentKind::counterexample:
        for (std::uint32_t n : cfg.n_values) {
            std::uint64_t trials = 0, good = 0;
            double mean_acc = 0;
            for (const auto& r : rep.records) {
                if (r.at("n").get<std::uint32_t>() != n) continue;
                ++trials;
                if (cfg.kind == ExperimentKind::assumption_suite) {
                    if (r.at("h1_ok").get<bool>() && r.at("h2_chi_ok").get<bool>()) ++good;
                    mean_acc += r.at("chi").get<double>();
                } else {
                    if (r.at("witness_found").get<bool>()) ++good;
                }
            }
            const auto w = wilson_score_interval(good, trials);
            rows.push_back({n, trials ? static_cast<double>(good) / trials : 0.0, w.lo, w.hi,
                            0.0, 1.0, trials ? mean_acc / trials : 0.0});
        }
        break;
    }
    return rows;
}

} // namespace

std::string report_plotdata(const ExperimentReport& report) {
    std::string out;
    out += "# irgsim plot data (";
    out += to_string(report.config.kind);
    out += ")\n";
    out += "# n coverage wilson_lo wilson_hi window_lo window_hi empirical_mean\n";
    for (const auto& row : plot_rows(report)) {
        out += std::to_string(row.n);
        out += ' ';
        out += real17(row.coverage);
        out += ' ';
        out += real17(row.wilson_lo);
        out += ' ';
        out += real17(row.wilson_hi);
        out += ' ';
        out += real17(row.window_lo);
        out += ' ';
        out += real17(row.window_hi);
        out += ' ';
        out += real17(row.mean);
        out += '\n';
    }
    return out;
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& base) {
    if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
    const auto write = [](const std::filesystem::path& p, const std::string& bytes) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw IoError("cannot open " + p.string());
        out << bytes;
        if (!out) throw IoError("write failed: " + p.string());
    };
    write(base.string() + ".json", dump_json_stable(report.to_json()));
    write(base.string() + ".csv", report_csv(report));
    write(base.string() + ".plot", report_plotdata(report));
}

namespace {

struct Verifier {
    VerifyResult result;

    void fail(const std::string& note) {
        result.exit_code = std::max(result.exit_code, 1);
        result.notes.push_back("FAIL: " + note);
    }
    void note(const std::string& s) { result.notes.push_back(s); }

    bool close(double a, double b) const { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }
};

// Checks a coloring certificate: proper on g, color count equals `colors`.
bool coloring_certificate_ok(const Graph& g, const nlohmann::json& cert, std::uint32_t colors) {
    if (!cert.is_array() || cert.size() != g.vertex_count()) return false;
    std::uint32_t maxc = 0;
    for (const auto& c : cert) {
        const auto v = c.get<std::uint32_t>();
        if (v == 0) return false;
        maxc = std::max(maxc, v);
    }
    if (g.vertex_count() > 0 && maxc != colors) return false;
    for (const auto& [a, b] : g.edges()) {
        if (cert[a - 1] == cert[b - 1]) return false;
    }
    return true;
}

// Checks a quasi-clique witness: distinct in-range vertices of size `size`
// whose induced edge count meets the threshold.
bool witness_certificate_ok(const Graph& g, const nlohmann::json& cert, std::uint32_t size,
                            double gamma) {
    if (!cert.is_array() || cert.size() != size) return false;
    std::vector<Vertex> vs;
    for (const auto& c : cert) vs.push_back(c.get<Vertex>());
    const VertexSubset s = VertexSubset::of(vs);
    if (s.size() != size) return false;
    if (!s.members.empty() && (s.members.front() < 1 || s.members.back() > g.vertex_count())) {
        return false;
    }
    const Graph sub = induced_subgraph(g, s);
    const double need = gamma * (static_cast<double>(size) * (size - 1) / 2.0);
    return static_cast<double>(sub.edge_count()) >= need;
}

} // namespace

VerifyResult verify_report(const std::filesystem::path& report_json) {
    Verifier v;

    nlohmann::json doc;
    ExperimentConfig cfg;
    try {
        std::ifstream in(report_json);
        if (!in) throw IoError("cannot open " + report_json.string());
        doc = nlohmann::json::parse(in);
        cfg = ExperimentConfig::from_json(doc.at("config"));
    } catch (const std::exception& e) {
        v.result.exit_code = 2;
        v.result.notes.push_back(std::string("malformed report: ") + e.what());
        return v.result;
    }

    try {
        if (doc.at("config_hash").get<std::string>() != cfg.hash()) {
            v.fail("config hash mismatch (report does not reproduce its inputs)");
        }
        if (doc.at("kind").get<std::string>() != to_string(cfg.kind)) {
            v.fail("kind field disagrees with config");
        }

        const auto& records = doc.at("records");
        const std::size_t expected =
            static_cast<std::size_t>(cfg.n_values.size()) * cfg.trials;
        if (records.size() != expected) {
            v.fail("record count " + std::to_string(records.size()) + " != trials*|n| = " +
                   std::to_string(expected));
        }

        const UniformStream root(cfg.seed);
        const Kernel kernel = cfg.make_kernel();
        const ScalingSequence lam = cfg.make_scaling();
        const RateFunction rate = cfg.make_rate();

        // Common per-record fields are re-derivable from the config.
        for (std::size_t g = 0; g < records.size(); ++g) {
            const auto& r = records[g];
            if (r.at("trial").get<std::size_t>() != g) {
                v.fail("record " + std::to_string(g) + " out of order");
                break;
            }
            const std::uint32_t n_expected = cfg.n_values[g / cfg.trials];
            if (r.at("n").get<std::uint32_t>() != n_expected) {
                v.fail("record " + std::to_string(g) + " has wrong n");
                break;
            }
            if (r.at("seed").get<std::uint64_t>() != root.split(g).seed()) {
                v.fail("record " + std::to_string(g) + " seed does not derive from config seed");
                break;
            }
        }

        const auto resample_graph = [&](std::size_t g, std::uint32_t n) {
            const UniformStream child = root.split(g);
            if (cfg.model == "er") return sample_er(n, p_max(kernel, lam, n), child);
            return sample_irg(n, kernel, lam, child).first;
        };

        switch (cfg.kind) {
        case ExperimentKind::coupling_validation: {
            std::map<std::uint32_t, std::uint64_t> violations;
            std::map<std::uint32_t, std::uint32_t> resampled;
            for (std::size_t g = 0; g < records.size(); ++g) {
                const auto& r = records[g];
                const auto n = r.at("n").get<std::uint32_t>();
                if (!r.at("sandwich_ok").get<bool>()) ++violations[n];
                // Re-sample a deterministic prefix per n (and every claimed
                // violation) and recheck the construction.
                const bool claimed_bad = !r.at("sandwich_ok").get<bool>();
                if (resampled[n] < 20 || claimed_bad) {
                    ++resampled[n];
                    const CoupledTriple t =
                        sample_coupled_triple(n, kernel, lam, rate, root.split(g));
                    const bool ok = is_edge_subgraph(t.lower, t.middle) &&
                                    is_edge_subgraph(t.middle, t.upper);
                    if (ok != r.at("sandwich_ok").get<bool>()) {
                        v.fail("record " + std::to_string(g) + " sandwich flag not reproducible");
                    }
                    if (t.middle.edge_count() != r.at("middle_edges").get<std::size_t>() ||
                        t.lower.edge_count() != r.at("lower_edges").get<std::size_t>() ||
                        t.upper.edge_count() != r.at("upper_edges").get<std::size_t>() ||
                        t.heavy_set.size() != r.at("heavy_count").get<std::size_t>()) {
                        v.fail("record " + std::to_string(g) + " counts not reproducible");
                    }
                }
            }
            for (std::uint32_t n : cfg.n_values) {
                const auto& a = doc.at("aggregates").at(std::to_string(n));
                if (a.at("violations").get<std::uint64_t>() != violations[n]) {
                    v.fail("aggregate violations mismatch at n=" + std::to_string(n));
                }
            }
            break;
        }
        case ExperimentKind::chromatic_window:
        case ExperimentKind::quasi_clique_window: {
            const bool chrom = cfg.kind == ExperimentKind::chromatic_window;
            for (std::size_t g = 0; g < records.size(); ++g) {
                const auto& r = records[g];
                const auto n = r.at("n").get<std::uint32_t>();
                const Graph graph = resample_graph(g, n);
                const auto& mid = r.at("middle");
                const auto upper = mid.at("upper").get<std::uint32_t>();
                const auto lower = mid.at("lower").get<std::uint32_t>();
                if (lower > upper) v.fail("record " + std::to_string(g) + " inverted bracket");
                if (chrom) {
                    if (!coloring_certificate_ok(graph, mid.at("certificate"), upper)) {
                        v.fail("record " + std::to_string(g) + " coloring certificate invalid");
                    }
                } else {
                    if (!witness_certificate_ok(graph, mid.at("certificate"), lower, cfg.gamma)) {
                        v.fail("record " + std::to_string(g) + " witness certificate invalid");
                    }
                }
                // Sandwich flags only claim an ordering of recorded values.
                if (r.contains("sandwich_ok") && r.at("sandwich_ok").is_boolean() &&
                    r.contains("lower") && r.contains("upper")) {
                    const auto lo = r.at("lower");
                    const auto hi = r.at("upper");
                    if (lo.contains("value") && hi.contains("value") && mid.contains("value")) {
                        const bool ok = lo.at("value").get<std::uint32_t>() <=
                                            mid.at("value").get<std::uint32_t>() &&
                                        mid.at("value").get<std::uint32_t>() <=
                                            hi.at("value").get<std::uint32_t>();
                        if (ok != r.at("sandwich_ok").get<bool>()) {
                            v.fail("record " + std::to_string(g) + " sandwich flag wrong");
                        }
                    }
                }
            }
            // Re-classify each record against the stored window and recount
            // the per-n coverage.
            for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
                const std::uint32_t n = cfg.n_values[ni];
                const std::string gate_key =
                    chrom ? "in_window" : (cfg.window_gate == "coarse" ? "in_coarse" : "in_refined");
                const auto& win = doc.at("aggregates").at(std::to_string(n)).at("window");
                double wlo = 0, whi = 0;
                if (chrom) {
                    wlo = win.at("members").front().get<double>();
                    whi = win.at("members").back().get<double>();
                } else {
                    const auto& gate =
                        cfg.window_gate == "coarse" ? win.at("coarse") : win.at("refined");
                    wlo = gate[0].get<double>();
                    whi = gate[1].get<double>();
                }
                std::uint64_t yes = 0, no = 0;
                for (std::uint32_t t = 0; t < cfg.trials; ++t) {
                    const auto& r = records[ni * cfg.trials + t];
                    const auto cls = r.at(gate_key).get<std::string>();
                    const auto& mid = r.at("middle");
                    std::string expect;
                    if (mid.at("outcome") == "exact") {
                        const double val = mid.at("value").get<double>();
                        expect = (wlo <= val && val <= whi) ? "yes" : "no";
                    } else {
                        const double lo = mid.at("lower").get<double>();
                        const double hi = mid.at("upper").get<double>();
                        if (wlo <= lo && hi <= whi) expect = "yes";
                        else if (hi < wlo || lo > whi) expect = "no";
                        else expect = "indeterminate";
                    }
                    if (cls != expect) {
                        v.fail("record " + std::to_string(ni * cfg.trials + t) +
                               " window flag disagrees with the stored window");
                    }
                    if (cls == "yes") ++yes;
                    else if (cls == "no") ++no;
                }
                const auto& a = doc.at("aggregates").at(std::to_string(n));
                if (a.at("in_window").get<std::uint64_t>() != yes ||
                    a.at("out_of_window").get<std::uint64_t>() != no) {
                    v.fail("aggregate window counts mismatch at n=" + std::to_string(n));
                }
                const std::uint64_t determined = yes + no;
                const double coverage =
                    determined == 0 ? 0.0 : static_cast<double>(yes) / determined;
                if (!v.close(coverage, a.at("coverage").get<double>())) {
                    v.fail("aggregate coverage mismatch at n=" + std::to_string(n));
                }
                const auto w = wilson_score_interval(yes, determined);
                if (!v.close(w.lo, a.at("wilson_lo").get<double>()) ||
                    !v.close(w.hi, a.at("wilson_hi").get<double>())) {
                    v.fail("Wilson interval mismatch at n=" + std::to_string(n));
                }
            }
            break;
        }
        case ExperimentKind::concentration: {
            const double m = kernel.declared_max().location;
            for (std::size_t g = 0; g < records.size(); ++g) {
                const auto& r = records[g];
                const auto n = r.at("n").get<std::uint32_t>();
                const UniformStream child = root.split(g);
                const Region region = Region::around(m, rate(n));
                std::uint32_t count = 0;
                for (Vertex i = 1; i <= n; ++i) {
                    if (region.contains(child.weight(i))) ++count;
                }
                if (count != r.at("heavy_count").get<std::uint32_t>()) {
                    v.fail("record " + std::to_string(g) + " heavy count not reproducible");
                }
            }
            break;
        }
        case ExperimentKind::assumption_suite: {
            std::uint64_t h1 = 0, h2 = 0;
            for (const auto& r : records) {
                if (!r.at("h1_ok").get<bool>()) ++h1;
                if (!r.at("h2_chi_ok").get<bool>()) ++h2;
            }
            const auto& a = doc.at("aggregates");
            if (a.at("h1_violations").get<std::uint64_t>() != h1 ||
                a.at("h2_chi_violations").get<std::uint64_t>() != h2) {
                v.fail("assumption-suite aggregate counts mismatch");
            }
            const auto& w = a.at("fixed_h2_witness");
            if (w.at("before").get<std::uint32_t>() != 3 ||
                w.at("after").get<std::uint32_t>() != 4) {
                v.fail("fixed quasi-clique H2 witness values are not 3 -> 4");
            }
            break;
        }
        case ExperimentKind::counterexample: {
            std::uint64_t found = 0;
            for (const auto& r : records) {
                if (r.at("witness_found").get<bool>()) ++found;
            }
            const auto& a = doc.at("aggregates");
            if (a.at("random_witnesses_found").get<std::uint64_t>() != found) {
                v.fail("counterexample aggregate count mismatch");
            }
            const auto& w = a.at("fixed_witness");
            if (w.at("before").get<double>() != 1.0 ||
                !v.close(w.at("after").get<double>(), 4.0 / 3.0)) {
                v.fail("fixed average-distance witness values are not 1 -> 4/3");
            }
            break;
        }
        }

        const bool passed = doc.at("assertions").at("passed").get<bool>();
        const bool no_failures = doc.at("assertions").at("failures").empty();
        if (passed != no_failures) {
            v.fail("assertions.passed inconsistent with the failure list");
        }
        if (!passed) {
            v.fail("report itself records assertion failures");
        }
    } catch (const std::exception& e) {
        v.result.exit_code = 2;
        v.result.notes.push_back(std::string("malformed report: ") + e.what());
        return v.result;
    }

    if (v.result.exit_code == 0) v.note("report verified");
    return v.result;
}

} // namespace irg
