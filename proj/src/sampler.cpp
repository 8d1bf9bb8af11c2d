#include "irg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "irg/json_util.hpp"

namespace irg {

RateFunction RateFunction::inverse_log() {
    RateFunction r;
    r.form_ = Form::inverse_log;
    return r;
}

RateFunction RateFunction::inverse_log_power(double alpha) {
    if (!(alpha > 0.0)) throw ValueOutOfRange("rate exponent must be positive");
    RateFunction r;
    r.form_ = Form::inverse_log_power;
    r.alpha_ = alpha;
    return r;
}

RateFunction RateFunction::table(std::map<std::uint64_t, double> entries) {
    if (entries.empty()) throw ValueOutOfRange("rate table must not be empty");
    for (const auto& [n, v] : entries) {
        if (!(v > 0.0)) throw ValueOutOfRange("rate values must be positive");
    }
    RateFunction r;
    r.form_ = Form::table;
    r.table_ = std::move(entries);
    return r;
}

double RateFunction::operator()(std::uint64_t n) const {
    switch (form_) {
    case Form::inverse_log:
        if (n < 2) throw ValueOutOfRange("r(n) = 1/log(n) needs n >= 2");
        return 1.0 / std::log(static_cast<double>(n));
    case Form::inverse_log_power:
        if (n < 2) throw ValueOutOfRange("r(n) = 1/log(n)^a needs n >= 2");
        return 1.0 / std::pow(std::log(static_cast<double>(n)), alpha_);
    case Form::table: {
        const auto it = table_.find(n);
        if (it == table_.end()) {
            throw ValueOutOfRange("rate table has no entry for n = " + std::to_string(n));
        }
        return it->second;
    }
    }
    return 0.0;
}

nlohmann::json RateFunction::describe() const {
    switch (form_) {
    case Form::inverse_log:
        return {{"form", "inverse_log"}};
    case Form::inverse_log_power:
        return {{"form", "inverse_log_power"}, {"alpha", alpha_}};
    case Form::table: {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& [n, v] : table_) rows.push_back({n, v});
        return {{"form", "table"}, {"entries", rows}};
    }
    }
    return {};
}

RateFunction RateFunction::from_json(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("form")) {
        throw ConfigError("rate spec needs a \"form\" field");
    }
    const std::string form = spec.at("form").get<std::string>();
    try {
        if (form == "inverse_log") return inverse_log();
        if (form == "inverse_log_power") return inverse_log_power(spec.at("alpha").get<double>());
        if (form == "table") {
            std::map<std::uint64_t, double> entries;
            for (const auto& row : spec.at("entries")) {
                entries[row.at(0).get<std::uint64_t>()] = row.at(1).get<double>();
            }
            return table(std::move(entries));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("rate spec: ") + e.what());
    } catch (const ValueOutOfRange& e) {
        throw ConfigError(std::string("rate spec: ") + e.what());
    }
    throw ConfigError("unknown rate form \"" + form + "\"");
}

RateFunction::Diagnostics RateFunction::diagnostics(std::span<const std::uint32_t> ns) const {
    Diagnostics d;
    double prev_r = std::numeric_limits<double>::infinity();
    double prev_nr = 0.0;
    for (std::uint32_t n : ns) {
        const double r = (*this)(n);
        d.values.emplace_back(n, r);
        if (r > prev_r) d.r_nonincreasing = false;
        if (static_cast<double>(n) * r < prev_nr) d.nr_nondecreasing = false;
        prev_r = r;
        prev_nr = static_cast<double>(n) * r;
    }
    return d;
}

Graph sample_er(Vertex n, double p, const UniformStream& stream) {
    if (p < 0.0 || p > 1.0) throw ProbabilityExceedsOne("ER probability outside [0,1]");
    std::vector<Edge> edges;
    for (Vertex i = 1; i <= n; ++i) {
        for (Vertex j = i + 1; j <= n; ++j) {
            if (stream.pair_uniform(n, i, j) <= p) edges.emplace_back(i, j);
        }
    }
    return Graph::from_sorted_edges(n, std::move(edges));
}

std::pair<Graph, std::vector<double>> sample_irg(Vertex n, const Kernel& k,
                                                 const ScalingSequence& lambda,
                                                 const UniformStream& stream) {
    const double lam = lambda(n);
    p_max(k, lambda, n); // range check via the declared max

    std::vector<double> weights(n);
    for (Vertex i = 1; i <= n; ++i) weights[i - 1] = stream.weight(i);

    std::vector<Edge> edges;
    for (Vertex i = 1; i <= n; ++i) {
        for (Vertex j = i + 1; j <= n; ++j) {
            const double pij = k(weights[i - 1], weights[j - 1]) / lam;
            if (stream.pair_uniform(n, i, j) <= pij) edges.emplace_back(i, j);
        }
    }
    return {Graph::from_sorted_edges(n, std::move(edges)), std::move(weights)};
}

CoupledTriple sample_coupled_triple(Vertex n, const Kernel& k, const ScalingSequence& lambda,
                                    const RateFunction& r, const UniformStream& stream) {
    const double lam = lambda(n);
    CoupledTriple t;
    t.seed = stream.seed();
    t.p_max = p_max(k, lambda, n);
    t.rate_value = r(n);
    t.region = Region::around(k.declared_max().location, t.rate_value);
    t.p_inf = p_inf_over_region(k, t.region, lambda, n);

    t.weights.resize(n);
    for (Vertex i = 1; i <= n; ++i) t.weights[i - 1] = stream.weight(i);

    std::vector<Vertex> heavy;
    for (Vertex i = 1; i <= n; ++i) {
        if (t.region.contains(t.weights[i - 1])) heavy.push_back(i);
    }
    t.heavy_set = VertexSubset{std::move(heavy)};

    std::vector<Edge> lower_edges, middle_edges, upper_edges;
    for (Vertex i = 1; i <= n; ++i) {
        const bool i_heavy = t.heavy_set.contains(i);
        for (Vertex j = i + 1; j <= n; ++j) {
            const double u = stream.pair_uniform(n, i, j);
            const double pij = k(t.weights[i - 1], t.weights[j - 1]) / lam;
            if (u <= pij) middle_edges.emplace_back(i, j);
            if (u <= t.p_max) upper_edges.emplace_back(i, j);
            if (i_heavy && t.heavy_set.contains(j) && u <= t.p_inf) {
                lower_edges.emplace_back(i, j);
            }
        }
    }
    t.lower = Graph::from_sorted_edges(n, std::move(lower_edges));
    t.middle = Graph::from_sorted_edges(n, std::move(middle_edges));
    t.upper = Graph::from_sorted_edges(n, std::move(upper_edges));
    return t;
}

Graph lower_bound_core(const CoupledTriple& t) {
    return induced_subgraph(t.lower, t.heavy_set);
}

double expected_heavy_count(std::uint64_t n, const RateFunction& r, double m) {
    return static_cast<double>(n) * Region::around(m, r(n)).length();
}

namespace {

std::string format_real17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void save_coupled_triple(const CoupledTriple& t, const std::filesystem::path& dir,
                         const nlohmann::json& kernel_desc) {
    std::filesystem::create_directories(dir);
    save_edge_list(t.lower, dir / "lower.el");
    save_edge_list(t.middle, dir / "middle.el");
    save_edge_list(t.upper, dir / "upper.el");

    std::ofstream wout(dir / "weights.txt", std::ios::binary);
    if (!wout) throw IoError("cannot open " + (dir / "weights.txt").string());
    for (double w : t.weights) wout << format_real17(w) << '\n';

    nlohmann::json meta = {
        {"seed", t.seed},
        {"n", t.middle.vertex_count()},
        {"kernel", kernel_desc},
        {"r_n", t.rate_value},
        {"region", {t.region.lo, t.region.hi}},
        {"p_inf", t.p_inf},
        {"p_max", t.p_max},
        {"heavy_set", t.heavy_set.members},
    };
    std::ofstream mout(dir / "meta.json", std::ios::binary);
    if (!mout) throw IoError("cannot open " + (dir / "meta.json").string());
    mout << dump_json_stable(meta);
}

CoupledTriple load_coupled_triple(const std::filesystem::path& dir) {
    CoupledTriple t;
    t.lower = load_edge_list(dir / "lower.el");
    t.middle = load_edge_list(dir / "middle.el");
    t.upper = load_edge_list(dir / "upper.el");

    std::ifstream win(dir / "weights.txt");
    if (!win) throw IoError("cannot open " + (dir / "weights.txt").string());
    double w;
    while (win >> w) t.weights.push_back(w);

    std::ifstream min(dir / "meta.json");
    if (!min) throw IoError("cannot open " + (dir / "meta.json").string());
    nlohmann::json meta = nlohmann::json::parse(min);
    t.seed = meta.at("seed").get<std::uint64_t>();
    t.rate_value = meta.at("r_n").get<double>();
    t.region = Region(meta.at("region")[0].get<double>(), meta.at("region")[1].get<double>());
    t.p_inf = meta.at("p_inf").get<double>();
    t.p_max = meta.at("p_max").get<double>();
    t.heavy_set = VertexSubset{meta.at("heavy_set").get<std::vector<Vertex>>()};
    return t;
}

} // namespace irg
