#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "irg/sampler.hpp"
#include "irg/solvers.hpp"
#include "oracles.hpp"

using namespace irg;

namespace {

double binom_sigma(double trials, double p) { return std::sqrt(trials * p * (1.0 - p)); }

} // namespace

TEST_CASE("ER sampling endpoints") {
    const UniformStream s(1);
    CHECK(sample_er(5, 0.0, s).edge_count() == 0);
    CHECK(sample_er(5, 1.0, s).edge_count() == 10);
    CHECK_THROWS_AS(sample_er(5, 1.5, s), ProbabilityExceedsOne);
}

TEST_CASE("ER edge count concentrates at the binomial mean") {
    const Graph g = sample_er(2000, 0.3, UniformStream(42));
    const double pairs = 2000.0 * 1999.0 / 2.0;
    const double mean = 0.3 * pairs;
    CHECK(std::abs(static_cast<double>(g.edge_count()) - mean) <= 4.0 * binom_sigma(pairs, 0.3));
}

TEST_CASE("constant-kernel IRG is bit-identical to ER") {
    const UniformStream s(77);
    const auto [irg_graph, weights] =
        sample_irg(300, Kernel::constant(0.25), ScalingSequence::constant(1.0), s);
    CHECK(irg_graph == sample_er(300, 0.25, s));
    CHECK(weights.size() == 300);
}

TEST_CASE("block-kernel IRG matches within-block densities") {
    const Kernel k = Kernel::block({{0.2, 0.1}, {0.1, 0.6}}, {0.5});
    const UniformStream s(4242);
    const auto [g, w] = sample_irg(1000, k, ScalingSequence::constant(1.0), s);

    // Conditional on the weight-block assignment, each pair bucket is an
    // independent binomial with its block's probability.
    std::uint64_t pairs[2][2] = {{0, 0}, {0, 0}};
    std::uint64_t hits[2][2] = {{0, 0}, {0, 0}};
    const auto block_of = [](double x) { return x < 0.5 ? 0 : 1; };
    for (Vertex i = 1; i <= 1000; ++i) {
        for (Vertex j = i + 1; j <= 1000; ++j) {
            const int a = block_of(w[i - 1]);
            const int b = block_of(w[j - 1]);
            ++pairs[std::min(a, b)][std::max(a, b)];
            if (g.has_edge(i, j)) ++hits[std::min(a, b)][std::max(a, b)];
        }
    }
    const double expect[2][2] = {{0.2, 0.1}, {0.1, 0.6}};
    for (int a = 0; a < 2; ++a) {
        for (int b = a; b < 2; ++b) {
            const double np = static_cast<double>(pairs[a][b]);
            CHECK(std::abs(static_cast<double>(hits[a][b]) - expect[a][b] * np) <=
                  4.0 * binom_sigma(np, expect[a][b]));
        }
    }
}

TEST_CASE("sparse IRG total edges match the quadrature oracle") {
    const Kernel k = Kernel::bump(0.5, 3.0, 0.4);
    const Vertex n = 500;
    const auto [g, w] = sample_irg(n, k, ScalingSequence::linear(1.0), UniformStream(9));

    const double mean_k = oracle::mean_kernel_quadrature(k, 1000);
    const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
    const double mean_edges = pairs * mean_k / n;

    // Variance: independent pair indicators given weights, plus the
    // weight-driven covariance between pairs sharing a vertex.
    const double row_sq = oracle::mean_row_square_quadrature(k, 1000);
    const double p_bar = mean_k / n;
    const double cov = row_sq / (static_cast<double>(n) * n) - p_bar * p_bar;
    const double shared_pairs = static_cast<double>(n) * (n - 1) * (n - 2);
    const double var = pairs * p_bar * (1 - p_bar) + shared_pairs * std::max(0.0, cov);
    CHECK(std::abs(static_cast<double>(g.edge_count()) - mean_edges) <= 4.0 * std::sqrt(var));
    CHECK_THROWS_AS(sample_irg(10, Kernel::constant(3.0), ScalingSequence::constant(1.0),
                               UniformStream(1)),
                    ProbabilityExceedsOne);
}

TEST_CASE("coupled triples sandwich exactly, for every sample") {
    const ScalingSequence one = ScalingSequence::constant(1.0);
    const ScalingSequence lin = ScalingSequence::linear(1.0);
    const RateFunction rate = RateFunction::inverse_log();
    const UniformStream root(555);

    const Kernel kernels[] = {Kernel::constant(0.5), Kernel::bump(0.5, 0.9, 0.1),
                              Kernel::block({{0.2, 0.1}, {0.1, 0.6}}, {0.5})};
    std::uint64_t trial = 0;
    for (const Kernel& k : kernels) {
        for (const ScalingSequence* lam : {&one, &lin}) {
            for (std::uint64_t t = 0; t < 60; ++t) {
                const CoupledTriple trip = sample_coupled_triple(60, k, *lam, rate,
                                                                 root.split(trial++));
                CHECK(is_edge_subgraph(trip.lower, trip.middle));
                CHECK(is_edge_subgraph(trip.middle, trip.upper));
                CHECK(trip.p_inf <= trip.p_max);
                for (const auto& [a, b] : trip.lower.edges()) {
                    CHECK(trip.heavy_set.contains(a));
                    CHECK(trip.heavy_set.contains(b));
                }
            }
        }
    }
}

TEST_CASE("coupled triple marginals are bit-identical to the single samplers") {
    const Kernel k = Kernel::bump(0.5, 0.9, 0.1);
    const ScalingSequence one = ScalingSequence::constant(1.0);
    const RateFunction rate = RateFunction::inverse_log();
    const UniformStream s(321);

    const CoupledTriple t = sample_coupled_triple(150, k, one, rate, s);
    CHECK(t.middle == sample_irg(150, k, one, s).first);
    CHECK(t.upper == sample_er(150, t.p_max, s));

    // Constant kernel: all three thresholds coincide; middle == upper and
    // lower is the p-threshold restricted to heavy pairs.
    const CoupledTriple c = sample_coupled_triple(100, Kernel::constant(0.5), one, rate, s);
    CHECK(c.middle == c.upper);
    CHECK(c.p_inf == 0.5);
    CHECK(c.p_max == 0.5);
    for (const auto& e : c.lower.edges()) CHECK(c.middle.has_edge(e.first, e.second));

    // Saturated window: every vertex is heavy and lower is ER(n, p_inf).
    const RateFunction wide = RateFunction::table({{100, 1.5}});
    const CoupledTriple sat = sample_coupled_triple(100, Kernel::constant(0.5), one, wide, s);
    CHECK(sat.heavy_set.size() == 100);
    CHECK(sat.lower == sample_er(100, 0.5, s));
}

TEST_CASE("lower-bound core") {
    const ScalingSequence one = ScalingSequence::constant(1.0);
    const UniformStream s(808);

    // Empty heavy set: table rate with a tiny window away from any weight.
    const Kernel far = Kernel::custom([](double, double) { return 0.1; }, {0.0, 0.1});
    CoupledTriple t = sample_coupled_triple(30, far, one, RateFunction::table({{30, 1e-12}}), s);
    if (t.heavy_set.size() == 0) {
        CHECK(lower_bound_core(t).vertex_count() == 0);
    }

    // Saturated window: the core is the lower graph itself.
    const RateFunction wide = RateFunction::table({{50, 2.0}});
    t = sample_coupled_triple(50, Kernel::constant(0.5), one, wide, s);
    CHECK(lower_bound_core(t) == t.lower);

    // Conditional on |V'|, the core is ER(|V'|, p_inf): 4-sigma check.
    const Kernel b = Kernel::bump(0.5, 0.9, 0.1);
    t = sample_coupled_triple(2000, b, one, RateFunction::inverse_log(), s);
    const Graph core = lower_bound_core(t);
    const double pairs = static_cast<double>(core.vertex_count()) *
                         (core.vertex_count() - 1) / 2.0;
    CHECK(std::abs(static_cast<double>(core.edge_count()) - t.p_inf * pairs) <=
          4.0 * binom_sigma(pairs, t.p_inf));
}

TEST_CASE("expected heavy count") {
    CHECK(expected_heavy_count(1000, RateFunction::table({{1000, 0.05}}), 0.5) ==
          doctest::Approx(100.0).epsilon(1e-12));
    CHECK(expected_heavy_count(1000, RateFunction::table({{1000, 0.05}}), 0.0) ==
          doctest::Approx(50.0).epsilon(1e-12));
    const std::uint64_t n = 22026;
    const RateFunction r = RateFunction::inverse_log();
    CHECK(expected_heavy_count(n, r, 0.5) ==
          doctest::Approx(2.0 * n * (1.0 / std::log(static_cast<double>(n)))).epsilon(1e-12));
    CHECK(expected_heavy_count(n, r, 0.5) == doctest::Approx(4405.2).epsilon(1e-3));
}

TEST_CASE("heavy count obeys the Hoeffding tail") {
    const std::uint32_t n = 1000;
    const std::uint32_t trials = 10000;
    const RateFunction r = RateFunction::table({{n, 0.05}});
    const UniformStream root(616);
    const Region window = Region::around(0.5, 0.05);

    std::vector<std::uint32_t> counts(trials);
    for (std::uint32_t t = 0; t < trials; ++t) {
        const UniformStream child = root.split(t);
        std::uint32_t c = 0;
        for (Vertex i = 1; i <= n; ++i) {
            if (window.contains(child.weight(i))) ++c;
        }
        counts[t] = c;
    }
    const double expected = 2.0 * n * 0.05;
    for (const std::uint32_t tval : {50u, 100u, 150u}) {
        std::uint32_t hits = 0;
        for (auto c : counts) {
            if (static_cast<double>(c) <= expected - tval) ++hits;
        }
        const double bound = std::exp(-2.0 * tval * tval / static_cast<double>(n));
        const double sigma = std::sqrt(bound * (1 - bound) / trials);
        CHECK(static_cast<double>(hits) / trials <= bound + 3.0 * sigma);

        // |V'| is Binomial(n, 0.1); the exact tail must also obey the bound.
        CHECK(oracle::binomial_cdf(n, 0.1, static_cast<std::int64_t>(expected - tval)) <=
              bound + 1e-12);
    }
}

TEST_CASE("triple serialization round trip and determinism") {
    const Kernel k = Kernel::bump(0.5, 0.9, 0.1);
    const ScalingSequence one = ScalingSequence::constant(1.0);
    const RateFunction rate = RateFunction::inverse_log();
    const CoupledTriple t = sample_coupled_triple(40, k, one, rate, UniformStream(12345));

    const auto dir = std::filesystem::temp_directory_path() / "irg_triple_test";
    std::filesystem::remove_all(dir);
    save_coupled_triple(t, dir, k.describe());

    const CoupledTriple back = load_coupled_triple(dir);
    CHECK(back.lower == t.lower);
    CHECK(back.middle == t.middle);
    CHECK(back.upper == t.upper);
    CHECK(back.weights == t.weights); // 17 digits round-trip doubles exactly
    CHECK(back.heavy_set == t.heavy_set);
    CHECK(back.p_inf == t.p_inf);
    CHECK(back.p_max == t.p_max);
    CHECK(back.seed == t.seed);

    // Same seed, fresh sample, byte-identical files.
    const auto dir2 = std::filesystem::temp_directory_path() / "irg_triple_test2";
    std::filesystem::remove_all(dir2);
    const CoupledTriple t2 = sample_coupled_triple(40, k, one, rate, UniformStream(12345));
    save_coupled_triple(t2, dir2, k.describe());
    for (const char* name : {"lower.el", "middle.el", "upper.el", "weights.txt", "meta.json"}) {
        std::ifstream a(dir / name, std::ios::binary);
        std::ifstream b(dir2 / name, std::ios::binary);
        const std::string sa((std::istreambuf_iterator<char>(a)), {});
        const std::string sb((std::istreambuf_iterator<char>(b)), {});
        CHECK(sa == sb);
        CHECK(!sa.empty());
    }
    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("rate functions") {
    const RateFunction r = RateFunction::inverse_log();
    CHECK(r(500) == doctest::Approx(1.0 / std::log(500.0)).epsilon(1e-15));
    CHECK_THROWS_AS(r(1), ValueOutOfRange);

    const RateFunction rp = RateFunction::inverse_log_power(2.0);
    CHECK(rp(100) == doctest::Approx(1.0 / std::pow(std::log(100.0), 2.0)).epsilon(1e-15));

    const std::uint32_t ns[] = {100, 1000, 10000};
    const auto diag = r.diagnostics(ns);
    CHECK(diag.r_nonincreasing);
    CHECK(diag.nr_nondecreasing);

    CHECK_THROWS_AS(RateFunction::table({}), ValueOutOfRange);
    CHECK_THROWS_AS(RateFunction::table({{10, 0.5}})(20), ValueOutOfRange);
}

TEST_CASE("sampled triples satisfy H1/H2 for the implemented properties") {
    const ScalingSequence one = ScalingSequence::constant(1.0);
    const RateFunction rate = RateFunction::inverse_log();
    const UniformStream root(2718);

    for (std::uint64_t t = 0; t < 15; ++t) {
        const CoupledTriple trip =
            sample_coupled_triple(12, Kernel::bump(0.5, 0.9, 0.3), one, rate, root.split(t));
        // (H1) on the partial order, exact solvers at n <= 12.
        const auto chi_l = chromatic_number_exact(trip.lower).value;
        const auto chi_m = chromatic_number_exact(trip.middle).value;
        const auto chi_u = chromatic_number_exact(trip.upper).value;
        CHECK(chi_l <= chi_m);
        CHECK(chi_m <= chi_u);
        const auto q_l = quasi_clique_number_exact(trip.lower, 0.75).value;
        const auto q_m = quasi_clique_number_exact(trip.middle, 0.75).value;
        const auto q_u = quasi_clique_number_exact(trip.upper, 0.75).value;
        CHECK(q_l <= q_m);
        CHECK(q_m <= q_u);

        // (H2) for the chromatic number.
        CHECK(chromatic_number_exact(add_isolated_vertices(trip.middle, 3)).value == chi_m);
    }
}
