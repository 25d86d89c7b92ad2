#include "doctest.h"

#include <cmath>
#include <sstream>

#include "spectral/linalg/kernels.hpp"
#include "spectral/robuststats/mixture.hpp"
#include "spectral/robuststats/separability.hpp"
#include "spectral/robuststats/sweep.hpp"
#include "spectral/rng.hpp"

using namespace spectral;
using namespace spectral::robuststats;

namespace {

MixtureSpec random_spec(Rng& rng, int dim, int n) {
    MixtureSpec s;
    s.dim = dim;
    s.n = n;
    s.eps = rng.uniform(0.05, 0.4);
    s.sigma2 = rng.uniform(0.2, 3.0);
    s.seed = rng.next_u64();
    s.mu_d.resize(dim);
    s.mu_w.resize(dim);
    for (int j = 0; j < dim; ++j) {
        s.mu_d[j] = rng.uniform(-2, 2);
        s.mu_w[j] = rng.uniform(-2, 2);
    }
    return s;
}

// sample with both origins guaranteed (retry over derived seeds)
MixtureSample sample_both_origins(MixtureSpec spec) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto s = sample_mixture(spec);
        const int p = s.poison_count();
        if (p > 0 && p < spec.n) return s;
        spec.seed = derive_seed(spec.seed, 1);
    }
    throw std::runtime_error("could not draw a two-origin sample");
}

}  // namespace

TEST_CASE("sample_mixture is deterministic and honors the mixing coin") {
    auto spec = make_axis_spec(4, 0.2, 500, 9.0, 1.0, 42);
    auto a = sample_mixture(spec);
    auto b = sample_mixture(spec);
    CHECK(a.points.data == b.points.data);
    CHECK(a.origin == b.origin);

    // vanishing mixture weight: expect zero poison rows
    auto tiny = make_axis_spec(4, 1e-9, 1000, 9.0, 1.0, 7);
    CHECK(sample_mixture(tiny).poison_count() == 0);
}

TEST_CASE("sample mean approaches the shared mean when mu_d == mu_w") {
    const int d = 6, n = 4000;
    MixtureSpec spec;
    spec.dim = d;
    spec.eps = 0.3;
    spec.n = n;
    spec.sigma2 = 1.0;
    spec.seed = 11;
    spec.mu_d.assign(d, 1.5);
    spec.mu_w.assign(d, 1.5);
    auto s = sample_mixture(spec);
    std::vector<double> mean(d);
    linalg::column_means(s.points, mean);
    double dist = 0.0;
    for (int j = 0; j < d; ++j) dist += (mean[j] - 1.5) * (mean[j] - 1.5);
    CHECK(std::sqrt(dist) < 3.0 * std::sqrt(static_cast<double>(d) / n));
}

TEST_CASE("sphere population has the stated covariance scale") {
    MixtureSpec spec = make_axis_spec(8, 0.1, 8000, 40.0, 2.0, 5);
    spec.population = PopulationKind::Sphere;
    auto s = sample_mixture(spec);
    // every clean row sits at radius sigma*sqrt(d) from mu_d
    const double want = std::sqrt(2.0) * std::sqrt(8.0);
    for (int i = 0; i < 100; ++i) {
        if (s.origin[i] != Origin::Clean) continue;
        double r2 = 0.0;
        for (int j = 0; j < 8; ++j) r2 += s.points.at(i, j) * s.points.at(i, j);
        CHECK(std::sqrt(r2) == doctest::Approx(want));
    }
}

TEST_CASE("lemma1_condition boundary arithmetic") {
    auto spec = make_axis_spec(4, 0.1, 10, 60.0, 1.0, 0);
    CHECK(lemma1_condition(spec));
    spec = make_axis_spec(4, 0.1, 10, 59.9, 1.0, 0);
    CHECK_FALSE(lemma1_condition(spec));
    spec = make_axis_spec(4, 0.05, 10, 240.0, 2.0, 0);
    CHECK(lemma1_condition(spec));
}

TEST_CASE("lemma2_threshold arithmetic and lower bound") {
    CHECK(lemma2_threshold(0.0, 1.0, 0.25) == doctest::Approx(2.0));
    CHECK(lemma2_threshold(10.0, 1.0, 0.04) == doctest::Approx(5.4));
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const double sigma = rng.uniform(0.1, 4.0);
        const double eps = rng.uniform(0.01, 0.49);
        CHECK(lemma2_threshold(rng.uniform(-20, 20), sigma, eps) >= sigma / std::sqrt(eps));
    }
}

TEST_CASE("check_separability separates point-mass populations") {
    MixtureSpec spec;
    spec.dim = 3;
    spec.eps = 0.05;
    spec.n = 400;
    spec.sigma2 = 1e-6;
    spec.seed = 21;
    spec.mu_d = {0, 0, 0};
    spec.mu_w = {10, 0, 0};
    auto verdict = check_separability(sample_both_origins(spec));
    CHECK(verdict.separable);
    CHECK(verdict.clean_miss_rate == 0.0);
    CHECK(verdict.poison_pass_rate == 0.0);
    CHECK(verdict.threshold_t > 0.0);
}

TEST_CASE("check_separability rejects identical populations") {
    MixtureSpec spec;
    spec.dim = 4;
    spec.eps = 0.1;
    spec.n = 5000;
    spec.sigma2 = 1.0;
    spec.seed = 22;
    spec.mu_d.assign(4, 0.0);
    spec.mu_w.assign(4, 0.0);
    auto verdict = check_separability(sample_both_origins(spec));
    CHECK_FALSE(verdict.separable);
}

TEST_CASE("check_separability flags single-origin samples as degenerate") {
    auto spec = make_axis_spec(3, 1e-9, 100, 25.0, 1.0, 4);
    auto s = sample_mixture(spec);
    REQUIRE(s.poison_count() == 0);
    auto verdict = check_separability(s);
    CHECK(verdict.degenerate);
    CHECK(verdict.poison_pass_rate == 0.0);
}

TEST_CASE("Monte-Carlo: lemma 1 regime separates well inside the condition") {
    // 2x the 6 sigma^2/eps condition, n = 50 d / eps
    const int d = 8;
    const double eps = 0.1, sigma2 = 1.0;
    const int n = static_cast<int>(50 * d / eps);
    int ok = 0;
    const int trials = 20;
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < trials; ++t) {
        auto spec = make_axis_spec(d, eps, n, 2.0 * 6.0 * sigma2 / eps, sigma2,
                                   derive_seed(900, t));
        auto verdict = check_separability(sample_mixture(spec));
#pragma omp critical
        ok += verdict.separable ? 1 : 0;
    }
    CHECK(ok >= 18);
}

TEST_CASE("Monte-Carlo: lemma 3 correlation inequality in the same regime") {
    const int d = 8;
    const double eps = 0.1, sigma2 = 1.0;
    const int n = 50000;
    int ok = 0;
    for (int t = 0; t < 10; ++t) {
        auto spec = make_axis_spec(d, eps, n, 120.0, sigma2, derive_seed(901, t));
        auto r = lemma3_correlation_check(sample_both_origins(spec));
        CHECK(r.rhs == doctest::Approx(20.0));
        ok += r.holds ? 1 : 0;
    }
    CHECK(ok >= 9);
}

TEST_CASE("lemma 3 on near point-mass populations") {
    MixtureSpec spec;
    spec.dim = 5;
    spec.eps = 0.1;
    spec.n = 2000;
    spec.sigma2 = 1e-8;
    spec.seed = 31;
    spec.mu_d.assign(5, 0.0);
    spec.mu_w.assign(5, 0.0);
    spec.mu_w[0] = -10.0;  // Delta = (10, 0, ...)
    auto r = lemma3_correlation_check(sample_both_origins(spec));
    CHECK(r.lhs == doctest::Approx(100.0).epsilon(1e-3));
    CHECK(r.holds);
}

TEST_CASE("lemma 3 typically fails far below the condition") {
    int holds = 0;
    for (int t = 0; t < 10; ++t) {
        // condition violated 100x
        auto spec = make_axis_spec(8, 0.1, 20000, 0.6, 1.0, derive_seed(902, t));
        holds += lemma3_correlation_check(sample_both_origins(spec)).holds ? 1 : 0;
    }
    CHECK(holds <= 2);
}

TEST_CASE("covariance decomposition is an exact empirical identity") {
    Rng rng(41);
    for (int rep = 0; rep < 20; ++rep) {
        auto spec = random_spec(rng, 4, 1000);
        auto r = covariance_decomposition_check(sample_both_origins(spec));
        CHECK(r.relative() <= 1e-10);
    }
    // smallest case: one row per origin
    MixtureSpec spec = make_axis_spec(3, 0.49, 2, 4.0, 1.0, 1);
    auto s = sample_both_origins(spec);
    auto r = covariance_decomposition_check(s);
    CHECK(r.residual_fro <= 1e-8 * std::max(1.0, r.sigma_f_fro));
}

TEST_CASE("Chebyshev sanity on Gaussian populations") {
    const int d = 6, n = 4000;
    auto spec = make_axis_spec(d, 0.2, n, 30.0, 1.0, 51);
    auto s = sample_mixture(spec);
    Rng rng(52);
    const double sigma = 1.0, t = 3.0 * sigma;
    for (int rep = 0; rep < 20; ++rep) {
        auto u = rng.unit_vector(d);
        int exceed = 0, clean = 0;
        for (int i = 0; i < n; ++i) {
            if (s.origin[i] != Origin::Clean) continue;
            ++clean;
            double proj = 0.0;
            for (int j = 0; j < d; ++j) proj += (s.points.at(i, j) - spec.mu_d[j]) * u[j];
            if (std::abs(proj) > t) ++exceed;
        }
        const double rate = static_cast<double>(exceed) / clean;
        CHECK(rate < sigma * sigma / (t * t) + 3.0 / std::sqrt(static_cast<double>(clean)));
    }
}

TEST_CASE("finite_sample_sweep output shape, determinism, csv") {
    SweepConfig cfg;
    cfg.dim = 4;
    cfg.eps = 0.1;
    cfg.sigma2 = 1.0;
    cfg.sep_factor = 1.0;
    cfg.n_grid = {20, 200, 2000};
    cfg.trials = 10;
    cfg.seed = 61;
    auto rows = finite_sample_sweep(cfg);
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].success_rate >= 0.9);  // far above d log n / eps
    auto rows2 = finite_sample_sweep(cfg);
    CHECK(sweep_csv_string(rows) == sweep_csv_string(rows2));
    auto csv = sweep_csv_string(rows);
    CHECK(csv.rfind("n,trials,successes,success_rate\n", 0) == 0);
}

TEST_CASE("sweep success is monotone in the separation factor") {
    SweepConfig lo, hi;
    lo.dim = hi.dim = 6;
    lo.eps = hi.eps = 0.1;
    lo.sigma2 = hi.sigma2 = 1.0;
    lo.n_grid = hi.n_grid = {400};
    lo.trials = hi.trials = 30;
    lo.seed = hi.seed = 62;
    lo.sep_factor = 1.0;
    hi.sep_factor = 4.0;
    auto r_lo = finite_sample_sweep(lo);
    auto r_hi = finite_sample_sweep(hi);
    CHECK(r_hi[0].successes >= r_lo[0].successes);
}

TEST_CASE("sweep config parsing and errors") {
    std::stringstream ok(
        "dim=8\neps=0.1\nsigma2=1.0\nsep_factor=2\nn=100,1000\ntrials=5\nseed=3\n");
    auto cfg = parse_sweep_config(ok);
    CHECK(cfg.dim == 8);
    CHECK(cfg.n_grid == std::vector<int>{100, 1000});
    CHECK(cfg.sep_factor == doctest::Approx(2.0));

    std::stringstream bad("dim=8\nwhat=1\n");
    CHECK_THROWS_WITH_AS(parse_sweep_config(bad),
                         doctest::Contains("line 2"), std::runtime_error);

    std::stringstream bad2("dim=oops\n");
    CHECK_THROWS_AS(parse_sweep_config(bad2), std::runtime_error);
}

TEST_CASE("MixtureSpec validation") {
    auto spec = make_axis_spec(4, 0.1, 10, 1.0, 1.0, 0);
    spec.eps = 0.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.eps = 0.1;
    spec.sigma2 = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
