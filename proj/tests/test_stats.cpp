#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "patnet/dist.hpp"
#include "patnet/frame.hpp"
#include "patnet/glm.hpp"
#include "patnet/hypothesis.hpp"
#include "patnet/rng.hpp"
#include "patnet/summaries.hpp"
#include "patnet/synth.hpp"
#include "patnet/table.hpp"

using namespace patnet;

namespace {

DataTable two_group_logit_table(int n_per_group, double rate_a, double rate_b) {
    std::vector<double> y, x;
    for (int i = 0; i < n_per_group; ++i) {
        y.push_back(i < rate_a * n_per_group ? 1.0 : 0.0);
        x.push_back(0.0);
    }
    for (int i = 0; i < n_per_group; ++i) {
        y.push_back(i < rate_b * n_per_group ? 1.0 : 0.0);
        x.push_back(1.0);
    }
    DataTable t;
    t.add_numeric("y", std::move(y));
    t.add_numeric("x", std::move(x));
    return t;
}

}  // namespace

TEST_CASE("saturated 2x2 logit matches the closed form") {
    auto table = two_group_logit_table(400, 0.25, 0.75);
    GlmSpec spec;
    spec.family = GlmSpec::Family::logistic;
    spec.response = "y";
    spec.terms = {GlmTerm::cont("x")};
    auto fit = fit_glm(spec, table);
    REQUIRE(fit.converged);
    const double logit_q = std::log(0.25 / 0.75);
    CHECK(std::fabs(fit.coefficients[0] - logit_q) < 1e-8);
    CHECK(std::fabs(fit.coefficients[1] - 2.0 * std::log(3.0)) < 1e-8);
    // deviance trace never increases
    for (std::size_t i = 1; i < fit.deviance_trace.size(); ++i)
        CHECK(fit.deviance_trace[i] <= fit.deviance_trace[i - 1] + 1e-9);
}

TEST_CASE("noiseless linear recovery is exact") {
    std::vector<double> x, y;
    for (int i = 0; i < 100; ++i) {
        x.push_back(0.1 * i - 3.0);
        y.push_back(2.0 * x.back() + 1.0);
    }
    DataTable t;
    t.add_numeric("y", std::move(y));
    t.add_numeric("x", std::move(x));
    GlmSpec spec;
    spec.family = GlmSpec::Family::linear;
    spec.response = "y";
    spec.terms = {GlmTerm::cont("x")};
    auto fit = fit_glm(spec, t);
    CHECK(std::fabs(fit.coefficients[0] - 1.0) < 1e-10);
    CHECK(std::fabs(fit.coefficients[1] - 2.0) < 1e-10);
}

TEST_CASE("zero-variance response and empty data are rejected") {
    DataTable t;
    t.add_numeric("y", {1.0, 1.0, 1.0});
    t.add_numeric("x", {0.0, 1.0, 2.0});
    GlmSpec spec;
    spec.family = GlmSpec::Family::logistic;
    spec.response = "y";
    spec.terms = {GlmTerm::cont("x")};
    CHECK_THROWS_AS(fit_glm(spec, t), std::invalid_argument);

    DataTable empty;
    CHECK_THROWS_AS(fit_glm(spec, empty), std::invalid_argument);
}

TEST_CASE("collinear columns are dropped and reported") {
    Rng rng(3);
    std::vector<double> x1, x2, y;
    for (int i = 0; i < 200; ++i) {
        x1.push_back(rng.next_double());
        x2.push_back(2.0 * x1.back());  // exact collinearity
        y.push_back(rng.bernoulli(0.4 + 0.2 * x1.back()) ? 1.0 : 0.0);
    }
    DataTable t;
    t.add_numeric("y", std::move(y));
    t.add_numeric("x1", std::move(x1));
    t.add_numeric("x2", std::move(x2));
    GlmSpec spec;
    spec.family = GlmSpec::Family::logistic;
    spec.response = "y";
    spec.terms = {GlmTerm::cont("x1"), GlmTerm::cont("x2")};
    auto fit = fit_glm(spec, t);
    CHECK(fit.dropped_columns.size() == 1);
    CHECK(fit.term_names.size() == 2);  // intercept + one survivor
}

TEST_CASE("complete separation is flagged") {
    std::vector<double> x, y;
    for (int i = 0; i < 100; ++i) {
        x.push_back(i < 50 ? -1.0 - 0.01 * i : 1.0 + 0.01 * i);
        y.push_back(i < 50 ? 0.0 : 1.0);
    }
    DataTable t;
    t.add_numeric("y", std::move(y));
    t.add_numeric("x", std::move(x));
    GlmSpec spec;
    spec.family = GlmSpec::Family::logistic;
    spec.response = "y";
    spec.terms = {GlmTerm::cont("x")};
    auto fit = fit_glm(spec, t);
    CHECK(fit.separation_flag);
}

TEST_CASE("coefficients are invariant under row reordering") {
    Rng rng(17);
    std::vector<double> x, y;
    std::vector<std::string> g;
    for (int i = 0; i < 500; ++i) {
        x.push_back(rng.normal());
        g.push_back(i % 3 == 0 ? "a" : (i % 3 == 1 ? "b" : "c"));
        const double eta = -0.2 + 0.8 * x.back() + (g.back() == "b" ? 0.5 : 0.0);
        y.push_back(rng.bernoulli(1.0 / (1.0 + std::exp(-eta))) ? 1.0 : 0.0);
    }
    std::vector<std::size_t> perm(x.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng shuffler(5);
    shuffler.shuffle(perm);

    DataTable t1;
    t1.add_numeric("y", y);
    t1.add_numeric("x", x);
    t1.add_categorical("g", g);
    std::vector<double> xs, ys;
    std::vector<std::string> gs;
    for (std::size_t p : perm) {
        xs.push_back(x[p]);
        ys.push_back(y[p]);
        gs.push_back(g[p]);
    }
    DataTable t2;
    t2.add_numeric("y", std::move(ys));
    t2.add_numeric("x", std::move(xs));
    t2.add_categorical("g", std::move(gs));

    GlmSpec spec;
    spec.family = GlmSpec::Family::logistic;
    spec.response = "y";
    spec.terms = {GlmTerm::cont("x"), GlmTerm::fe("g")};
    auto f1 = fit_glm(spec, t1);
    auto f2 = fit_glm(spec, t2);
    REQUIRE(f1.coefficients.size() == f2.coefficients.size());
    for (std::size_t j = 0; j < f1.coefficients.size(); ++j)
        CHECK(std::fabs(f1.coefficients[j] - f2.coefficients[j]) < 1e-8);
}

TEST_CASE("recoding the reference level leaves fitted probabilities unchanged") {
    Rng rng(23);
    std::vector<double> y;
    std::vector<std::string> g;
    const char* levels[3] = {"a", "b", "c"};
    const double rates[3] = {0.3, 0.55, 0.7};
    for (int i = 0; i < 900; ++i) {
        const int lvl = i % 3;
        g.push_back(levels[lvl]);
        y.push_back(rng.bernoulli(rates[lvl]) ? 1.0 : 0.0);
    }
    DataTable t;
    t.add_numeric("y", std::move(y));
    t.add_categorical("g", std::move(g));

    auto fitted_for = [&](const std::string& ref) {
        GlmSpec spec;
        spec.family = GlmSpec::Family::logistic;
        spec.response = "y";
        spec.terms = {GlmTerm::fe("g", ref)};
        auto fit = fit_glm(spec, t);
        // reconstruct per-level fitted probability
        std::vector<double> mu(3);
        for (int lvl = 0; lvl < 3; ++lvl) {
            double eta = fit.coefficients[0];
            const std::string dummy = std::string("g=") + levels[lvl];
            if (auto c = fit.coefficient(dummy)) eta += *c;
            mu[lvl] = 1.0 / (1.0 + std::exp(-eta));
        }
        return mu;
    };
    auto mu_a = fitted_for("a");
    auto mu_c = fitted_for("c");
    for (int lvl = 0; lvl < 3; ++lvl) CHECK(std::fabs(mu_a[lvl] - mu_c[lvl]) < 1e-10);
}

TEST_CASE("one observation per cluster equals HC1, computed independently") {
    Rng rng(31);
    const int n = 150;
    std::vector<double> x, y;
    std::vector<std::string> cluster;
    for (int i = 0; i < n; ++i) {
        x.push_back(rng.normal());
        y.push_back(rng.bernoulli(1.0 / (1.0 + std::exp(-0.3 - 0.7 * x.back()))) ? 1.0 : 0.0);
        cluster.push_back("row" + std::to_string(i));
    }
    DataTable t;
    t.add_numeric("y", y);
    t.add_numeric("x", x);
    t.add_categorical("cluster", cluster);

    GlmSpec spec;
    spec.family = GlmSpec::Family::logistic;
    spec.response = "y";
    spec.terms = {GlmTerm::cont("x")};
    auto fit = fit_glm(spec, t);
    auto robust = cluster_robust_se(fit, t, "cluster");

    // independent HC1 sandwich on the 2-column design
    const double b0 = fit.coefficients[0];
    const double b1 = fit.coefficients[1];
    double a00 = 0, a01 = 0, a11 = 0;  // X'WX
    double m00 = 0, m01 = 0, m11 = 0;  // meat
    for (int i = 0; i < n; ++i) {
        const double mu = 1.0 / (1.0 + std::exp(-(b0 + b1 * x[i])));
        const double w = mu * (1.0 - mu);
        const double r = y[i] - mu;
        a00 += w;
        a01 += w * x[i];
        a11 += w * x[i] * x[i];
        m00 += r * r;
        m01 += r * r * x[i];
        m11 += r * r * x[i] * x[i];
    }
    const double det = a00 * a11 - a01 * a01;
    const double i00 = a11 / det, i01 = -a01 / det, i11 = a00 / det;
    const double dof = static_cast<double>(n) / (n - 2.0);
    // V = dof * inv(A) * M * inv(A)
    const double v00 =
        dof * (i00 * (m00 * i00 + m01 * i01) + i01 * (m01 * i00 + m11 * i01));
    const double v11 =
        dof * (i01 * (m00 * i01 + m01 * i11) + i11 * (m01 * i01 + m11 * i11));
    CHECK(std::fabs(robust[0] - std::sqrt(v00)) < 1e-10);
    CHECK(std::fabs(robust[1] - std::sqrt(v11)) < 1e-10);
}

TEST_CASE("duplicating rows within clusters preserves robust t up to the dof factor") {
    Rng rng(41);
    const int n = 120;
    std::vector<double> x, y;
    std::vector<std::string> cluster;
    for (int i = 0; i < n; ++i) {
        x.push_back(rng.normal());
        y.push_back(rng.bernoulli(0.5) ? 1.0 : 0.0);
        cluster.push_back("c" + std::to_string(i % 10));
    }
    DataTable t1;
    t1.add_numeric("y", y);
    t1.add_numeric("x", x);
    t1.add_categorical("cluster", cluster);

    std::vector<double> x2 = x, y2 = y;
    std::vector<std::string> c2 = cluster;
    x2.insert(x2.end(), x.begin(), x.end());
    y2.insert(y2.end(), y.begin(), y.end());
    c2.insert(c2.end(), cluster.begin(), cluster.end());
    DataTable t2;
    t2.add_numeric("y", std::move(y2));
    t2.add_numeric("x", std::move(x2));
    t2.add_categorical("cluster", std::move(c2));

    GlmSpec spec;
    spec.family = GlmSpec::Family::logistic;
    spec.response = "y";
    spec.terms = {GlmTerm::cont("x")};
    auto f1 = fit_glm(spec, t1);
    auto f2 = fit_glm(spec, t2);
    auto r1 = cluster_robust_se(f1, t1, "cluster");
    auto r2 = cluster_robust_se(f2, t2, "cluster");
    // coefficients identical; scores per cluster double, bread doubles:
    // sandwich shrinks by 2 up to the finite-sample factor
    const double dof1 = (10.0 / 9.0) * (n - 1.0) / (n - 2.0);
    const double dof2 = (10.0 / 9.0) * (2.0 * n - 1.0) / (2.0 * n - 2.0);
    for (std::size_t j = 0; j < r1.size(); ++j) {
        const double t_1 = f1.coefficients[j] / (r1[j] / std::sqrt(dof1));
        const double t_2 = f2.coefficients[j] / (r2[j] / std::sqrt(dof2));
        CHECK(std::fabs(t_1 - t_2) < 1e-6);
    }
}

TEST_CASE("cluster SEs track naive SEs on independent data") {
    Rng rng(59);
    std::vector<double> ratios;
    for (int seed = 0; seed < 20; ++seed) {
        const int n = 2000;
        std::vector<double> x, y;
        std::vector<std::string> cluster;
        for (int i = 0; i < n; ++i) {
            x.push_back(rng.normal());
            y.push_back(rng.bernoulli(1.0 / (1.0 + std::exp(-0.2 - 0.5 * x.back()))) ? 1.0
                                                                                      : 0.0);
            cluster.push_back("c" + std::to_string(i % 50));
        }
        DataTable t;
        t.add_numeric("y", std::move(y));
        t.add_numeric("x", std::move(x));
        t.add_categorical("cluster", std::move(cluster));
        GlmSpec spec;
        spec.family = GlmSpec::Family::logistic;
        spec.response = "y";
        spec.terms = {GlmTerm::cont("x")};
        auto fit = fit_glm(spec, t);
        auto robust = cluster_robust_se(fit, t, "cluster");
        ratios.push_back(robust[1] / fit.se[1]);
    }
    std::sort(ratios.begin(), ratios.end());
    const double median = ratios[ratios.size() / 2];
    CHECK(median > 0.85);
    CHECK(median < 1.15);
}

TEST_CASE("single cluster is rejected") {
    DataTable t;
    t.add_numeric("y", {0.0, 1.0, 1.0, 0.0});
    t.add_numeric("x", {0.0, 1.0, 2.0, 3.0});
    t.add_categorical("cluster", {"c", "c", "c", "c"});
    GlmSpec spec;
    spec.family = GlmSpec::Family::logistic;
    spec.response = "y";
    spec.terms = {GlmTerm::cont("x")};
    auto fit = fit_glm(spec, t);
    CHECK_THROWS_AS(cluster_robust_se(fit, t, "cluster"), std::invalid_argument);
}

TEST_CASE("binned scatter identities") {
    SUBCASE("85 points in 85 bins is the identity") {
        std::vector<double> x, y;
        for (int i = 0; i < 85; ++i) {
            x.push_back(i);
            y.push_back(10.0 - i);
        }
        auto bins = binned_scatter(x, y, 85);
        REQUIRE(bins.size() == 85);
        for (int i = 0; i < 85; ++i) {
            CHECK(bins[i].count == 1);
            CHECK(bins[i].x_mean == doctest::Approx(i));
            CHECK(bins[i].y_mean == doctest::Approx(10.0 - i));
        }
    }
    SUBCASE("constant y makes every bin mean that constant") {
        Rng rng(61);
        std::vector<double> x, y;
        for (int i = 0; i < 1000; ++i) {
            x.push_back(rng.next_double());
            y.push_back(3.25);
        }
        for (const auto& b : binned_scatter(x, y, 85)) CHECK(b.y_mean == doctest::Approx(3.25));
    }
    SUBCASE("bin counts differ by at most one") {
        Rng rng(67);
        std::vector<double> x, y;
        for (int i = 0; i < 12345; ++i) {
            x.push_back(rng.normal());
            y.push_back(rng.normal());
        }
        auto bins = binned_scatter(x, y, 85);
        std::size_t lo = bins[0].count, hi = bins[0].count;
        std::size_t total = 0;
        for (const auto& b : bins) {
            lo = std::min(lo, b.count);
            hi = std::max(hi, b.count);
            total += b.count;
        }
        CHECK(hi - lo <= 1);
        CHECK(total == x.size());
    }
    SUBCASE("too few observations throws") {
        std::vector<double> x = {1.0, 2.0};
        std::vector<double> y = {1.0, 2.0};
        CHECK_THROWS_AS(binned_scatter(x, y, 85), std::invalid_argument);
    }
}

TEST_CASE("order statistics: uniform x bin means sit near bin centers") {
    Rng rng(71);
    std::vector<double> x, y;
    for (int i = 0; i < 85000; ++i) {
        x.push_back(rng.next_double());
        y.push_back(0.0);
    }
    auto bins = binned_scatter(x, y, 85);
    double worst = 0.0;
    for (int i = 0; i < 85; ++i)
        worst = std::max(worst, std::fabs(bins[i].x_mean - (i + 0.5) / 85.0));
    CHECK(worst < 0.01);
}

TEST_CASE("quantile grid") {
    SUBCASE("constant y fills all cells with the constant") {
        Rng rng(73);
        std::vector<double> x1, x2, y;
        for (int i = 0; i < 400; ++i) {
            x1.push_back(rng.next_double());
            x2.push_back(rng.next_double());
            y.push_back(7.5);
        }
        auto grid = quantile_grid(x1, x2, y, 10);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j)
                if (auto v = grid.cell(i, j)) CHECK(*v == doctest::Approx(7.5));
    }
    SUBCASE("a grid correlates with itself at exactly 1") {
        Rng rng(79);
        std::vector<double> x1, x2, y;
        for (int i = 0; i < 5000; ++i) {
            x1.push_back(rng.normal());
            x2.push_back(rng.normal());
            y.push_back(x1.back() + 0.5 * x2.back() + rng.normal());
        }
        auto grid = quantile_grid(x1, x2, y, 10);
        CHECK(std::fabs(grid_correlation(grid, grid) - 1.0) < 1e-12);
    }
    SUBCASE("planted monotone surface gives monotone cell means") {
        Rng rng(83);
        std::vector<double> x1, x2, y;
        for (int i = 0; i < 100000; ++i) {
            x1.push_back(rng.next_double());
            x2.push_back(rng.next_double());
            y.push_back(2.0 * x1.back() + 3.0 * x2.back() + 0.1 * rng.normal());
        }
        auto grid = quantile_grid(x1, x2, y, 10);
        for (int i = 0; i < 10; ++i)
            for (int j = 1; j < 10; ++j) CHECK(*grid.cell(i, j) > *grid.cell(i, j - 1));
        for (int j = 0; j < 10; ++j)
            for (int i = 1; i < 10; ++i) CHECK(*grid.cell(i, j) > *grid.cell(i - 1, j));
    }
    SUBCASE("too few observations throws") {
        std::vector<double> v = {1.0, 2.0, 3.0};
        CHECK_THROWS_AS(quantile_grid(v, v, v, 10), std::invalid_argument);
    }
}

TEST_CASE("hypothesis tests against independent references") {
    SUBCASE("identical samples: KS statistic 0, p 1") {
        std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
        auto r = ks_two_sample_test(a, a);
        CHECK(r.statistic == 0.0);
        CHECK(r.p_value == 1.0);
    }
    SUBCASE("exact small-sample KS") {
        std::vector<double> a = {0.1, 0.4, 0.7, 1.2, 1.9, 2.3};
        std::vector<double> b = {0.2, 0.5, 0.9, 1.4, 2.8};
        auto r = ks_two_sample_test(a, b);
        CHECK(r.statistic == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(r.p_value == doctest::Approx(0.9978354978354979).epsilon(1e-10));

        std::vector<double> c = {1.0, 2.0, 3.0, 4.0};
        std::vector<double> d = {2.5, 3.5, 4.5, 5.5};
        auto r2 = ks_two_sample_test(c, d);
        CHECK(r2.statistic == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r2.p_value == doctest::Approx(0.7714285714285716).epsilon(1e-10));
    }
    SUBCASE("perfectly correlated vectors: r = 1") {
        std::vector<double> x = {1, 2, 3, 4, 5};
        std::vector<double> y = {2, 4, 6, 8, 10};
        auto r = pearson_r_test(x, y);
        CHECK(r.statistic == doctest::Approx(1.0));
        CHECK(r.p_value == doctest::Approx(0.0));
    }
    SUBCASE("pearson reference values") {
        std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
        std::vector<double> y = {2.1, 2.9, 4.2, 4.8, 6.1, 7.2};
        auto r = pearson_r_test(x, y);
        CHECK(r.statistic == doctest::Approx(0.9965032947618537).epsilon(1e-12));
        CHECK(r.p_value == doctest::Approx(1.8319044267995142e-05).epsilon(1e-9));
    }
    SUBCASE("binomial 69/100 at p0 = 0.5 matches exact summation to 1e-10") {
        auto r = binomial_test(69, 100, 0.5);
        // independent oracle: multiplicative pmf recurrence in long double
        long double pmf = std::pow(0.5L, 100);  // k = 0
        long double obs_pmf = 0.0L;
        std::vector<long double> pmfs(101);
        for (int k = 0; k <= 100; ++k) {
            pmfs[k] = pmf;
            if (k == 69) obs_pmf = pmf;
            pmf = pmf * (100 - k) / (k + 1);  // p0/(1-p0) = 1
        }
        long double expected = 0.0L;
        for (int k = 0; k <= 100; ++k)
            if (pmfs[k] <= obs_pmf * (1.0L + 1e-7L)) expected += pmfs[k];
        CHECK(std::fabs(r.p_value - static_cast<double>(expected)) < 1e-10);
        CHECK(r.p_value == doctest::Approx(0.00018314322488235366).epsilon(1e-9));
    }
    SUBCASE("asymmetric binomial reference") {
        auto r = binomial_test(7, 20, 0.3);
        CHECK(r.p_value == doctest::Approx(0.6294979666766769).epsilon(1e-9));
    }
    SUBCASE("welch t reference") {
        std::vector<double> a = {1.1, 2.3, 2.9, 3.1, 4.0, 4.5};
        std::vector<double> b = {2.0, 3.5, 4.1, 5.2, 5.9, 6.3, 7.1};
        auto r = t_two_sample_test(a, b);
        CHECK(r.statistic == doctest::Approx(-2.2640349022617485).epsilon(1e-12));
        CHECK(r.p_value == doctest::Approx(0.045713092307848625).epsilon(1e-9));
    }
    SUBCASE("chi-squared 2x2 with and without continuity correction") {
        auto r = chi2_2x2_test(30, 70, 50, 50);
        CHECK(r.statistic == doctest::Approx(8.333333333333334).epsilon(1e-12));
        CHECK(r.p_value == doctest::Approx(0.003892417122778637).epsilon(1e-9));
        auto ry = chi2_2x2_test(30, 70, 50, 50, true);
        CHECK(ry.statistic == doctest::Approx(7.520833333333334).epsilon(1e-12));
        CHECK(ry.p_value == doctest::Approx(0.006098945931214352).epsilon(1e-9));
    }
    SUBCASE("distribution helpers") {
        CHECK(student_t_two_sided_p(2.5, 10) ==
              doctest::Approx(0.031446844236608776).epsilon(1e-11));
        CHECK(normal_two_sided_p(1.96) == doctest::Approx(0.04999579029644087).epsilon(1e-12));
    }
}

TEST_CASE("pipeline recovers a planted negative interaction") {
    SynthParams params;
    params.n_patents = 50000;
    params.beta_interaction = -0.5;
    params.beta_women = -0.15;
    auto records = synth_corpus(params, 12345);

    CorpusFilter filter;
    filter.min_year = params.first_year + 1;
    filter.max_year = params.last_year;
    auto scoreable = filter_scoreable(records, filter);

    // cumulative networks and snapshots per filing year - 1
    SnapshotSet snapshots;
    std::vector<PatentApplication> upto;
    for (int year = params.first_year; year < params.last_year; ++year) {
        for (const auto& r : scoreable)
            if (r.filing_year() == year) upto.push_back(r);
        // networks also include the baseline-year records below the filter
        auto net = build_network(upto, year, 4);
        NullModelConfig config;
        config.replicates = 60;
        config.master_seed = 99;
        config.threads = 4;
        snapshots.by_year[year] = make_snapshot(net, null_stats(net, config));
    }
    std::vector<PatentApplication> to_score;
    for (const auto& r : scoreable)
        if (r.filing_year() > params.first_year + 1) to_score.push_back(r);
    auto scores = score_corpus(to_score, snapshots, Aggregation::min,
                               TimingPolicy::prior_year, 4);

    GenderDict dict;
    {
        std::string csv = "name,gender,probability\n";
        for (auto n : synth_women_names()) csv += std::string(n) + ",woman,0.97\n";
        for (auto n : synth_men_names()) csv += std::string(n) + ",man,0.97\n";
        std::istringstream in(csv);
        dict = GenderDict::load(in);
    }
    auto frame = build_analysis_frame(to_score, scores, dict);
    REQUIRE(frame.n_rows > 10000);

    GlmSpec spec;
    spec.family = GlmSpec::Family::logistic;
    spec.response = "granted";
    spec.terms = {GlmTerm::cont("p_atypical"), GlmTerm::cont("women_majority"),
                  GlmTerm::inter("women_majority", "p_atypical"), GlmTerm::fe("year"),
                  GlmTerm::fe("team_size"), GlmTerm::fe("cpc_class")};
    auto fit = fit_glm(spec, frame.table, 4);
    REQUIRE(fit.converged);
    const auto interaction = fit.coefficient("women_majority:p_atypical");
    REQUIRE(interaction.has_value());
    CHECK(*interaction < 0.0);

    // |t| > 2 on the planted effect
    std::size_t idx = 0;
    for (; idx < fit.term_names.size(); ++idx)
        if (fit.term_names[idx] == "women_majority:p_atypical") break;
    REQUIRE(idx < fit.term_names.size());
    CHECK(std::fabs(fit.coefficients[idx] / fit.se[idx]) > 2.0);
}
