#include "nowcast/arma.hpp"
#include "nowcast/errors.hpp"
#include "nowcast/linear.hpp"
#include "nowcast/stats.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace nowcast;
using testutil::random_design;
using testutil::simulate_arma;
using testutil::tiny_design;

TEST_CASE("ridge at lambda=0 recovers the exact fit") {
    auto d = tiny_design({-2, 2}, {{-1, 1}});
    LinearModel m = fit_ridge(d, 0.0);
    CHECK(m.raw_coef[0] == doctest::Approx(2.0));
    CHECK(m.raw_intercept == doctest::Approx(0.0));
}

TEST_CASE("ridge shrinkage matches the normal-equation form") {
    // features already standardized: coef = sum(xy) / (sum(x^2) + N*lambda)
    auto d = tiny_design({-1, 1}, {{-1, 1}});
    LinearModel m = fit_ridge(d, 1.0);
    CHECK(m.coef[0] == doctest::Approx(0.5));
}

TEST_CASE("ridge on an all-zero target") {
    auto d = tiny_design({0, 0, 0, 0}, {{1, 2, 3, 4}});
    for (double lam : {0.0, 1.0, 7.5}) {
        LinearModel m = fit_ridge(d, lam);
        CHECK(m.raw_coef[0] == doctest::Approx(0.0));
        CHECK(m.raw_intercept == doctest::Approx(0.0));
    }
}

TEST_CASE("ridge rejects collinear features at lambda=0 only") {
    auto d = tiny_design({1, 2, 3, 4}, {{1, 2, 3, 4}, {2, 4, 6, 8}});
    CHECK_THROWS_AS(fit_ridge(d, 0.0), NumericError);
    CHECK_NOTHROW(fit_ridge(d, 0.1));
}

TEST_CASE("ridge coefficient norm is non-increasing in lambda") {
    auto d = random_design(60, 4, 123);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10; ++i) {
        double lam = 0.01 * std::pow(3.0, i);
        LinearModel m = fit_ridge(d, lam);
        double norm = 0;
        for (double b : m.coef) norm += b * b;
        CHECK(norm <= prev + 1e-12);
        prev = norm;
    }
}

TEST_CASE("standardized and raw prediction paths agree") {
    auto d = random_design(40, 3, 9);
    for (auto fit : {+[](const DesignMatrix& dd) { return fit_ridge(dd, 0.3); },
                     +[](const DesignMatrix& dd) { return fit_lasso(dd, 0.05); }}) {
        LinearModel m = fit(d);
        for (int i = 0; i < d.rows(); ++i) {
            auto row = d.row(i);
            CHECK(m.predict(row) == doctest::Approx(m.predict_standardized(row)).epsilon(1e-10));
        }
    }
}

TEST_CASE("soft_threshold definition") {
    CHECK(soft_threshold(3, 1) == doctest::Approx(2.0));
    CHECK(soft_threshold(-0.5, 1) == doctest::Approx(0.0));
    CHECK(soft_threshold(1.25, 0) == doctest::Approx(1.25));
    CHECK(soft_threshold(-4, 0) == doctest::Approx(-4.0));
}

TEST_CASE("lasso zeroes out at lambda_max") {
    auto d = random_design(50, 4, 17);
    double lmax = lasso_lambda_max(d);
    for (double lam : {lmax, lmax * 1.5}) {
        LinearModel m = fit_lasso(d, lam);
        for (double b : m.coef) CHECK(b == 0.0);
    }
    // just below lambda_max at least one coefficient activates
    LinearModel m = fit_lasso(d, lmax * 0.99);
    double total = 0;
    for (double b : m.coef) total += std::abs(b);
    CHECK(total > 0.0);
}

TEST_CASE("lasso at lambda=0 agrees with ridge at lambda=0") {
    auto d = random_design(50, 3, 29);
    LinearModel l = fit_lasso(d, 0.0, 1e-12);
    LinearModel r = fit_ridge(d, 0.0);
    for (int j = 0; j < 3; ++j)
        CHECK(l.raw_coef[j] == doctest::Approx(r.raw_coef[j]).epsilon(1e-6));
    CHECK(l.raw_intercept == doctest::Approx(r.raw_intercept).epsilon(1e-6));
}

TEST_CASE("single-feature lasso has the soft-threshold closed form") {
    auto d = random_design(40, 1, 31);
    double lam = 0.7;
    LinearModel m = fit_lasso(d, lam);
    // recompute sum(x~ * y_c)/N on the standardized feature
    double mu = mean(d.columns[0]);
    double var = 0;
    for (double x : d.columns[0]) var += (x - mu) * (x - mu);
    double sd = std::sqrt(var / d.rows());
    double ym = mean(d.target), rho = 0;
    for (int i = 0; i < d.rows(); ++i)
        rho += (d.columns[0][i] - mu) / sd * (d.target[i] - ym);
    rho /= d.rows();
    CHECK(m.coef[0] == doctest::Approx(soft_threshold(rho, lam)).epsilon(1e-9));
}

namespace {

// KKT residual of the lasso stationarity conditions, in gradient units.
double kkt_violation(const LinearModel& m, const DesignMatrix& d) {
    int n = d.rows(), p = d.features();
    std::vector<std::vector<double>> xs(p, std::vector<double>(n));
    std::vector<double> yc(n);
    double ym = mean(d.target);
    for (int i = 0; i < n; ++i) yc[i] = d.target[i] - ym;
    for (int j = 0; j < p; ++j) {
        double mu = m.feature_mean[j], sd = m.feature_std[j];
        for (int i = 0; i < n; ++i)
            xs[j][i] = sd > 0 ? (d.columns[j][i] - mu) / sd : 0.0;
    }
    std::vector<double> r = yc;
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) r[i] -= xs[j][i] * m.coef[j];
    double worst = 0;
    for (int j = 0; j < p; ++j) {
        if (m.feature_std[j] == 0) continue;
        double g = 0;
        for (int i = 0; i < n; ++i) g += xs[j][i] * r[i];
        g /= n;
        if (m.coef[j] == 0.0)
            worst = std::max(worst, std::max(0.0, std::abs(g) - m.lambda));
        else
            worst = std::max(worst, std::abs(g - m.lambda * (m.coef[j] > 0 ? 1.0 : -1.0)));
    }
    return worst;
}

} // namespace

TEST_CASE("lasso satisfies the KKT conditions at convergence") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        auto d = random_design(40 + static_cast<int>(seed), 4, 1000 + seed);
        double lam = lasso_lambda_max(d) * (0.05 + 0.08 * static_cast<double>(seed % 5));
        LinearModel m = fit_lasso(d, lam);
        REQUIRE(m.converged);
        CHECK(kkt_violation(m, d) <= 1e-6);
    }
}

TEST_CASE("cv_lambda basics") {
    auto d = random_design(60, 3, 41);
    std::vector<double> single{0.25};
    CHECK(cv_lambda(d, Penalty::l1, single, 5, 1) == doctest::Approx(0.25));
    CHECK_THROWS_AS(cv_lambda(d, Penalty::l1, std::vector<double>{}, 5, 1), DataError);
    // default signature exposes k = 10
    auto grid = lambda_grid(d, 8);
    CHECK_NOTHROW(cv_lambda(d, Penalty::l2, grid));
}

TEST_CASE("cv_lambda on pure noise prefers heavy regularization") {
    int wins = 0, runs = 20;
    for (int s = 0; s < runs; ++s) {
        auto d = random_design(60, 4, 5000 + s); // target independent of features
        auto grid = lambda_grid(d, 9);
        double lam = cv_lambda(d, Penalty::l1, grid, 10, 77 + s);
        std::vector<double> g(grid);
        std::sort(g.begin(), g.end());
        if (lam >= g[g.size() / 2]) ++wins;
    }
    CHECK(wins >= 16); // >= 80% of 20 runs
}

TEST_CASE("lambda_grid spans lambda_max downward") {
    auto d = random_design(50, 3, 59);
    auto grid = lambda_grid(d, 50);
    REQUIRE(grid.size() == 50);
    CHECK(grid.front() == doctest::Approx(lasso_lambda_max(d)));
    CHECK(grid.back() == doctest::Approx(lasso_lambda_max(d) * 1e-4).epsilon(1e-9));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] < grid[i - 1]);
}

TEST_CASE("arma (0,0) reduces to the sample mean with recomputable AIC") {
    auto y = simulate_arma(500, {}, {}, 0.0, 303);
    ArmaModel m = fit_arma(y, 0, 0);
    CHECK(m.intercept == doctest::Approx(mean(y)).epsilon(1e-9));
    auto resid = arma_residuals(m, y);
    double rss = 0;
    for (int t = m.sample_start; t < static_cast<int>(y.size()); ++t) rss += resid[t] * resid[t];
    CHECK(m.aic ==
          doctest::Approx(m.n_used * std::log(rss / m.n_used) + 2.0 * 1).epsilon(1e-12));
    CHECK(m.sigma2 == doctest::Approx(rss / m.n_used));
}

TEST_CASE("arma AR(1) coefficient recovery") {
    int hits = 0;
    for (int s = 1; s <= 20; ++s) {
        auto y = simulate_arma(500, {0.5}, {}, 0.0, 400 + s);
        ArmaModel m = fit_arma(y, 1, 0);
        if (std::abs(m.ar[0] - 0.5) <= 0.1) ++hits;
    }
    CHECK(hits >= 18); // >= 90% of 20 runs
}

TEST_CASE("arma MA(1) coefficient recovery") {
    int hits = 0;
    for (int s = 1; s <= 20; ++s) {
        auto y = simulate_arma(500, {}, {0.4}, 0.0, 500 + s);
        ArmaModel m = fit_arma(y, 0, 1);
        if (std::abs(m.ma[0] - 0.4) <= 0.15) ++hits;
    }
    CHECK(hits >= 18);
}

TEST_CASE("select_arma keeps white noise at (0,0) most of the time") {
    int hits = 0;
    for (int s = 1; s <= 20; ++s) {
        auto y = simulate_arma(500, {}, {}, 0.0, 600 + s);
        ArmaModel m = select_arma(y);
        if (m.p == 0 && m.q == 0) ++hits;
    }
    CHECK(hits >= 16); // >= 80%
}

TEST_CASE("select_arma recovers AR(2)") {
    int hits = 0;
    for (int s = 1; s <= 20; ++s) {
        auto y = simulate_arma(500, {0.5, -0.3}, {}, 0.0, 700 + s);
        ArmaModel m = select_arma(y);
        if (m.p == 2 && m.q == 0) ++hits;
    }
    CHECK(hits >= 14); // >= 70%
}

TEST_CASE("select_arma on a constant series") {
    std::vector<double> y(200, 3.5);
    ArmaModel m = select_arma(y);
    CHECK(m.p == 0);
    CHECK(m.q == 0);
    CHECK(m.sigma2 == doctest::Approx(0.0));
    CHECK(m.intercept == doctest::Approx(3.5));
}

TEST_CASE("AIC penalizes unnecessary order on white noise") {
    double sum00 = 0, sum11 = 0;
    for (int s = 1; s <= 20; ++s) {
        auto y = simulate_arma(500, {}, {}, 0.0, 800 + s);
        int L = std::max(2, std::min(20, static_cast<int>(y.size()) / 10));
        int presample = std::max(1, L + 1);
        sum00 += fit_arma(y, 0, 0, presample).aic;
        sum11 += fit_arma(y, 1, 1, presample).aic;
    }
    CHECK(sum11 / 20 > sum00 / 20);
}

TEST_CASE("one-step arma forecasts") {
    ArmaModel ar1{.p = 1, .q = 0, .intercept = 0.0, .ar = {0.5}, .ma = {}};
    CHECK(arma_forecast_1step(ar1, std::vector<double>{1.0, 2.0}, std::vector<double>{}) ==
          doctest::Approx(1.0));

    ArmaModel none{.p = 0, .q = 0, .intercept = 4.2};
    CHECK(arma_forecast_1step(none, std::vector<double>{}, std::vector<double>{}) ==
          doctest::Approx(4.2));

    ArmaModel ma1{.p = 0, .q = 1, .intercept = 0.0, .ar = {}, .ma = {0.4}};
    CHECK(arma_forecast_1step(ma1, std::vector<double>{}, std::vector<double>{1.0}) ==
          doctest::Approx(0.4));

    CHECK_THROWS_AS(arma_forecast_1step(ar1, std::vector<double>{}, std::vector<double>{}),
                    DataError);
}

TEST_CASE("fit_arma rejects too-short series") {
    std::vector<double> y(25, 1.0);
    CHECK_THROWS_AS(fit_arma(y, 1, 1), DataError);
}
