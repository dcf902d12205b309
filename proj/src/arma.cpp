#include "nowcast/arma.hpp"

#include "nowcast/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nowcast {

namespace {

constexpr double kAicTieBand = 2.0;

int long_ar_order(int n, int p, int q) {
    return std::max(p + q, std::min(20, n / 10));
}

Eigen::VectorXd ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    return X.colPivHouseholderQr().solve(y);
}

} // namespace

ArmaModel fit_arma(std::span<const double> series, int p, int q, int min_presample) {
    int n = static_cast<int>(series.size());
    if (p < 0 || q < 0) throw DataError("ARMA orders must be >= 0");
    if (n < 10 * (p + q + 1))
        throw DataError("ARMA(" + std::to_string(p) + "," + std::to_string(q) +
                        ") needs at least " + std::to_string(10 * (p + q + 1)) +
                        " observations, got " + std::to_string(n));

    // Stage 1: residual proxies from a long autoregression (only when q > 0).
    int L = q > 0 ? long_ar_order(n, p, q) : 0;
    std::vector<double> proxy(n, 0.0);
    if (q > 0) {
        int rows = n - L;
        if (rows <= L + 1) throw DataError("series too short for the long autoregression");
        Eigen::MatrixXd X(rows, L + 1);
        Eigen::VectorXd y(rows);
        for (int t = L; t < n; ++t) {
            X(t - L, 0) = 1.0;
            for (int k = 1; k <= L; ++k) X(t - L, k) = series[t - k];
            y(t - L) = series[t];
        }
        Eigen::VectorXd beta = ols(X, y);
        for (int t = L; t < n; ++t) {
            double fit = beta(0);
            for (int k = 1; k <= L; ++k) fit += beta(k) * series[t - k];
            proxy[t] = series[t] - fit;
        }
    }

    // Stage 2: series on its own lags and lagged residual proxies.
    int start = std::max({p, q > 0 ? L + q : 0, min_presample});
    int rows = n - start;
    if (rows <= p + q + 1) throw DataError("series too short for the requested ARMA sample");
    Eigen::MatrixXd X(rows, p + q + 1);
    Eigen::VectorXd y(rows);
    for (int t = start; t < n; ++t) {
        int r = t - start;
        X(r, 0) = 1.0;
        for (int k = 1; k <= p; ++k) X(r, k) = series[t - k];
        for (int k = 1; k <= q; ++k) X(r, p + k) = proxy[t - k];
        y(r) = series[t];
    }
    Eigen::VectorXd beta = ols(X, y);
    for (int i = 0; i < beta.size(); ++i)
        if (!std::isfinite(beta(i))) throw NumericError("ARMA regression produced non-finite coefficients");

    ArmaModel m;
    m.p = p;
    m.q = q;
    m.intercept = beta(0);
    m.ar.assign(beta.data() + 1, beta.data() + 1 + p);
    m.ma.assign(beta.data() + 1 + p, beta.data() + 1 + p + q);
    m.sample_start = start;
    m.n_used = rows;

    std::vector<double> resid = arma_residuals(m, series);
    double rss = 0;
    for (int t = start; t < n; ++t) rss += resid[t] * resid[t];
    m.sigma2 = rss / rows;
    m.aic = rows * std::log(std::max(rss, 1e-300) / rows) + 2.0 * (p + q + 1);
    return m;
}

std::vector<double> arma_residuals(const ArmaModel& model, std::span<const double> series) {
    int n = static_cast<int>(series.size());
    std::vector<double> e(n, 0.0);
    for (int t = model.p; t < n; ++t) {
        double pred = model.intercept;
        for (int i = 0; i < model.p; ++i) pred += model.ar[i] * series[t - 1 - i];
        for (int j = 0; j < model.q; ++j) {
            int idx = t - 1 - j;
            pred += model.ma[j] * (idx >= 0 ? e[idx] : 0.0);
        }
        e[t] = series[t] - pred;
    }
    return e;
}

ArmaModel select_arma(std::span<const double> series, int max_p, int max_q) {
    int n = static_cast<int>(series.size());
    if (max_p < 0 || max_q < 0) throw DataError("select_arma: negative max order");
    // common fit window so AICs are comparable across orders
    int L = std::max(max_p + max_q, std::min(20, n / 10));
    int presample = std::max(max_p, L + max_q);

    std::vector<ArmaModel> fits;
    for (int p = 0; p <= max_p; ++p)
        for (int q = 0; q <= max_q; ++q) {
            try {
                fits.push_back(fit_arma(series, p, q, presample));
            } catch (const std::exception&) {
                // order infeasible on this series; candidate skipped
            }
        }
    if (fits.empty()) throw NumericError("select_arma: every candidate order failed to fit");

    double best_aic = std::numeric_limits<double>::infinity();
    for (const auto& m : fits) best_aic = std::min(best_aic, m.aic);

    const ArmaModel* winner = nullptr;
    for (const auto& m : fits) {
        if (m.aic > best_aic + kAicTieBand) continue;
        if (!winner || m.p + m.q < winner->p + winner->q ||
            (m.p + m.q == winner->p + winner->q && m.p < winner->p))
            winner = &m;
    }
    return *winner;
}

double arma_forecast_1step(const ArmaModel& model, std::span<const double> history,
                           std::span<const double> residual_history) {
    if (static_cast<int>(history.size()) < model.p)
        throw DataError("arma_forecast_1step: history shorter than AR order");
    if (static_cast<int>(residual_history.size()) < model.q)
        throw DataError("arma_forecast_1step: residual history shorter than MA order");
    double out = model.intercept;
    for (int i = 0; i < model.p; ++i) out += model.ar[i] * history[history.size() - 1 - i];
    for (int j = 0; j < model.q; ++j)
        out += model.ma[j] * residual_history[residual_history.size() - 1 - j];
    return out;
}

} // namespace nowcast
