#pragma once

#include <span>
#include <vector>

namespace nowcast {

struct ArmaModel {
    int p = 0, q = 0;
    double intercept = 0.0;
    std::vector<double> ar;     // phi_1..phi_p
    std::vector<double> ma;     // theta_1..theta_q
    double sigma2 = 0.0;        // RSS / n over the fit sample
    double aic = 0.0;           // n*ln(RSS/n) + 2*(p+q+1)
    int n_used = 0;             // rows in the fit sample
    int sample_start = 0;       // first series index of the fit sample
};

// Hannan-Rissanen two-stage least squares: a long autoregression supplies
// residual proxies; the series is then regressed on its p lags and q lagged
// proxies. sigma2/AIC are evaluated on the recursive innovation residuals
// over [sample_start, n), so they are recomputable from (model, series).
// min_presample forces a common fit window when comparing orders.
ArmaModel fit_arma(std::span<const double> series, int p, int q, int min_presample = 0);

// Innovation residuals over the whole series (zero before the first row
// with full AR lags).
std::vector<double> arma_residuals(const ArmaModel& model, std::span<const double> series);

// Minimal AIC over the (0..max_p) x (0..max_q) grid on a common sample;
// candidates within 2 AIC units of the minimum count as tied and the tie
// goes to the smallest p+q, then the smallest p.
ArmaModel select_arma(std::span<const double> series, int max_p = 5, int max_q = 5);

double arma_forecast_1step(const ArmaModel& model, std::span<const double> history,
                           std::span<const double> residual_history);

} // namespace nowcast
