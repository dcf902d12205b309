#include "nowcast/linear.hpp"

#include "nowcast/errors.hpp"
#include "nowcast/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace nowcast {

namespace {

struct Standardized {
    std::vector<std::vector<double>> cols; // zero mean, unit (population) std
    std::vector<double> mu, sigma;         // sigma 0 kept as 0; column stays zero
    std::vector<double> y_centered;
    double y_mean = 0.0;
};

Standardized standardize(const DesignMatrix& d) {
    int n = d.rows(), p = d.features();
    if (n < 1) throw DataError("empty design");
    Standardized s;
    s.mu.resize(p);
    s.sigma.resize(p);
    s.cols.assign(p, std::vector<double>(n));
    for (int j = 0; j < p; ++j) {
        double m = mean(d.columns[j]);
        double var = 0;
        for (double x : d.columns[j]) var += (x - m) * (x - m);
        double sd = std::sqrt(var / n);
        s.mu[j] = m;
        s.sigma[j] = sd;
        if (sd > 0)
            for (int i = 0; i < n; ++i) s.cols[j][i] = (d.columns[j][i] - m) / sd;
    }
    s.y_mean = mean(d.target);
    s.y_centered.resize(n);
    for (int i = 0; i < n; ++i) s.y_centered[i] = d.target[i] - s.y_mean;
    return s;
}

void finish(LinearModel& m, const Standardized& s) {
    int p = static_cast<int>(s.mu.size());
    m.feature_mean = s.mu;
    m.feature_std = s.sigma;
    m.intercept = s.y_mean;
    m.raw_coef.resize(p);
    m.raw_intercept = s.y_mean;
    for (int j = 0; j < p; ++j) {
        m.raw_coef[j] = s.sigma[j] > 0 ? m.coef[j] / s.sigma[j] : 0.0;
        m.raw_intercept -= m.raw_coef[j] * s.mu[j];
    }
}

} // namespace

double LinearModel::predict(std::span<const double> row) const {
    if (row.size() != raw_coef.size()) throw NumericError("LinearModel: dimension mismatch");
    double out = raw_intercept;
    for (std::size_t j = 0; j < row.size(); ++j) out += raw_coef[j] * row[j];
    return out;
}

double LinearModel::predict_standardized(std::span<const double> row) const {
    if (row.size() != coef.size()) throw NumericError("LinearModel: dimension mismatch");
    double out = intercept;
    for (std::size_t j = 0; j < row.size(); ++j)
        if (feature_std[j] > 0) out += coef[j] * (row[j] - feature_mean[j]) / feature_std[j];
    return out;
}

LinearModel fit_ridge(const DesignMatrix& design, double lambda) {
    if (lambda < 0) throw DataError("ridge lambda must be >= 0");
    Standardized s = standardize(design);
    int n = design.rows(), p = design.features();

    Eigen::MatrixXd X(n, p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = s.cols[j][i];
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(s.y_centered.data(), n);

    Eigen::MatrixXd gram = X.transpose() * X;
    gram.diagonal().array() += lambda * n;
    Eigen::VectorXd rhs = X.transpose() * y;

    if (lambda == 0.0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        if (!lu.isInvertible())
            throw NumericError("ridge at lambda=0: singular system (collinear features)");
    }
    Eigen::VectorXd beta = gram.ldlt().solve(rhs);

    LinearModel m;
    m.penalty = Penalty::l2;
    m.lambda = lambda;
    m.coef.assign(beta.data(), beta.data() + p);
    // zero-variance columns were never standardized; keep their weight at 0
    for (int j = 0; j < p; ++j)
        if (s.sigma[j] == 0) m.coef[j] = 0.0;
    finish(m, s);
    return m;
}

double soft_threshold(double z, double gamma) {
    if (gamma < 0) throw NumericError("soft_threshold needs gamma >= 0");
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

LinearModel fit_lasso(const DesignMatrix& design, double lambda, double tol, int max_sweeps) {
    if (lambda < 0) throw DataError("lasso lambda must be >= 0");
    Standardized s = standardize(design);
    int n = design.rows(), p = design.features();

    LinearModel m;
    m.penalty = Penalty::l1;
    m.lambda = lambda;
    m.coef.assign(p, 0.0);

    std::vector<double> r = s.y_centered; // residual y - X beta
    m.converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_delta = 0.0;
        for (int j = 0; j < p; ++j) {
            if (s.sigma[j] == 0) continue;
            const auto& xj = s.cols[j];
            double rho = 0;
            for (int i = 0; i < n; ++i) rho += xj[i] * r[i];
            rho = rho / n + m.coef[j]; // unit denominator: population variance is 1
            double updated = soft_threshold(rho, lambda);
            double delta = updated - m.coef[j];
            if (delta != 0.0) {
                for (int i = 0; i < n; ++i) r[i] -= xj[i] * delta;
                m.coef[j] = updated;
            }
            max_delta = std::max(max_delta, std::abs(delta));
        }
        m.sweeps = sweep + 1;
        if (max_delta < tol) {
            m.converged = true;
            break;
        }
    }
    finish(m, s);
    return m;
}

double lasso_lambda_max(const DesignMatrix& design) {
    Standardized s = standardize(design);
    int n = design.rows();
    double best = 0;
    for (int j = 0; j < design.features(); ++j) {
        if (s.sigma[j] == 0) continue;
        double dot = 0;
        for (int i = 0; i < n; ++i) dot += s.cols[j][i] * s.y_centered[i];
        best = std::max(best, std::abs(dot) / n);
    }
    return best;
}

std::vector<double> lambda_grid(const DesignMatrix& design, int count, double ratio) {
    if (count < 1) throw DataError("lambda_grid needs count >= 1");
    double top = lasso_lambda_max(design);
    if (top <= 0) return {0.0};
    std::vector<double> out(count);
    if (count == 1) return {top};
    double log_top = std::log(top), log_bot = std::log(top * ratio);
    for (int i = 0; i < count; ++i)
        out[i] = std::exp(log_top + (log_bot - log_top) * i / (count - 1));
    return out;
}

double cv_lambda(const DesignMatrix& design, Penalty kind, std::span<const double> grid,
                 int k, std::uint64_t seed) {
    if (grid.empty()) throw DataError("cv_lambda: empty grid");
    auto folds = kfold_partition(design.rows(), k, seed);
    std::vector<std::vector<int>> train_rows(k);
    for (int f = 0; f < k; ++f)
        for (int g = 0; g < k; ++g)
            if (g != f)
                train_rows[f].insert(train_rows[f].end(), folds[g].begin(), folds[g].end());

    std::vector<double> lams(grid.begin(), grid.end());
    std::sort(lams.begin(), lams.end(), std::greater<>()); // ties favor larger lambda

    double best_lambda = lams.front(), best_mae = 0;
    bool first = true;
    for (double lam : lams) {
        std::vector<double> fold_mae(k);
        for (int f = 0; f < k; ++f) {
            DesignMatrix train = subset_rows(design, train_rows[f]);
            LinearModel m = kind == Penalty::l2 ? fit_ridge(train, lam)
                                                : fit_lasso(train, lam);
            std::vector<double> pred(folds[f].size()), obs(folds[f].size());
            for (std::size_t i = 0; i < folds[f].size(); ++i) {
                pred[i] = m.predict(design.row(folds[f][i]));
                obs[i] = design.target[folds[f][i]];
            }
            fold_mae[f] = mae(pred, obs);
        }
        double score = mean(fold_mae);
        if (first || score < best_mae) {
            first = false;
            best_mae = score;
            best_lambda = lam;
        }
    }
    return best_lambda;
}

} // namespace nowcast
