#pragma once

#include "nowcast/design.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace nowcast {

enum class Penalty { l1, l2 };

// Penalized linear regression fitted on standardized features (population
// std), intercept unpenalized. Raw-scale coefficients are derived at fit
// time; predicting through either path gives identical results.
struct LinearModel {
    Penalty penalty = Penalty::l2;
    double lambda = 0.0;
    double intercept = 0.0;              // standardized space (= mean of y)
    std::vector<double> coef;            // standardized scale
    double raw_intercept = 0.0;
    std::vector<double> raw_coef;
    std::vector<double> feature_mean, feature_std;
    bool converged = true;
    int sweeps = 0;

    double predict(std::span<const double> row) const;              // raw path
    double predict_standardized(std::span<const double> row) const; // standardize-then-dot
};

// Objective (1/(2N))*sum (y - yhat)^2 + (lambda/2)*|beta|^2, solved by the
// normal equations with lambda*N added to the Gram diagonal.
LinearModel fit_ridge(const DesignMatrix& design, double lambda);

double soft_threshold(double z, double gamma);

// Objective (1/(2N))*sum (y - yhat)^2 + lambda*|beta|_1 by cyclic coordinate
// descent; non-convergence sets the flag rather than throwing.
LinearModel fit_lasso(const DesignMatrix& design, double lambda, double tol = 1e-8,
                      int max_sweeps = 10000);

// Smallest lambda that zeroes every Lasso coefficient.
double lasso_lambda_max(const DesignMatrix& design);

// count log-spaced values from lambda_max down to lambda_max*ratio.
std::vector<double> lambda_grid(const DesignMatrix& design, int count = 50, double ratio = 1e-4);

// Grid value minimizing mean k-fold MAE; exact ties go to the larger lambda.
double cv_lambda(const DesignMatrix& design, Penalty kind, std::span<const double> grid,
                 int k = 10, std::uint64_t seed = 0);

} // namespace nowcast
