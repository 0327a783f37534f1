#pragma once

#include "heliocast/dataset.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace heliocast {

/// Ordinary least-squares point forecaster. `weights[0]` is the intercept
/// weight when `intercept` is set; the remaining entries follow
/// `feature_names` order.
struct LinearModel {
    Eigen::VectorXd weights;
    std::vector<std::string> feature_names;
    bool intercept = true;
};

/// Solves the normal equations on the Gram matrix (Cholesky/LDLT after a
/// spectral condition guard). Throws fit_error when the Gram matrix has an
/// eigenvalue ratio above 1e12, naming the columns implicated in the
/// near-null space.
LinearModel fit_ols(const DesignMatrix& dm);

/// Inner product of the weights with the raw feature vector; the intercept
/// slot, when present, is implicitly 1.
double predict_point(const LinearModel& m, const Eigen::VectorXd& raw_features);

/// Fitted values over raw feature rows (one column per feature).
Eigen::VectorXd predict_point_rows(const LinearModel& m, const Eigen::MatrixXd& rows);

/// Residual standard deviation of the fit on its training design, the
/// empirical default for the Bayesian noise std.
double residual_std(const LinearModel& m, const DesignMatrix& dm);

} // namespace heliocast
