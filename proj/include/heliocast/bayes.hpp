#pragma once

#include "heliocast/dataset.hpp"
#include "heliocast/stats.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace heliocast {

/// Multivariate Gaussian over the weight vector: mean plus a symmetric
/// positive-definite covariance. Construction validates both.
struct GaussianVec {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;

    GaussianVec() = default;
    GaussianVec(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

    Eigen::Index dim() const { return mean.size(); }
};

/// Bayesian linear regression with a Gaussian prior over the weights and a
/// Gaussian likelihood with noise std `s`. The posterior is conjugate:
///   post_cov  = (prior_cov^-1 + s^-2 XᵀX)^-1
///   post_mean = post_cov (prior_cov^-1 prior_mean + s^-2 Xᵀy)
struct BayesModel {
    GaussianVec prior;
    GaussianVec posterior;
    double noise_std = 1.0;
    std::vector<std::string> feature_names;
    bool intercept = true;
};

/// One predictive Gaussian per forecast timestamp.
using PredictiveDistribution = std::vector<Gaussian1D>;

/// Copula-informed prior: each slope's prior mean is the normal-score
/// correlation of feature vs. target scaled by sd(target)/sd(feature); the
/// intercept prior mean puts the prior line through the data centroid.
/// Covariance is prior_std^2 * identity. Throws on zero-variance columns.
GaussianVec build_prior(const DesignMatrix& dm, double prior_std);

/// Closed-form conjugate update. An empty design (n = 0) returns the prior
/// unchanged. Throws fit_error when the precision matrix is not numerically
/// positive definite.
GaussianVec posterior_update(const GaussianVec& prior, const DesignMatrix& dm,
                             double noise_std);

/// Convenience: build_prior + posterior_update + empirical noise default
/// (std of OLS residuals) when noise_std <= 0 is passed.
BayesModel fit_bayes(const DesignMatrix& dm, double prior_std, double noise_std = 0.0);

/// Posterior predictive at a raw feature vector: mean xᵀμ_N and variance
/// xᵀΣ_N x + s² (intercept slot implicit).
Gaussian1D predictive(const BayesModel& model, const Eigen::VectorXd& raw_features);

/// predictive() row by row, order preserved.
PredictiveDistribution forecast_series(const BayesModel& model, const Eigen::MatrixXd& rows);
PredictiveDistribution forecast_series_serial(const BayesModel& model, const Eigen::MatrixXd& rows);

} // namespace heliocast
