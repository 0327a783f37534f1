#pragma once

#include "heliocast/dataset.hpp"

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace heliocast {

/// Options for the pinball-loss minimizer: iteratively reweighted least
/// squares on a smoothed |r|, annealed from a data-scale smoothing width down
/// to `epsilon`. Convergence when the relative loss change drops below
/// `loss_tol` at the final smoothing level.
struct QuantileSolverOptions {
    double epsilon = 1e-6;
    double loss_tol = 1e-8;
    int max_iterations = 500;
};

/// Linear quantile regression: one weight vector per quantile, fitted
/// independently; predictions are repaired to be nondecreasing in q.
struct QuantileModel {
    std::vector<double> quantiles;                 // sorted, strictly inside (0,1)
    std::map<double, Eigen::VectorXd> weights;     // q -> design-space weights
    std::vector<std::string> feature_names;
    bool intercept = true;
};

struct QuantileFit {
    Eigen::VectorXd weights;
    double loss = 0.0;               // mean pinball loss at the solution
    int iterations = 0;
    std::vector<double> loss_history;
};

/// Minimizes the mean pinball loss at quantile q over the design matrix.
/// Throws fit_error (carrying the loss history in the message) when the
/// iteration budget is exhausted before the loss settles.
QuantileFit fit_quantile(const DesignMatrix& dm, double q,
                         const QuantileSolverOptions& opts = {});

QuantileModel fit_quantile_set(const DesignMatrix& dm, const std::vector<double>& quantiles,
                               const QuantileSolverOptions& opts = {});

/// Per-quantile inner products against the raw feature vector, then sorted
/// so the outputs are monotone in q.
std::map<double, double> predict_quantiles(const QuantileModel& m,
                                           const Eigen::VectorXd& raw_features);

/// Mean pinball loss of given design-space weights, shared with tests.
double mean_pinball_loss(const DesignMatrix& dm, double q, const Eigen::VectorXd& weights);

} // namespace heliocast
