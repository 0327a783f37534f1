#pragma once

#include "heliocast/stats.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace heliocast {

/// Scores for one evaluated forecast series. Absent entries mean the score
/// is undefined for the method (no density for quantile forecasts, etc.).
struct ScoreReport {
    std::string method_name;
    std::size_t n = 0;
    std::optional<double> rmse;
    std::optional<double> mean_logs;
    std::optional<double> mean_crps;
    std::map<double, double> mean_pinball; // quantile -> mean loss
};

/// Root-mean-squared error over aligned series.
double rmse(std::span<const double> actual, std::span<const double> predicted);

/// -ln(pdf value); 0 maps to +infinity. Negative densities are a domain error.
double log_score(double pdf_value);

/// CRPS by adaptive Simpson quadrature of (F(x) - H(x - actual))² over
/// [lo, hi], split at the Heaviside step (H(x) = 1 for x >= 0). Throws when
/// more than 1e-4 of probability mass lies outside the bracket or the actual
/// is outside it.
double crps_numeric(const std::function<double(double)>& cdf, double actual,
                    double lo, double hi, double tol = 1e-6);

/// Closed form for a Gaussian forecast:
///   sigma * [z(2Phi(z) - 1) + 2phi(z) - 1/sqrt(pi)], z = (actual - mean)/sigma.
double crps_gaussian(const Gaussian1D& g, double actual);

/// Pinball loss, standard convention: under-prediction (predicted <= actual)
/// is weighted q, over-prediction (1 - q).
double pinball(double q, double predicted_q, double actual);

/// CRPS of a quantile forecast, scored as the discrete distribution that
/// puts trapezoidal probability weight on each predicted quantile value:
///   sum_i w_i |v_i - actual|  -  1/2 sum_ij w_i w_j |v_i - v_j|.
double crps_from_quantiles(const std::map<double, double>& quantile_values, double actual);

/// Scores a Gaussian forecast series: RMSE of the means, mean log score,
/// analytic mean CRPS, and mean pinball at each requested quantile (the
/// q = 0.5 prediction is the predictive mean; other quantiles come from the
/// predictive Gaussian).
ScoreReport score_gaussian_series(std::span<const Gaussian1D> forecasts,
                                  std::span<const double> actuals,
                                  std::span<const double> pinball_quantiles,
                                  std::string method_name);

/// Scores a quantile forecast series: mean pinball per fitted quantile, mean
/// CRPS via the discrete-quantile form, and RMSE against the median when
/// q = 0.5 is present. Log score stays absent (no density).
ScoreReport score_quantile_series(std::span<const std::map<double, double>> forecasts,
                                  std::span<const double> actuals,
                                  std::string method_name);

/// Scores a point forecast series: RMSE only.
ScoreReport score_point_series(std::span<const double> predictions,
                               std::span<const double> actuals,
                               std::string method_name);

} // namespace heliocast
