#include "heliocast/quantile_model.hpp"

#include "heliocast/errors.hpp"
#include "heliocast/kernels.hpp"
#include "heliocast/linear_model.hpp"
#include "heliocast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heliocast {
namespace {

void validate_quantile(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("quantile must lie strictly inside (0,1)");
}

} // namespace

double mean_pinball_loss(const DesignMatrix& dm, double q, const Eigen::VectorXd& weights) {
    const Eigen::VectorXd fitted = dm.features * weights;
    const auto n = static_cast<std::size_t>(dm.n());
    const double total = kernels::sum_terms(n, [&](std::size_t i) {
        const auto idx = static_cast<Eigen::Index>(i);
        return pinball(q, fitted[idx], dm.targets[idx]);
    });
    return total / static_cast<double>(n);
}

QuantileFit fit_quantile(const DesignMatrix& dm, double q, const QuantileSolverOptions& opts) {
    validate_quantile(q);
    if (dm.n() < dm.m()) throw data_error("fit_quantile: fewer rows than columns");

    // OLS start; from there reweighted least squares on the smoothed loss,
    // shrinking the smoothing width once the loss settles at each level.
    QuantileFit fit;
    fit.weights = fit_ols(dm).weights;
    fit.loss = mean_pinball_loss(dm, q, fit.weights);
    fit.loss_history.push_back(fit.loss);

    const double scale = std::max(1e-12, (dm.targets - dm.features * fit.weights).norm() /
                                             std::sqrt(static_cast<double>(dm.n())));
    double eps = std::max(opts.epsilon, scale);
    const auto n = dm.n();

    Eigen::VectorXd w(n);
    Eigen::MatrixXd gram;
    Eigen::VectorXd rhs;
    double level_loss = fit.loss;
    while (fit.iterations < opts.max_iterations) {
        const Eigen::VectorXd resid = dm.targets - dm.features * fit.weights;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = resid[i];
            const double c = r >= 0.0 ? q : 1.0 - q;
            w[i] = c / std::sqrt(r * r + eps * eps);
        }
        kernels::weighted_gram(dm.features, dm.targets, &w, gram, rhs);
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        if (ldlt.info() != Eigen::Success)
            throw fit_error("fit_quantile: reweighted normal equations not solvable");
        fit.weights = ldlt.solve(rhs);
        ++fit.iterations;

        const double loss = mean_pinball_loss(dm, q, fit.weights);
        fit.loss_history.push_back(loss);
        const double change = std::abs(loss - level_loss) / std::max(1.0, std::abs(level_loss));
        level_loss = loss;
        if (change < opts.loss_tol) {
            if (eps <= opts.epsilon) {
                fit.loss = loss;
                return fit;
            }
            eps = std::max(opts.epsilon, eps * 0.1);
        }
    }

    std::ostringstream msg;
    msg << "fit_quantile: no convergence after " << fit.iterations
        << " iterations at q=" << q << "; loss history:";
    for (std::size_t i = fit.loss_history.size() > 8 ? fit.loss_history.size() - 8 : 0;
         i < fit.loss_history.size(); ++i)
        msg << ' ' << fit.loss_history[i];
    throw fit_error(msg.str());
}

QuantileModel fit_quantile_set(const DesignMatrix& dm, const std::vector<double>& quantiles,
                               const QuantileSolverOptions& opts) {
    if (quantiles.empty()) throw std::invalid_argument("fit_quantile_set: empty quantile list");
    std::vector<double> qs = quantiles;
    std::sort(qs.begin(), qs.end());
    for (double q : qs) validate_quantile(q);
    if (std::adjacent_find(qs.begin(), qs.end()) != qs.end())
        throw std::invalid_argument("fit_quantile_set: duplicate quantiles");

    QuantileModel model;
    model.quantiles = qs;
    model.feature_names = dm.feature_names;
    model.intercept = dm.intercept;
    for (double q : qs) {
        try {
            model.weights[q] = fit_quantile(dm, q, opts).weights;
        } catch (const fit_error& e) {
            throw fit_error("q=" + std::to_string(q) + ": " + e.what());
        }
    }
    return model;
}

std::map<double, double> predict_quantiles(const QuantileModel& m,
                                           const Eigen::VectorXd& raw_features) {
    const auto k = static_cast<Eigen::Index>(m.feature_names.size());
    if (raw_features.size() != k)
        throw std::invalid_argument("predict_quantiles: feature dimension mismatch");

    std::vector<double> values;
    values.reserve(m.quantiles.size());
    for (double q : m.quantiles) {
        const Eigen::VectorXd& w = m.weights.at(q);
        double y = m.intercept ? w[0] : 0.0;
        const Eigen::Index offset = m.intercept ? 1 : 0;
        for (Eigen::Index j = 0; j < k; ++j) y += w[offset + j] * raw_features[j];
        values.push_back(y);
    }
    // Non-crossing repair: sorted values are reassigned to ascending q.
    std::sort(values.begin(), values.end());
    std::map<double, double> out;
    for (std::size_t i = 0; i < m.quantiles.size(); ++i) out[m.quantiles[i]] = values[i];
    return out;
}

} // namespace heliocast
