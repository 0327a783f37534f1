#include "heliocast/metrics.hpp"

#include "heliocast/errors.hpp"
#include "heliocast/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace heliocast {
namespace {

constexpr double kInvSqrtPi = 0.5641895835477563; // 1/sqrt(pi)
constexpr double kBracketMassTol = 1e-4;
constexpr int kMaxSimpsonDepth = 52;

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa,
                        double b, double fb, double m, double fm, double whole,
                        double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = simpson(f, a, fa, b, fb, m, fm);
    return adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, kMaxSimpsonDepth);
}

void check_aligned(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw alignment_error(std::string(what) + ": length mismatch");
    if (a == 0) throw alignment_error(std::string(what) + ": empty series");
}

} // namespace

double rmse(std::span<const double> actual, std::span<const double> predicted) {
    check_aligned(actual.size(), predicted.size(), "rmse");
    const double ss = kernels::sum_terms(actual.size(), [&](std::size_t i) {
        const double d = actual[i] - predicted[i];
        return d * d;
    });
    return std::sqrt(ss / static_cast<double>(actual.size()));
}

double log_score(double pdf_value) {
    if (pdf_value < 0.0) throw std::domain_error("log_score: negative density");
    if (pdf_value == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(pdf_value);
}

double crps_numeric(const std::function<double(double)>& cdf, double actual,
                    double lo, double hi, double tol) {
    if (!(lo < actual && actual < hi))
        throw std::invalid_argument("crps_numeric: actual outside integration bracket");
    if (cdf(lo) > kBracketMassTol || 1.0 - cdf(hi) > kBracketMassTol)
        throw std::invalid_argument("crps_numeric: bracket leaves > 1e-4 tail mass outside");

    // Left of the observation the reference CDF is 0, right of it 1; split
    // there so the quadrature never straddles the step.
    const auto below = [&](double x) {
        const double F = cdf(x);
        return F * F;
    };
    const auto above = [&](double x) {
        const double F = cdf(x) - 1.0;
        return F * F;
    };
    return integrate(below, lo, actual, 0.5 * tol) + integrate(above, actual, hi, 0.5 * tol);
}

double crps_gaussian(const Gaussian1D& g, double actual) {
    const double z = (actual - g.mean()) / g.std();
    return g.std() * (z * (2.0 * norm_cdf(z) - 1.0) + 2.0 * norm_pdf(z) - kInvSqrtPi);
}

double pinball(double q, double predicted_q, double actual) {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("pinball: q must lie strictly inside (0,1)");
    return predicted_q <= actual ? q * (actual - predicted_q)
                                 : (1.0 - q) * (predicted_q - actual);
}

double crps_from_quantiles(const std::map<double, double>& quantile_values, double actual) {
    if (quantile_values.empty())
        throw std::invalid_argument("crps_from_quantiles: empty quantile set");
    std::vector<double> tau, v;
    for (const auto& [q, value] : quantile_values) {
        tau.push_back(q);
        v.push_back(value);
    }
    const std::size_t k = tau.size();
    std::vector<double> w(k);
    if (k == 1) {
        w[0] = 1.0;
    } else {
        w[0] = 0.5 * (tau[0] + tau[1]);
        w[k - 1] = 1.0 - 0.5 * (tau[k - 2] + tau[k - 1]);
        for (std::size_t j = 1; j + 1 < k; ++j) w[j] = 0.5 * (tau[j + 1] - tau[j - 1]);
    }
    double first = 0.0;
    for (std::size_t j = 0; j < k; ++j) first += w[j] * std::abs(v[j] - actual);
    double second = 0.0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) second += w[a] * w[b] * std::abs(v[a] - v[b]);
    return first - 0.5 * second;
}

ScoreReport score_gaussian_series(std::span<const Gaussian1D> forecasts,
                                  std::span<const double> actuals,
                                  std::span<const double> pinball_quantiles,
                                  std::string method_name) {
    check_aligned(forecasts.size(), actuals.size(), "score_gaussian_series");
    for (double q : pinball_quantiles)
        if (!(q > 0.0 && q < 1.0))
            throw std::domain_error("score_gaussian_series: quantile outside (0,1)");
    const std::size_t n = forecasts.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    ScoreReport report;
    report.method_name = std::move(method_name);
    report.n = n;
    report.rmse = std::sqrt(kernels::sum_terms(n, [&](std::size_t i) {
                                const double d = actuals[i] - forecasts[i].mean();
                                return d * d;
                            }) *
                            inv_n);
    report.mean_crps = kernels::sum_terms(n, [&](std::size_t i) {
                           return crps_gaussian(forecasts[i], actuals[i]);
                       }) *
                       inv_n;
    report.mean_logs = kernels::sum_terms(n, [&](std::size_t i) {
                           return log_score(forecasts[i].pdf(actuals[i]));
                       }) *
                       inv_n;
    for (double q : pinball_quantiles) {
        // The median of the predictive Gaussian is its mean; other quantiles
        // come from the predictive distribution itself.
        const double total = kernels::sum_terms(n, [&](std::size_t i) {
            const double pred = (q == 0.5) ? forecasts[i].mean() : forecasts[i].quantile(q);
            return pinball(q, pred, actuals[i]);
        });
        report.mean_pinball[q] = total * inv_n;
    }
    return report;
}

ScoreReport score_quantile_series(std::span<const std::map<double, double>> forecasts,
                                  std::span<const double> actuals,
                                  std::string method_name) {
    check_aligned(forecasts.size(), actuals.size(), "score_quantile_series");
    const std::size_t n = forecasts.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    ScoreReport report;
    report.method_name = std::move(method_name);
    report.n = n;
    report.mean_crps = kernels::sum_terms(n, [&](std::size_t i) {
                           return crps_from_quantiles(forecasts[i], actuals[i]);
                       }) *
                       inv_n;
    for (const auto& [q, unused] : forecasts[0]) {
        (void)unused;
        report.mean_pinball[q] = kernels::sum_terms(n, [&](std::size_t i) {
                                     return pinball(q, forecasts[i].at(q), actuals[i]);
                                 }) *
                                 inv_n;
    }
    if (forecasts[0].contains(0.5)) {
        report.rmse = std::sqrt(kernels::sum_terms(n, [&](std::size_t i) {
                                    const double d = actuals[i] - forecasts[i].at(0.5);
                                    return d * d;
                                }) *
                                inv_n);
    }
    return report;
}

ScoreReport score_point_series(std::span<const double> predictions,
                               std::span<const double> actuals,
                               std::string method_name) {
    ScoreReport report;
    report.method_name = std::move(method_name);
    report.n = actuals.size();
    report.rmse = rmse(actuals, predictions);
    return report;
}

} // namespace heliocast
