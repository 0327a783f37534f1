#include "heliocast/stats.hpp"

#include "heliocast/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heliocast {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327; // 1/sqrt(2*pi)
constexpr double kSqrt2 = std::numbers::sqrt2;

// Acklam's rational approximation to the standard-normal quantile.
double norm_quantile_approx(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;

    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

} // namespace

double norm_pdf(double z) {
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / kSqrt2);
}

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("norm_quantile: p must lie strictly inside (0,1)");
    double x = norm_quantile_approx(p);
    // One Halley step against the erfc CDF.
    const double err = norm_cdf(x) - p;
    const double u = err / norm_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

Gaussian1D::Gaussian1D(double mean, double std) : mean_(mean), std_(std) {
    if (!(std > 0.0)) throw std::invalid_argument("Gaussian1D: std must be positive");
    if (!std::isfinite(mean) || !std::isfinite(std))
        throw std::invalid_argument("Gaussian1D: parameters must be finite");
}

double Gaussian1D::pdf(double x) const {
    return norm_pdf((x - mean_) / std_) / std_;
}

double Gaussian1D::cdf(double x) const {
    return norm_cdf((x - mean_) / std_);
}

double Gaussian1D::quantile(double p) const {
    return mean_ + std_ * norm_quantile(p);
}

EmpiricalCDF::EmpiricalCDF(std::vector<double> values) : sorted_(std::move(values)) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalCDF: empty data");
    for (double v : sorted_)
        if (!std::isfinite(v)) throw std::invalid_argument("EmpiricalCDF: non-finite value");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::rank(double x) const {
    const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), x);
    const auto hi = std::upper_bound(lo, sorted_.end(), x);
    const auto below = static_cast<double>(lo - sorted_.begin());
    const auto upto = static_cast<double>(hi - sorted_.begin());
    const double n = static_cast<double>(sorted_.size());
    // Average rank of the tied block, as plotting position (r - 0.5)/n;
    // off-sample points fall back to below/n, clamped inside (0,1).
    const double p = (upto > below) ? (below + upto) / (2.0 * n) : below / n;
    return std::clamp(p, 0.5 / n, 1.0 - 0.5 / n);
}

double empirical_cdf_rank(std::span<const double> data, double x) {
    return EmpiricalCDF(std::vector<double>(data.begin(), data.end())).rank(x);
}

std::vector<double> copula_normal_scores(std::span<const double> data) {
    const EmpiricalCDF ecdf(std::vector<double>(data.begin(), data.end()));
    std::vector<double> scores(data.size());
    kernels::map_index(data.size(), [&](std::size_t i) {
        scores[i] = norm_quantile(ecdf.rank(data[i]));
    });
    return scores;
}

double copula_dependence(std::span<const double> x_scores,
                         std::span<const double> y_scores) {
    return std::clamp(pearson(x_scores, y_scores), -1.0, 1.0);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("pearson: need at least 2 points");
    const double mx = mean_of(x);
    const double my = mean_of(y);
    const double sxy = kernels::sum_terms(n, [&](std::size_t i) { return (x[i] - mx) * (y[i] - my); });
    const double sxx = kernels::sum_terms(n, [&](std::size_t i) { return (x[i] - mx) * (x[i] - mx); });
    const double syy = kernels::sum_terms(n, [&](std::size_t i) { return (y[i] - my) * (y[i] - my); });
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson: zero-variance input");
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

double mean_of(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean_of: empty data");
    return kernels::sum(x) / static_cast<double>(x.size());
}

double sample_std(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("sample_std: need at least 2 points");
    const double m = mean_of(x);
    const double ss = kernels::sum_terms(x.size(), [&](std::size_t i) { return (x[i] - m) * (x[i] - m); });
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

} // namespace heliocast
