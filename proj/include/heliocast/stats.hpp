#pragma once

#include <span>
#include <vector>

namespace heliocast {

/// Standard-normal density, CDF and inverse CDF. The inverse is a rational
/// approximation polished with one Halley step against the erfc-based CDF,
/// giving |cdf(quantile(p)) - p| at machine precision.
double norm_pdf(double z);
double norm_cdf(double z);
double norm_quantile(double p); // throws std::domain_error outside (0,1)

/// Univariate Gaussian with strictly positive standard deviation.
class Gaussian1D {
public:
    Gaussian1D(double mean, double std); // throws std::invalid_argument if std <= 0

    double mean() const { return mean_; }
    double std() const { return std_; }

    double pdf(double x) const;
    double cdf(double x) const;
    double quantile(double p) const;

private:
    double mean_;
    double std_;
};

/// Empirical CDF with plotting-position ranks (r - 0.5)/n and average ranks
/// for ties; evaluations are clamped into [0.5/n, 1 - 0.5/n] so they never
/// reach 0 or 1.
class EmpiricalCDF {
public:
    explicit EmpiricalCDF(std::vector<double> values); // throws on empty input

    double rank(double x) const;
    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted_values() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

double empirical_cdf_rank(std::span<const double> data, double x);

/// Gaussian-copula marginal transform: each value is replaced by the
/// standard-normal quantile of its plotting-position rank. Rank-only, so any
/// strictly monotone transform of the input yields identical scores.
std::vector<double> copula_normal_scores(std::span<const double> data);

/// Pearson correlation of two normal-score vectors; the copula's dependence
/// parameter. Result is clamped into [-1, 1].
double copula_dependence(std::span<const double> x_scores,
                         std::span<const double> y_scores);

/// Plain Pearson correlation (used by the ingest correlation report).
double pearson(std::span<const double> x, std::span<const double> y);

double mean_of(std::span<const double> x);
double sample_std(std::span<const double> x); // n-1 denominator

} // namespace heliocast
