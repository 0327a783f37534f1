#pragma once

// Independent reference implementations used as test oracles. Everything
// here is deliberately written from the textbook definitions (no Eigen, no
// library kernels) so agreement with the implementation is meaningful.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace oracles {

/// Solves A x = b by Gaussian elimination with partial pivoting.
std::vector<double> solve_gaussian_elimination(std::vector<std::vector<double>> a,
                                               std::vector<double> b);

/// Normal-equations least squares: solves (XᵀX) w = Xᵀy with the
/// elimination solver above. `x` is row-major n x m.
std::vector<double> least_squares(const std::vector<std::vector<double>>& x,
                                  const std::vector<double>& y);

/// Type-7 empirical quantile (linear interpolation between order statistics).
double quantile_type7(std::vector<double> values, double q);

/// Textbook Pearson correlation.
double pearson(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> x);
double sample_std(std::span<const double> x);

/// Composite-Simpson integration on a fixed grid (n panels, n even).
double simpson(double lo, double hi, std::size_t panels, const std::function<double(double)>& f);

} // namespace oracles
