#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>

namespace heliocast::kernels {

// Data-parallel building blocks used by the fitting and scoring paths.
// Every kernel has a *_serial twin with identical arithmetic; reductions are
// blocked with a fixed block size and combined in block order, so the
// parallel results are bit-identical to the serial ones for any thread
// count. The unit tests assert that equality and the bench tool compares
// throughput.

inline constexpr std::size_t kBlockSize = 4096;

inline std::size_t block_count(std::size_t n) {
    return (n + kBlockSize - 1) / kBlockSize;
}

/// out-of-place elementwise map: f(i) is evaluated for i in [0, n).
template <class F>
void map_index_serial(std::size_t n, F&& f) {
    for (std::size_t i = 0; i < n; ++i) f(i);
}

template <class F>
void map_index(std::size_t n, F&& f) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        f(static_cast<std::size_t>(i));
}

/// Blocked sum of term(i) over [0, n); block partials are accumulated in
/// index order inside each block and combined in block order.
template <class F>
double sum_terms_serial(std::size_t n, F&& term) {
    const std::size_t nb = block_count(n);
    double total = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = b * kBlockSize;
        const std::size_t hi = std::min(n, lo + kBlockSize);
        double partial = 0.0;
        for (std::size_t i = lo; i < hi; ++i) partial += term(i);
        total += partial;
    }
    return total;
}

template <class F>
double sum_terms(std::size_t n, F&& term) {
    const std::size_t nb = block_count(n);
    if (nb <= 1) return sum_terms_serial(n, term);
    Eigen::VectorXd partials = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nb));
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlockSize;
        const std::size_t hi = std::min(n, lo + kBlockSize);
        double partial = 0.0;
        for (std::size_t i = lo; i < hi; ++i) partial += term(i);
        partials[b] = partial;
    }
    double total = 0.0;
    for (Eigen::Index b = 0; b < partials.size(); ++b) total += partials[b];
    return total;
}

double sum(std::span<const double> x);
double sum_serial(std::span<const double> x);

/// Accumulates the normal-equation blocks G = XᵀWX and b = XᵀWy.
/// Pass w = nullptr for unit weights. Blocked over rows, deterministic.
void weighted_gram(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   const Eigen::VectorXd* w, Eigen::MatrixXd& gram,
                   Eigen::VectorXd& rhs);
void weighted_gram_serial(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd* w, Eigen::MatrixXd& gram,
                          Eigen::VectorXd& rhs);

} // namespace heliocast::kernels
