#include "heliocast/kernels.hpp"

#include <stdexcept>
#include <vector>

namespace heliocast::kernels {
namespace {

void gram_block(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                const Eigen::VectorXd* w, std::size_t lo, std::size_t hi,
                Eigen::MatrixXd& gram, Eigen::VectorXd& rhs) {
    const Eigen::Index m = x.cols();
    for (std::size_t r = lo; r < hi; ++r) {
        const auto i = static_cast<Eigen::Index>(r);
        const double wi = w ? (*w)[i] : 1.0;
        for (Eigen::Index a = 0; a < m; ++a) {
            const double xa = x(i, a) * wi;
            rhs[a] += xa * y[i];
            for (Eigen::Index b = a; b < m; ++b) gram(a, b) += xa * x(i, b);
        }
    }
}

void mirror_lower(Eigen::MatrixXd& gram) {
    for (Eigen::Index a = 0; a < gram.rows(); ++a)
        for (Eigen::Index b = 0; b < a; ++b) gram(a, b) = gram(b, a);
}

void check_shapes(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  const Eigen::VectorXd* w) {
    if (x.rows() != y.size()) throw std::invalid_argument("weighted_gram: row/target size mismatch");
    if (w && w->size() != x.rows()) throw std::invalid_argument("weighted_gram: weight size mismatch");
}

// Both gram variants build one partial per block and combine the partials in
// block order, so their rounding sequences are identical.
void gram_blocked(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  const Eigen::VectorXd* w, Eigen::MatrixXd& gram,
                  Eigen::VectorXd& rhs, bool parallel) {
    check_shapes(x, y, w);
    const Eigen::Index m = x.cols();
    const auto n = static_cast<std::size_t>(x.rows());
    const std::size_t nb = block_count(n);

    std::vector<Eigen::MatrixXd> gpart(nb, Eigen::MatrixXd::Zero(m, m));
    std::vector<Eigen::VectorXd> rpart(nb, Eigen::VectorXd::Zero(m));
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < static_cast<long long>(nb); ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * kBlockSize;
            const std::size_t hi = std::min(n, lo + kBlockSize);
            gram_block(x, y, w, lo, hi, gpart[static_cast<std::size_t>(b)],
                       rpart[static_cast<std::size_t>(b)]);
        }
    } else {
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t lo = b * kBlockSize;
            const std::size_t hi = std::min(n, lo + kBlockSize);
            gram_block(x, y, w, lo, hi, gpart[b], rpart[b]);
        }
    }

    gram = Eigen::MatrixXd::Zero(m, m);
    rhs = Eigen::VectorXd::Zero(m);
    for (std::size_t b = 0; b < nb; ++b) {
        gram += gpart[b];
        rhs += rpart[b];
    }
    mirror_lower(gram);
}

} // namespace

double sum_serial(std::span<const double> x) {
    return sum_terms_serial(x.size(), [&](std::size_t i) { return x[i]; });
}

double sum(std::span<const double> x) {
    return sum_terms(x.size(), [&](std::size_t i) { return x[i]; });
}

void weighted_gram_serial(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd* w, Eigen::MatrixXd& gram,
                          Eigen::VectorXd& rhs) {
    gram_blocked(x, y, w, gram, rhs, /*parallel=*/false);
}

void weighted_gram(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   const Eigen::VectorXd* w, Eigen::MatrixXd& gram,
                   Eigen::VectorXd& rhs) {
    gram_blocked(x, y, w, gram, rhs, /*parallel=*/true);
}

} // namespace heliocast::kernels
