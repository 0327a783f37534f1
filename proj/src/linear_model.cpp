#include "heliocast/linear_model.hpp"

#include "heliocast/errors.hpp"
#include "heliocast/kernels.hpp"

#include <cmath>
#include <sstream>

namespace heliocast {
namespace {

constexpr double kMaxCondition = 1e12;

std::string column_label(const DesignMatrix& dm, Eigen::Index col) {
    if (dm.intercept) {
        if (col == 0) return "(intercept)";
        return dm.feature_names[static_cast<std::size_t>(col - 1)];
    }
    return dm.feature_names[static_cast<std::size_t>(col)];
}

} // namespace

LinearModel fit_ols(const DesignMatrix& dm) {
    if (dm.n() < dm.m())
        throw data_error("fit_ols: fewer rows than columns");

    Eigen::MatrixXd gram;
    Eigen::VectorXd rhs;
    kernels::weighted_gram(dm.features, dm.targets, nullptr, gram, rhs);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success)
        throw fit_error("fit_ols: eigendecomposition of the Gram matrix failed");
    const auto& vals = eig.eigenvalues();
    const double lmax = vals[vals.size() - 1];
    const double lmin = vals[0];
    if (!(lmin > 0.0) || lmax / lmin > kMaxCondition) {
        // Columns loading on the near-null eigenvector are the culprits.
        const Eigen::VectorXd null_dir = eig.eigenvectors().col(0).cwiseAbs();
        const double top = null_dir.maxCoeff();
        std::ostringstream msg;
        msg << "fit_ols: singular fit (condition estimate "
            << (lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity())
            << "); offending columns:";
        for (Eigen::Index c = 0; c < null_dir.size(); ++c)
            if (null_dir[c] >= 0.5 * top) msg << ' ' << column_label(dm, c);
        throw fit_error(msg.str());
    }

    LinearModel model;
    model.feature_names = dm.feature_names;
    model.intercept = dm.intercept;
    // Solve through the spectral factorization already in hand.
    model.weights = eig.eigenvectors() *
                    (eig.eigenvectors().transpose() * rhs).cwiseQuotient(vals).matrix();
    return model;
}

double predict_point(const LinearModel& m, const Eigen::VectorXd& raw_features) {
    const auto expected = static_cast<Eigen::Index>(m.feature_names.size());
    if (raw_features.size() != expected)
        throw std::invalid_argument("predict_point: feature dimension mismatch");
    double y = m.intercept ? m.weights[0] : 0.0;
    const Eigen::Index offset = m.intercept ? 1 : 0;
    for (Eigen::Index j = 0; j < expected; ++j) y += m.weights[offset + j] * raw_features[j];
    return y;
}

Eigen::VectorXd predict_point_rows(const LinearModel& m, const Eigen::MatrixXd& rows) {
    if (rows.cols() != static_cast<Eigen::Index>(m.feature_names.size()))
        throw std::invalid_argument("predict_point_rows: feature dimension mismatch");
    Eigen::VectorXd out(rows.rows());
    kernels::map_index(static_cast<std::size_t>(rows.rows()), [&](std::size_t i) {
        out[static_cast<Eigen::Index>(i)] =
            predict_point(m, rows.row(static_cast<Eigen::Index>(i)).transpose());
    });
    return out;
}

double residual_std(const LinearModel& m, const DesignMatrix& dm) {
    const Eigen::VectorXd fitted = dm.features * m.weights;
    const Eigen::VectorXd r = dm.targets - fitted;
    const double ss = kernels::sum_terms(static_cast<std::size_t>(r.size()), [&](std::size_t i) {
        const double v = r[static_cast<Eigen::Index>(i)];
        return v * v;
    });
    const auto n = static_cast<double>(r.size());
    return std::sqrt(ss / std::max(1.0, n - static_cast<double>(dm.m())));
}

} // namespace heliocast
