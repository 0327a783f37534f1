#include "heliocast/bayes.hpp"

#include "heliocast/errors.hpp"
#include "heliocast/kernels.hpp"
#include "heliocast/linear_model.hpp"

#include <cmath>
#include <sstream>

namespace heliocast {
namespace {

constexpr double kSymmetryTol = 1e-10;

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) {
    return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a, const char* what) {
    const Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(a));
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(a));
        std::ostringstream msg;
        msg << what << ": matrix not positive definite (eigenvalue range "
            << eig.eigenvalues()[0] << " .. " << eig.eigenvalues()[a.rows() - 1] << ")";
        throw fit_error(msg.str());
    }
    return symmetrize(llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols())));
}

Eigen::VectorXd design_row(const BayesModel& model, const Eigen::VectorXd& raw) {
    const auto k = static_cast<Eigen::Index>(model.feature_names.size());
    if (raw.size() != k)
        throw std::invalid_argument("predictive: feature dimension mismatch");
    Eigen::VectorXd x(model.posterior.dim());
    Eigen::Index col = 0;
    if (model.intercept) x[col++] = 1.0;
    for (Eigen::Index j = 0; j < k; ++j) x[col++] = raw[j];
    return x;
}

} // namespace

GaussianVec::GaussianVec(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in)
    : mean(std::move(mean_in)), covariance(std::move(cov_in)) {
    if (covariance.rows() != covariance.cols() || covariance.rows() != mean.size())
        throw std::invalid_argument("GaussianVec: shape mismatch");
    const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
        throw std::invalid_argument("GaussianVec: covariance not symmetric");
    const Eigen::LLT<Eigen::MatrixXd> llt(covariance);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("GaussianVec: covariance not positive definite");
}

GaussianVec build_prior(const DesignMatrix& dm, double prior_std) {
    if (!(prior_std > 0.0)) throw std::invalid_argument("build_prior: prior_std must be positive");
    const auto n = static_cast<std::size_t>(dm.n());
    const auto k = static_cast<Eigen::Index>(dm.feature_names.size());
    const Eigen::Index offset = dm.intercept ? 1 : 0;

    std::vector<double> y(dm.targets.data(), dm.targets.data() + dm.n());
    const double sd_y = sample_std(y);
    if (sd_y == 0.0) throw data_error("build_prior: zero-variance target");
    const std::vector<double> y_scores = copula_normal_scores(y);

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dm.m());
    for (Eigen::Index j = 0; j < k; ++j) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = dm.features(static_cast<Eigen::Index>(i), offset + j);
        const double sd_x = sample_std(x);
        if (sd_x == 0.0)
            throw data_error("build_prior: zero-variance feature '" +
                             dm.feature_names[static_cast<std::size_t>(j)] + "'");
        const std::vector<double> x_scores = copula_normal_scores(x);
        const double rho = copula_dependence(x_scores, y_scores);
        mean[offset + j] = rho * sd_y / sd_x;
    }
    if (dm.intercept) {
        double centroid = mean_of(y);
        for (Eigen::Index j = 0; j < k; ++j) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i)
                x[i] = dm.features(static_cast<Eigen::Index>(i), offset + j);
            centroid -= mean[offset + j] * mean_of(x);
        }
        mean[0] = centroid;
    }

    const Eigen::MatrixXd cov =
        prior_std * prior_std * Eigen::MatrixXd::Identity(dm.m(), dm.m());
    return {std::move(mean), cov};
}

GaussianVec posterior_update(const GaussianVec& prior, const DesignMatrix& dm,
                             double noise_std) {
    if (!(noise_std > 0.0))
        throw std::invalid_argument("posterior_update: noise_std must be positive");
    if (dm.m() != prior.dim())
        throw std::invalid_argument("posterior_update: prior/design dimension mismatch");
    if (dm.n() == 0) return prior; // no data: the update is the identity

    Eigen::MatrixXd gram;
    Eigen::VectorXd xty;
    kernels::weighted_gram(dm.features, dm.targets, nullptr, gram, xty);

    const double inv_s2 = 1.0 / (noise_std * noise_std);
    const Eigen::MatrixXd prior_precision = spd_inverse(prior.covariance, "posterior_update(prior)");
    const Eigen::MatrixXd precision = symmetrize(prior_precision + inv_s2 * gram);
    const Eigen::MatrixXd cov = spd_inverse(precision, "posterior_update");

    GaussianVec post;
    post.covariance = cov;
    post.mean = cov * (prior_precision * prior.mean + inv_s2 * xty);
    return post;
}

BayesModel fit_bayes(const DesignMatrix& dm, double prior_std, double noise_std) {
    BayesModel model;
    model.feature_names = dm.feature_names;
    model.intercept = dm.intercept;
    model.prior = build_prior(dm, prior_std);
    if (noise_std > 0.0) {
        model.noise_std = noise_std;
    } else {
        const LinearModel ols = fit_ols(dm);
        model.noise_std = residual_std(ols, dm);
        if (!(model.noise_std > 0.0)) model.noise_std = 1e-6; // perfectly linear data
    }
    model.posterior = posterior_update(model.prior, dm, model.noise_std);
    return model;
}

Gaussian1D predictive(const BayesModel& model, const Eigen::VectorXd& raw_features) {
    const Eigen::VectorXd x = design_row(model, raw_features);
    const double mean = x.dot(model.posterior.mean);
    const double quad = std::max(0.0, x.dot(model.posterior.covariance * x));
    const double var = quad + model.noise_std * model.noise_std;
    return {mean, std::sqrt(var)};
}

namespace {

// No exception may escape the parallel region, so shapes are checked before
// the map runs.
void check_rows(const BayesModel& model, const Eigen::MatrixXd& rows) {
    if (rows.rows() > 0 && rows.cols() != static_cast<Eigen::Index>(model.feature_names.size()))
        throw std::invalid_argument("forecast_series: feature dimension mismatch at row 0");
}

} // namespace

PredictiveDistribution forecast_series(const BayesModel& model, const Eigen::MatrixXd& rows) {
    check_rows(model, rows);
    PredictiveDistribution out(static_cast<std::size_t>(rows.rows()), Gaussian1D(0.0, 1.0));
    kernels::map_index(static_cast<std::size_t>(rows.rows()), [&](std::size_t i) {
        out[i] = predictive(model, rows.row(static_cast<Eigen::Index>(i)).transpose());
    });
    return out;
}

PredictiveDistribution forecast_series_serial(const BayesModel& model,
                                              const Eigen::MatrixXd& rows) {
    check_rows(model, rows);
    PredictiveDistribution out(static_cast<std::size_t>(rows.rows()), Gaussian1D(0.0, 1.0));
    kernels::map_index_serial(static_cast<std::size_t>(rows.rows()), [&](std::size_t i) {
        out[i] = predictive(model, rows.row(static_cast<Eigen::Index>(i)).transpose());
    });
    return out;
}

} // namespace heliocast
