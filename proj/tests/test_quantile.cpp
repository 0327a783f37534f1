#include "heliocast/quantile_model.hpp"

#include "heliocast/errors.hpp"
#include "heliocast/linear_model.hpp"
#include "heliocast/metrics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace heliocast;

namespace {

DesignMatrix intercept_only(const std::vector<double>& targets) {
    DesignMatrix dm;
    dm.intercept = true;
    dm.feature_names = {};
    dm.features = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(targets.size()), 1);
    dm.targets = Eigen::Map<const Eigen::VectorXd>(targets.data(),
                                                   static_cast<Eigen::Index>(targets.size()));
    return dm;
}

DesignMatrix line_design(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    DesignMatrix dm;
    dm.intercept = true;
    dm.feature_names = {"x"};
    dm.features.resize(x.size(), 2);
    dm.features.col(0).setOnes();
    dm.features.col(1) = x;
    dm.targets = y;
    return dm;
}

} // namespace

TEST_CASE("median fit of exactly linear data recovers the line") {
    Eigen::VectorXd x(9);
    x << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    const Eigen::VectorXd y = 4.0 * x.array() - 7.0;
    const auto fit = fit_quantile(line_design(x, y), 0.5);
    CHECK(fit.weights[0] == doctest::Approx(-7.0).epsilon(1e-3));
    CHECK(fit.weights[1] == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("intercept-only q=0.9 on 1..100 lands at the empirical quantile") {
    std::vector<double> y(100);
    for (int i = 0; i < 100; ++i) y[static_cast<std::size_t>(i)] = i + 1.0;
    const auto fit = fit_quantile(intercept_only(y), 0.9);
    CHECK(std::abs(fit.weights[0] - 90.1) < 0.6);
}

TEST_CASE("median is robust to the outlier") {
    const auto fit = fit_quantile(intercept_only({1, 2, 3, 4, 100}), 0.5);
    CHECK(std::abs(fit.weights[0] - 3.0) < 0.1);
}

TEST_CASE("intercept-only fits track type-7 quantiles on random data") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<double> y(1000);
    for (auto& v : y) v = u(rng);
    for (double q : {0.1, 0.5, 0.9}) {
        const auto fit = fit_quantile(intercept_only(y), q);
        const double ref = oracles::quantile_type7(y, q);
        CHECK(std::abs(fit.weights[0] - ref) < 0.5);
        // the oracle value cannot have materially lower loss than the fit
        const auto dm = intercept_only(y);
        Eigen::VectorXd w0(1);
        w0 << ref;
        CHECK(fit.loss <= mean_pinball_loss(dm, q, w0) * (1.0 + 1e-6) + 1e-12);
    }
}

TEST_CASE("fitted weights beat the OLS weights on pinball loss") {
    std::mt19937_64 rng(103);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(400), y(400);
    for (Eigen::Index i = 0; i < 400; ++i) {
        x[i] = gauss(rng) * 2.0;
        y[i] = 1.0 + 0.5 * x[i] + gauss(rng) * (gauss(rng) > 0 ? 2.0 : 0.5); // asymmetric noise
    }
    const auto dm = line_design(x, y);
    const auto ols = fit_ols(dm);
    for (double q : {0.15, 0.5, 0.85}) {
        const auto fit = fit_quantile(dm, q);
        CHECK(fit.loss <= mean_pinball_loss(dm, q, ols.weights) * (1.0 + 1e-6));
    }
}

TEST_CASE("quantile set on gaussian synthetic data has calibrated bands") {
    std::mt19937_64 rng(107);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Eigen::Index n = 20000;
    Eigen::VectorXd x(n), y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x[i] = 5.0 + 2.0 * gauss(rng);
        y[i] = x[i] + gauss(rng);
    }
    const auto dm = line_design(x, y);
    const auto model = fit_quantile_set(dm, {0.025, 0.5, 0.975});

    Eigen::VectorXd at_mean(1);
    at_mean << x.mean();
    const auto bands = predict_quantiles(model, at_mean);
    const double half_width = 0.5 * (bands.at(0.975) - bands.at(0.025));
    CHECK(std::abs(half_width - 1.96) < 0.1);
    CHECK(std::abs(bands.at(0.5) - x.mean()) < 0.05);
}

TEST_CASE("paper band configuration is accepted") {
    std::mt19937_64 rng(109);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(300), y(300);
    for (Eigen::Index i = 0; i < 300; ++i) {
        x[i] = gauss(rng);
        y[i] = 2.0 * x[i] + gauss(rng);
    }
    // central 70% and 95% bands
    const auto model = fit_quantile_set(line_design(x, y), {0.15, 0.85, 0.025, 0.975});
    CHECK(model.quantiles == std::vector<double>{0.025, 0.15, 0.85, 0.975});
}

TEST_CASE("singleton quantile set equals fit_quantile") {
    std::mt19937_64 rng(113);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(120), y(120);
    for (Eigen::Index i = 0; i < 120; ++i) {
        x[i] = gauss(rng);
        y[i] = -x[i] + gauss(rng);
    }
    const auto dm = line_design(x, y);
    const auto set = fit_quantile_set(dm, {0.5});
    const auto single = fit_quantile(dm, 0.5);
    CHECK(set.weights.at(0.5) == single.weights);
}

TEST_CASE("crossed weight vectors are repaired by sorting predictions") {
    QuantileModel m;
    m.quantiles = {0.3, 0.7};
    m.feature_names = {"x"};
    m.intercept = true;
    Eigen::VectorXd w_low(2), w_high(2);
    w_low << 0.0, 2.0;  // steep line labeled q=0.3
    w_high << 1.0, 0.0; // flat line labeled q=0.7
    m.weights[0.3] = w_low;
    m.weights[0.7] = w_high;

    Eigen::VectorXd x(1);
    x << 3.0; // low line predicts 6, high line predicts 1 -> crossed
    const auto repaired = predict_quantiles(m, x);
    CHECK(repaired.at(0.3) == doctest::Approx(1.0));
    CHECK(repaired.at(0.7) == doctest::Approx(6.0));

    x << -1.0; // low line predicts -2, high 1 -> already monotone
    const auto kept = predict_quantiles(m, x);
    CHECK(kept.at(0.3) == doctest::Approx(-2.0));
    CHECK(kept.at(0.7) == doctest::Approx(1.0));
}

TEST_CASE("predictions are monotone in q for random models and inputs") {
    std::mt19937_64 rng(127);
    std::normal_distribution<double> gauss(0.0, 1.0);
    QuantileModel m;
    m.quantiles = {0.1, 0.25, 0.5, 0.75, 0.9};
    m.feature_names = {"a", "b"};
    m.intercept = true;
    for (double q : m.quantiles) {
        Eigen::VectorXd w(3);
        w << gauss(rng), gauss(rng), gauss(rng);
        m.weights[q] = w;
    }
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd x(2);
        x << gauss(rng) * 5.0, gauss(rng) * 5.0;
        const auto out = predict_quantiles(m, x);
        double prev = -std::numeric_limits<double>::infinity();
        for (double q : m.quantiles) {
            CHECK(out.at(q) >= prev);
            prev = out.at(q);
        }
    }
}

TEST_CASE("validation of quantile arguments") {
    const auto dm = intercept_only({1, 2, 3});
    CHECK_THROWS_AS(fit_quantile(dm, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fit_quantile(dm, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fit_quantile_set(dm, {}), std::invalid_argument);
    CHECK_THROWS_AS(fit_quantile_set(dm, {0.5, 0.5}), std::invalid_argument);
}
