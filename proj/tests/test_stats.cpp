#include "heliocast/stats.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace heliocast;

TEST_CASE("gaussian pdf values") {
    const Gaussian1D std_normal(0.0, 1.0);
    CHECK(std_normal.pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-9));
    CHECK(std::abs(std_normal.pdf(1.645) - 0.1031) < 1e-4);
    const Gaussian1D g(5.0, 2.0);
    CHECK(g.pdf(5.0) == doctest::Approx(0.1994711402).epsilon(1e-9));
}

TEST_CASE("gaussian pdf integrates to one over +-8 sigma") {
    const Gaussian1D g(3.0, 1.7);
    const double integral = oracles::simpson(
        g.mean() - 8.0 * g.std(), g.mean() + 8.0 * g.std(), 4096,
        [&](double x) { return g.pdf(x); });
    CHECK(std::abs(integral - 1.0) < 1e-6);
}

TEST_CASE("gaussian cdf values and symmetry") {
    const Gaussian1D g(0.0, 1.0);
    CHECK(g.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(g.cdf(1.645) - 0.95) < 5e-4);
    CHECK(std::abs(g.cdf(-1.645) - 0.05) < 5e-4);
    for (double d : {0.3, 1.1, 2.7}) CHECK(g.cdf(d) + g.cdf(-d) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gaussian quantile values") {
    const Gaussian1D g(0.0, 1.0);
    CHECK(std::abs(g.quantile(0.95) - 1.645) < 1e-3);
    CHECK(g.quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    const Gaussian1D h(10.0, 3.0);
    CHECK(std::abs(h.quantile(0.95) - 14.935) < 3e-3);
    CHECK_THROWS_AS(g.quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(g.quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(g.quantile(-0.5), std::domain_error);
}

TEST_CASE("quantile inverts cdf at 1e-9") {
    for (double p = 1e-6; p < 1.0 - 1e-6; p += 0.000997) {
        const double x = norm_quantile(p);
        CHECK(std::abs(norm_cdf(x) - p) < 1e-9);
    }
    // round trip in value space for |z| <= 4
    for (double z = -4.0; z <= 4.0; z += 0.01)
        CHECK(std::abs(norm_quantile(norm_cdf(z)) - z) < 1e-6);
}

TEST_CASE("gaussian constructor rejects bad parameters") {
    CHECK_THROWS_AS(Gaussian1D(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Gaussian1D(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("empirical cdf plotting positions") {
    const std::vector<double> data{1, 2, 3, 4, 5};
    CHECK(empirical_cdf_rank(data, 3.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(empirical_cdf_rank(data, 5.0) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(empirical_cdf_rank(std::vector<double>{7.0}, 7.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(EmpiricalCDF(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("empirical cdf never reaches 0 or 1 and ties average") {
    const std::vector<double> data{2, 2, 2, 5, 9};
    const EmpiricalCDF ecdf(data);
    CHECK(ecdf.rank(-100.0) > 0.0);
    CHECK(ecdf.rank(100.0) < 1.0);
    // tied block 2,2,2 has ranks 1..3, average 2 -> (2 - 0.5)/5
    CHECK(ecdf.rank(2.0) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("copula normal scores anchor the 95th percentile at 1.645") {
    std::mt19937_64 rng(11);
    std::lognormal_distribution<double> skewed(0.0, 0.7);
    std::vector<double> data(10000);
    for (auto& v : data) v = skewed(rng);
    const auto scores = copula_normal_scores(data);

    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return data[a] < data[b]; });
    const double z95 = scores[order[9499]]; // rank 9500 of 10000
    CHECK(std::abs(z95 - 1.645) < 0.01);

    // sample moments of the scores
    CHECK(std::abs(oracles::mean(scores)) < 0.05);
    CHECK(std::abs(oracles::sample_std(scores) - 1.0) < 0.05);
}

TEST_CASE("copula normal scores: median maps to zero") {
    const std::vector<double> data{3, 1, 4, 1.5, 9}; // odd n, distinct median
    const auto scores = copula_normal_scores(data);
    CHECK(std::abs(scores[0]) < 1e-9); // 3 is the median
}

TEST_CASE("copula scores invariant under strictly monotone transforms") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> data(500), exp_data(500);
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = gauss(rng);
        exp_data[i] = std::exp(data[i]);
    }
    const auto s1 = copula_normal_scores(data);
    const auto s2 = copula_normal_scores(exp_data);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i] == s2[i]);
}

TEST_CASE("copula dependence endpoints and independence") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(10000), y(10000), neg(10000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = gauss(rng);
        y[i] = gauss(rng);
        neg[i] = -x[i];
    }
    const auto xs = copula_normal_scores(x);
    CHECK(copula_dependence(xs, xs) == doctest::Approx(1.0).epsilon(1e-12));
    const auto ns = copula_normal_scores(neg);
    CHECK(copula_dependence(xs, ns) == doctest::Approx(-1.0).epsilon(1e-9));
    const auto ys = copula_normal_scores(y);
    CHECK(std::abs(copula_dependence(xs, ys)) < 0.05);
}

TEST_CASE("copula dependence invariant under monotone marginal transforms") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(800), y(800), x2(800), y2(800);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = gauss(rng);
        y[i] = 0.6 * x[i] + 0.8 * gauss(rng);
        x2[i] = std::exp(x[i]);          // monotone transform of x
        y2[i] = y[i] * y[i] * y[i] + y[i]; // monotone transform of y
    }
    const double rho = copula_dependence(copula_normal_scores(x), copula_normal_scores(y));
    const double rho2 = copula_dependence(copula_normal_scores(x2), copula_normal_scores(y2));
    CHECK(rho == doctest::Approx(rho2).epsilon(1e-12));
}

TEST_CASE("copula dependence error paths") {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{1, 2};
    const std::vector<double> c{0.5};
    const std::vector<double> flat{1, 1, 1};
    CHECK_THROWS_AS(copula_dependence(a, b), std::invalid_argument);
    CHECK_THROWS_AS(copula_dependence(c, c), std::invalid_argument);
    CHECK_THROWS_AS(copula_dependence(a, flat), std::invalid_argument);
}

TEST_CASE("pearson agrees with the textbook formula") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(5000), y(5000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = gauss(rng);
        y[i] = 2.0 * x[i] + gauss(rng);
    }
    CHECK(pearson(x, y) == doctest::Approx(oracles::pearson(x, y)).epsilon(1e-12));
}
