// Compares the OpenMP kernel paths against their serial reference twins on
// large synthetic inputs. The twins are bit-deterministic, so besides timing
// this doubles as an end-to-end equivalence check at scale.

#include "heliocast/bayes.hpp"
#include "heliocast/clearsky.hpp"
#include "heliocast/kernels.hpp"
#include "heliocast/metrics.hpp"
#include "heliocast/stats.hpp"
#include "heliocast/timestamp.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        const auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s %10.2f ms %10.2f ms   x%.2f   %s\n", name.c_str(), serial_ms,
                parallel_ms, serial_ms / parallel_ms, identical ? "bitwise-equal" : "MISMATCH");
}

} // namespace

int main() {
    const std::size_t n = 2'000'000;
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run serial code\n");
#endif
    std::printf("%-28s %13s %13s %7s\n", "kernel", "serial", "parallel", "speedup");

    // Gram accumulation, n x 3 design.
    {
        Eigen::MatrixXd x(n, 3);
        Eigen::VectorXd y(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto idx = static_cast<Eigen::Index>(i);
            x(idx, 0) = 1.0;
            x(idx, 1) = gauss(rng);
            x(idx, 2) = gauss(rng);
            y[idx] = 2.0 + x(idx, 1) - 0.5 * x(idx, 2) + gauss(rng);
        }
        Eigen::MatrixXd gs, gp;
        Eigen::VectorXd rs, rp;
        const double ts = time_best_of(3, [&] { heliocast::kernels::weighted_gram_serial(x, y, nullptr, gs, rs); });
        const double tp = time_best_of(3, [&] { heliocast::kernels::weighted_gram(x, y, nullptr, gp, rp); });
        report("weighted_gram", ts, tp, gs == gp && rs == rp);
    }

    // Posterior predictive over a long feature series.
    {
        heliocast::BayesModel model;
        model.feature_names = {"temp_60cm"};
        model.intercept = true;
        Eigen::VectorXd mean(2);
        mean << 10.0, 2.0;
        Eigen::MatrixXd cov(2, 2);
        cov << 0.5, 0.1, 0.1, 0.3;
        model.prior = heliocast::GaussianVec(mean, cov);
        model.posterior = model.prior;
        model.noise_std = 3.0;
        Eigen::MatrixXd rows(n, 1);
        for (std::size_t i = 0; i < n; ++i) rows(static_cast<Eigen::Index>(i), 0) = gauss(rng) * 8.0 + 20.0;

        heliocast::PredictiveDistribution ser, par;
        const double ts = time_best_of(3, [&] { ser = heliocast::forecast_series_serial(model, rows); });
        const double tp = time_best_of(3, [&] { par = heliocast::forecast_series(model, rows); });
        bool same = ser.size() == par.size();
        for (std::size_t i = 0; same && i < ser.size(); ++i)
            same = ser[i].mean() == par[i].mean() && ser[i].std() == par[i].std();
        report("forecast_series", ts, tp, same);
    }

    // Per-timestamp CRPS scoring.
    {
        std::vector<double> mu(n), actual(n);
        for (std::size_t i = 0; i < n; ++i) {
            mu[i] = gauss(rng);
            actual[i] = mu[i] + gauss(rng);
        }
        const auto crps_term = [&](std::size_t i) {
            return heliocast::crps_gaussian(heliocast::Gaussian1D(mu[i], 1.0), actual[i]);
        };
        double sum_s = 0, sum_p = 0;
        const double ts = time_best_of(3, [&] { sum_s = heliocast::kernels::sum_terms_serial(n, crps_term); });
        const double tp = time_best_of(3, [&] { sum_p = heliocast::kernels::sum_terms(n, crps_term); });
        report("crps_series_sum", ts, tp, sum_s == sum_p);
    }

    // Copula normal scores (rank transform; sort is serial, map is parallel).
    {
        std::vector<double> data(n);
        for (auto& v : data) v = gauss(rng);
        std::vector<double> ser, par;
        const heliocast::EmpiricalCDF ecdf(data);
        const double ts = time_best_of(3, [&] {
            ser.assign(n, 0.0);
            heliocast::kernels::map_index_serial(n, [&](std::size_t i) {
                ser[i] = heliocast::norm_quantile(ecdf.rank(data[i]));
            });
        });
        const double tp = time_best_of(3, [&] { par = heliocast::copula_normal_scores(data); });
        report("copula_normal_scores", ts, tp, ser == par);
    }

    // Clear-sky series over four years of 15-minute steps.
    {
        const heliocast::SiteLocation site(28.5, -81.4, -5.0);
        const auto start = heliocast::parse_timestamp("2021-01-01 00:00");
        const auto end = heliocast::parse_timestamp("2024-12-31 23:45");
        std::vector<heliocast::ClearSkyPoint> ser, par;
        const double ts = time_best_of(3, [&] { ser = heliocast::clear_sky_series_serial(site, *start, *end, 3.0); });
        const double tp = time_best_of(3, [&] { par = heliocast::clear_sky_series(site, *start, *end, 3.0); });
        bool same = ser.size() == par.size();
        for (std::size_t i = 0; same && i < ser.size(); ++i)
            same = ser[i].ghi == par[i].ghi && ser[i].dni == par[i].dni &&
                   ser[i].zenith_deg == par[i].zenith_deg;
        report("clear_sky_series", ts, tp, same);
    }

    return 0;
}
