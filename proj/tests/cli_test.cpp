// End-to-end tests that drive the installed CLI binary through temp
// directories. HELIOCAST_CLI is injected by the build.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static std::mt19937_64 rng{std::random_device{}()};
        path = fs::temp_directory_path() / ("heliocast_test_" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HELIOCAST_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

std::string q(const fs::path& p) {
    return "\"" + p.string() + "\"";
}

} // namespace

TEST_CASE("ingest: valid file reports row counts, bad rows counted") {
    TempDir dir;
    spit(dir.path / "data.csv",
         "timestamp,temp_60cm,solar_irradiance\n"
         "2021-01-01 00:00,10,100\n"
         "2021-01-01 00:15,11,110\n"
         "garbage,12,120\n"
         "2021-01-01 00:30,13,130\n");
    const int rc = run_cli("ingest --data_path " + q(dir.path / "data.csv") + " --output_dir " +
                           q(dir.path / "out"));
    CHECK(rc == 0);
    const auto report = json::parse(slurp(dir.path / "out" / "ingest_report.json"));
    CHECK(report["rows_seen"] == 4);
    CHECK(report["rows_kept"] == 3);
    CHECK(report["rows_dropped_bad_timestamp"] == 1);
    const std::string cleaned = slurp(dir.path / "out" / "cleaned.csv");
    CHECK(line_count(cleaned) == 4); // header + 3 rows
}

TEST_CASE("ingest: empty file exits 2") {
    TempDir dir;
    spit(dir.path / "empty.csv", "");
    CHECK(run_cli("ingest --data_path " + q(dir.path / "empty.csv") + " --output_dir " +
                  q(dir.path / "out")) == 2);
    spit(dir.path / "headeronly.csv", "timestamp,temp_60cm\n");
    CHECK(run_cli("ingest --data_path " + q(dir.path / "headeronly.csv") + " --output_dir " +
                  q(dir.path / "out")) == 2);
}

TEST_CASE("train/forecast/evaluate on synthetic data") {
    TempDir dir;
    const std::string common = " --data_path " + q(dir.path / "synthetic.csv") +
                               " --output_dir " + q(dir.path / "out") +
                               " --features_bayes temp_60cm --features_quantile temp_60cm" +
                               " --train_start \"2021-01-01 00:00\" --train_end \"2021-01-31 00:00\"" +
                               " --forecast_start \"2021-01-31 11:45\" --forecast_end \"2021-01-31 14:00\"";

    REQUIRE(run_cli("synth --n 3000 --seed 5 --slope 2 --intercept-value 200 --gen-noise-std 20 --out " +
                    q(dir.path / "synthetic.csv") + " --output_dir " + q(dir.path / "out")) == 0);

    SUBCASE("bayes model recovers the generating slope") {
        REQUIRE(run_cli("train --model bayes" + common) == 0);
        const auto model = json::parse(slurp(dir.path / "out" / "model_bayes.json"));
        const double slope = model["posterior"]["mean"][1].get<double>();
        CHECK(std::abs(slope - 2.0) < 0.1);
        const double intercept = model["posterior"]["mean"][0].get<double>();
        CHECK(std::abs(intercept - 200.0) < 2.0);

        SUBCASE("forecast emits the inclusive 15-minute grid with mean and std") {
            REQUIRE(run_cli("forecast --model-file " + q(dir.path / "out" / "model_bayes.json") +
                            common) == 0);
            const std::string csv = slurp(dir.path / "out" / "forecast.csv");
            CHECK(line_count(csv) == 11); // header + 10 rows (11:45 .. 14:00)
            std::istringstream lines(csv);
            std::string header, first;
            std::getline(lines, header);
            std::getline(lines, first);
            CHECK(header == "timestamp,mean,std,q_0.025,q_0.15,q_0.5,q_0.85,q_0.975");
            CHECK(first.rfind("2021-01-31 11:45,", 0) == 0);
            // mean and std populated, q columns empty
            CHECK(first.find(",,,,,") != std::string::npos);
            // clear-sky companion exists with the same grid
            CHECK(line_count(slurp(dir.path / "out" / "clearsky.csv")) == 11);
            CHECK(line_count(slurp(dir.path / "out" / "errorbars.csv")) == 11);

            SUBCASE("evaluate scores against the synthetic actuals") {
                REQUIRE(run_cli("evaluate --forecast " + q(dir.path / "out" / "forecast.csv") +
                                " --actuals " + q(dir.path / "synthetic.csv") + common) == 0);
                const auto scores = json::parse(slurp(dir.path / "out" / "scores_bayes.json"));
                CHECK(scores["n"] == 10);
                CHECK(scores["rmse"].get<double>() < 80.0);
                CHECK(scores["mean_crps"].get<double>() > 0.0);
            }
        }
    }

    SUBCASE("quantile training writes one weight vector per quantile") {
        REQUIRE(run_cli("train --model quantile --quantiles 0.15,0.5,0.85" + common) == 0);
        const auto model = json::parse(slurp(dir.path / "out" / "model_quantile.json"));
        CHECK(model["quantiles"].size() == 3);
        CHECK(model["weights"].size() == 3);
        CHECK(model["weights"]["0.5"].size() == 2);

        SUBCASE("quantile forecast populates q columns, std stays empty") {
            REQUIRE(run_cli("forecast --model-file " + q(dir.path / "out" / "model_quantile.json") +
                            common) == 0);
            std::istringstream lines(slurp(dir.path / "out" / "forecast.csv"));
            std::string header, first;
            std::getline(lines, header);
            std::getline(lines, first);
            // timestamp,mean,std -> mean and std empty for quantile forecasts
            CHECK(first.find(",,,") != std::string::npos);
            std::size_t commas = 0;
            for (char c : first)
                if (c == ',') ++commas;
            CHECK(commas == 7);
        }
    }

    SUBCASE("point training with a duplicated feature exits 3") {
        CHECK(run_cli("train --model point --features_point temp_60cm,temp_60cm" + common) == 3);
    }

    SUBCASE("evaluate with misaligned timestamps exits 4") {
        spit(dir.path / "fc.csv",
             "timestamp,mean,std,q_0.025,q_0.15,q_0.5,q_0.85,q_0.975\n"
             "2035-01-01 00:00,1.0,1.0,,,,,\n");
        CHECK(run_cli("evaluate --forecast " + q(dir.path / "fc.csv") + " --actuals " +
                      q(dir.path / "synthetic.csv") + common) == 4);
    }
}

TEST_CASE("forecast over an empty window writes just the header") {
    TempDir dir;
    REQUIRE(run_cli("synth --n 200 --seed 3 --gen-noise-std 5 --out " +
                    q(dir.path / "d.csv") + " --output_dir " + q(dir.path / "out")) == 0);
    const std::string common = " --data_path " + q(dir.path / "d.csv") + " --output_dir " +
                               q(dir.path / "out") +
                               " --train_start \"2021-01-01 00:00\" --train_end \"2021-01-01 12:00\"" +
                               " --forecast_start \"2030-01-01 00:00\" --forecast_end \"2030-01-01 01:00\"";
    REQUIRE(run_cli("train --model point --features_point temp_60cm" + common) == 0);
    REQUIRE(run_cli("forecast --model-file " + q(dir.path / "out" / "model_point.json") + common) ==
            0);
    CHECK(line_count(slurp(dir.path / "out" / "forecast.csv")) == 1);
}

TEST_CASE("evaluate a degenerate forecast equal to the actuals") {
    TempDir dir;
    std::ostringstream actuals, forecast;
    actuals << "timestamp,solar_irradiance\n";
    forecast << "timestamp,mean,std,q_0.025,q_0.15,q_0.5,q_0.85,q_0.975\n";
    for (int i = 0; i < 8; ++i) {
        const double v = 100.0 + 10.0 * i;
        const std::string ts = "2022-04-26 1" + std::to_string(i) + ":00";
        actuals << ts << ',' << v << '\n';
        forecast << ts << ",,,,," << v << ",,\n"; // only q_0.5 populated
    }
    spit(dir.path / "actuals.csv", actuals.str());
    spit(dir.path / "forecast.csv", forecast.str());
    REQUIRE(run_cli("evaluate --forecast " + q(dir.path / "forecast.csv") + " --actuals " +
                    q(dir.path / "actuals.csv") + " --output_dir " + q(dir.path / "out")) == 0);
    const auto scores = json::parse(slurp(dir.path / "out" / "scores_quantile.json"));
    CHECK(scores["rmse"].get<double>() == 0.0);
    CHECK(scores["mean_pinball"]["0.5"].get<double>() == 0.0);
    CHECK(scores["mean_crps"].get<double>() == 0.0);
}

TEST_CASE("evaluate gaussian forecasts centered on the actuals") {
    TempDir dir;
    std::ostringstream actuals, forecast;
    actuals << "timestamp,solar_irradiance\n";
    forecast << "timestamp,mean,std,q_0.025,q_0.15,q_0.5,q_0.85,q_0.975\n";
    for (int i = 0; i < 50; ++i) {
        const double v = 300.0 + i;
        const int hour = 8 + i / 4;
        const int minute = 15 * (i % 4);
        char ts[32];
        std::snprintf(ts, sizeof(ts), "2022-04-26 %02d:%02d", hour, minute);
        actuals << ts << ',' << v << '\n';
        forecast << ts << ',' << v << ",1,,,,,\n";
    }
    spit(dir.path / "actuals.csv", actuals.str());
    spit(dir.path / "forecast.csv", forecast.str());
    REQUIRE(run_cli("evaluate --forecast " + q(dir.path / "forecast.csv") + " --actuals " +
                    q(dir.path / "actuals.csv") + " --output_dir " + q(dir.path / "out")) == 0);
    const auto scores = json::parse(slurp(dir.path / "out" / "scores_bayes.json"));
    CHECK(std::abs(scores["mean_crps"].get<double>() - 0.2337) < 1e-3);
    CHECK(scores["rmse"].get<double>() == 0.0);
}

TEST_CASE("synth is reproducible and exact when noiseless") {
    TempDir dir;
    REQUIRE(run_cli("synth --n 500 --seed 11 --out " + q(dir.path / "a.csv") + " --output_dir " +
                    q(dir.path / "out")) == 0);
    REQUIRE(run_cli("synth --n 500 --seed 11 --out " + q(dir.path / "b.csv") + " --output_dir " +
                    q(dir.path / "out")) == 0);
    CHECK(slurp(dir.path / "a.csv") == slurp(dir.path / "b.csv"));

    REQUIRE(run_cli("synth --n 500 --seed 12 --out " + q(dir.path / "c.csv") + " --output_dir " +
                    q(dir.path / "out")) == 0);
    CHECK(slurp(dir.path / "a.csv") != slurp(dir.path / "c.csv"));

    REQUIRE(run_cli("synth --n 400 --seed 11 --slope 2 --intercept-value 5 --gen-noise-std 0 --out " +
                    q(dir.path / "exact.csv") + " --output_dir " + q(dir.path / "out")) == 0);
    std::istringstream in(slurp(dir.path / "exact.csv"));
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double x = std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
        const double y = std::strtod(line.substr(c2 + 1).c_str(), nullptr);
        CHECK(y == doctest::Approx(5.0 + 2.0 * x).epsilon(1e-12));
    }
}

TEST_CASE("unknown model kind is a usage error") {
    TempDir dir;
    spit(dir.path / "d.csv", "timestamp,temp_60cm,solar_irradiance\n2021-01-01 00:00,1,2\n");
    CHECK(run_cli("train --model nonsense --data_path " + q(dir.path / "d.csv") +
                  " --output_dir " + q(dir.path / "out")) == 2);
}
