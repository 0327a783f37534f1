// heliocast: batch pipeline over 15-minute weather-station CSV data.
// Subcommands: ingest, train, forecast, evaluate, synth.

#include "heliocast/bayes.hpp"
#include "heliocast/clearsky.hpp"
#include "heliocast/dataset.hpp"
#include "heliocast/errors.hpp"
#include "heliocast/linear_model.hpp"
#include "heliocast/metrics.hpp"
#include "heliocast/model_io.hpp"
#include "heliocast/quantile_model.hpp"
#include "heliocast/stats.hpp"
#include "heliocast/timestamp.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using heliocast::Timestamp;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitFit = 3;
constexpr int kExitAlignment = 4;

struct RunConfig {
    std::string data_path;
    std::string station_id;
    heliocast::ColumnSchema schema;
    std::string target = "solar_irradiance";
    std::vector<std::string> features_point{"temp_2cm", "temp_10cm", "temp_60cm",
                                            "wind_speed", "wind_direction"};
    std::vector<std::string> features_quantile{"temp_60cm"};
    std::vector<std::string> features_bayes{"temp_60cm"};
    bool intercept = true;
    std::string train_start = "2021-01-01 00:00";
    std::string train_end = "2022-04-25 23:45";
    std::string forecast_start = "2022-04-26 11:45";
    std::string forecast_end = "2022-04-26 14:00";
    std::vector<double> quantiles{0.025, 0.15, 0.5, 0.85, 0.975};
    double prior_std = 1.0;
    double noise_std = 0.0; // <= 0 means empirical (OLS residual std)
    bool daylight_filter = false;
    bool clamp_nonnegative = false;
    double site_latitude = 28.5;
    double site_longitude = -81.4;
    double site_utc_offset = -4.0;
    double turbidity = 3.0;
    double error_bar_k = 1.0;
    std::string output_dir = "out";
    unsigned long long seed = 1;
};

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        out.push_back(std::strtod(cell.c_str(), nullptr));
    }
    return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty()) out.push_back(cell);
    }
    return out;
}

void apply_json_config(RunConfig& cfg, const json& j) {
    const auto get_str = [&](const char* key, std::string& into) {
        if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<std::string>();
    };
    const auto get_num = [&](const char* key, double& into) {
        if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<double>();
    };
    const auto get_bool = [&](const char* key, bool& into) {
        if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<bool>();
    };
    const auto get_strings = [&](const char* key, std::vector<std::string>& into) {
        if (j.contains(key) && !j.at(key).is_null())
            into = j.at(key).get<std::vector<std::string>>();
    };

    get_str("data_path", cfg.data_path);
    get_str("station_id", cfg.station_id);
    if (j.contains("schema") && j.at("schema").is_object())
        for (const auto& [src, canon] : j.at("schema").items())
            cfg.schema[src] = canon.get<std::string>();
    get_str("target", cfg.target);
    get_strings("features_point", cfg.features_point);
    get_strings("features_quantile", cfg.features_quantile);
    get_strings("features_bayes", cfg.features_bayes);
    get_bool("intercept", cfg.intercept);
    get_str("train_start", cfg.train_start);
    get_str("train_end", cfg.train_end);
    get_str("forecast_start", cfg.forecast_start);
    get_str("forecast_end", cfg.forecast_end);
    if (j.contains("quantiles") && !j.at("quantiles").is_null())
        cfg.quantiles = j.at("quantiles").get<std::vector<double>>();
    get_num("prior_std", cfg.prior_std);
    if (j.contains("noise_std") && !j.at("noise_std").is_null())
        cfg.noise_std = j.at("noise_std").get<double>();
    get_bool("daylight_filter", cfg.daylight_filter);
    get_bool("clamp_nonnegative", cfg.clamp_nonnegative);
    if (j.contains("site") && j.at("site").is_object()) {
        const auto& s = j.at("site");
        if (s.contains("latitude")) cfg.site_latitude = s.at("latitude").get<double>();
        if (s.contains("longitude")) cfg.site_longitude = s.at("longitude").get<double>();
        if (s.contains("utc_offset")) cfg.site_utc_offset = s.at("utc_offset").get<double>();
    }
    get_num("turbidity", cfg.turbidity);
    get_num("error_bar_k", cfg.error_bar_k);
    get_str("output_dir", cfg.output_dir);
    if (j.contains("seed") && !j.at("seed").is_null())
        cfg.seed = j.at("seed").get<unsigned long long>();
}

Timestamp need_timestamp(const std::string& text, const char* what) {
    const auto t = heliocast::parse_timestamp(text);
    if (!t) throw heliocast::data_error(std::string(what) + ": bad timestamp '" + text + "'");
    return *t;
}

heliocast::Dataset load_dataset(const RunConfig& cfg) {
    if (cfg.data_path.empty()) throw heliocast::data_error("config: data_path not set");
    std::ifstream in(cfg.data_path);
    if (!in) throw heliocast::data_error("cannot open data file '" + cfg.data_path + "'");
    auto result = heliocast::parse_csv(in, cfg.schema, cfg.station_id);
    return std::move(result.dataset);
}

heliocast::Field need_field(const std::string& name) {
    const auto f = heliocast::field_from_name(name);
    if (!f) throw heliocast::data_error("unknown field '" + name + "'");
    return *f;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw heliocast::data_error("cannot write '" + path.string() + "'");
    return out;
}

void check_windows(const RunConfig& cfg) {
    const Timestamp te = need_timestamp(cfg.train_end, "train_end");
    const Timestamp fs_ = need_timestamp(cfg.forecast_start, "forecast_start");
    if (!(fs_ > te))
        throw heliocast::data_error("config: forecast window must start after train_end");
}

// ---------------------------------------------------------------- commands

int cmd_ingest(const RunConfig& cfg, const std::string& out_override) {
    std::ifstream in(cfg.data_path);
    if (!in) throw heliocast::data_error("cannot open data file '" + cfg.data_path + "'");
    const auto result = heliocast::parse_csv(in, cfg.schema, cfg.station_id);

    const fs::path out_path =
        out_override.empty() ? fs::path(cfg.output_dir) / "cleaned.csv" : fs::path(out_override);
    auto out = open_out(out_path);
    heliocast::serialize_csv(out, result.dataset);

    const auto& r = result.report;
    std::ostringstream report;
    report << "{\"rows_seen\": " << r.rows_seen << ", \"rows_kept\": " << r.rows_kept
           << ", \"rows_dropped_bad_timestamp\": " << r.rows_dropped_bad_timestamp
           << ", \"duplicate_timestamps\": " << r.duplicate_timestamps
           << ", \"cells_rejected\": " << r.cells_rejected << "}\n";
    auto report_out = open_out(fs::path(cfg.output_dir) / "ingest_report.json");
    report_out << report.str();
    std::cout << report.str();
    return kExitOk;
}

heliocast::DesignMatrix training_design(const RunConfig& cfg,
                                        const std::vector<std::string>& features) {
    auto data = load_dataset(cfg);
    auto window = heliocast::select_window(data, need_timestamp(cfg.train_start, "train_start"),
                                           need_timestamp(cfg.train_end, "train_end"));
    const auto target = need_field(cfg.target);
    if (cfg.daylight_filter) window = heliocast::filter_positive(window, target);
    return heliocast::build_design(window, features, target, cfg.intercept);
}

int cmd_train(const RunConfig& cfg, const std::string& model_kind,
              const std::string& out_override) {
    fs::path out_path = out_override.empty()
                            ? fs::path(cfg.output_dir) / ("model_" + model_kind + ".json")
                            : fs::path(out_override);

    if (model_kind == "point") {
        const auto dm = training_design(cfg, cfg.features_point);
        const auto model = heliocast::fit_ols(dm);
        auto out = open_out(out_path);
        heliocast::save_linear_model(out, model);
        std::cout << "trained point model on " << dm.n() << " rows (dropped "
                  << dm.dropped_rows << ")\n";
    } else if (model_kind == "quantile") {
        const auto dm = training_design(cfg, cfg.features_quantile);
        const auto model = heliocast::fit_quantile_set(dm, cfg.quantiles);
        auto out = open_out(out_path);
        heliocast::save_quantile_model(out, model);
        std::cout << "trained quantile model on " << dm.n() << " rows, "
                  << model.quantiles.size() << " quantiles\n";
    } else if (model_kind == "bayes") {
        const auto dm = training_design(cfg, cfg.features_bayes);
        const auto model = heliocast::fit_bayes(dm, cfg.prior_std, cfg.noise_std);
        auto out = open_out(out_path);
        heliocast::save_bayes_model(out, model);
        std::cout << "trained bayes model on " << dm.n() << " rows (noise_std "
                  << model.noise_std << ")\n";
    } else {
        throw heliocast::data_error("unknown model kind '" + model_kind + "'");
    }
    return kExitOk;
}

int cmd_forecast(const RunConfig& cfg, const std::string& model_path,
                 const std::string& out_override) {
    check_windows(cfg);
    const Timestamp start = need_timestamp(cfg.forecast_start, "forecast_start");
    const Timestamp end = need_timestamp(cfg.forecast_end, "forecast_end");

    heliocast::ModelKind kind;
    {
        std::ifstream peek(model_path);
        if (!peek) throw heliocast::data_error("cannot open model file '" + model_path + "'");
        kind = heliocast::peek_model_kind(peek);
    }
    std::ifstream model_in(model_path);

    const auto data = load_dataset(cfg);
    const auto window = heliocast::select_window(data, start, end);

    std::vector<heliocast::ForecastRecord> records;
    const auto clamp = [&](double v) { return cfg.clamp_nonnegative ? std::max(0.0, v) : v; };

    if (kind == heliocast::ModelKind::point) {
        const auto model = heliocast::load_linear_model(model_in);
        const auto rows = heliocast::collect_features(window, model.feature_names);
        const Eigen::VectorXd pred = heliocast::predict_point_rows(model, rows.features);
        for (std::size_t i = 0; i < rows.times.size(); ++i) {
            heliocast::ForecastRecord rec;
            rec.t = rows.times[i];
            rec.mean = clamp(pred[static_cast<Eigen::Index>(i)]);
            records.push_back(rec);
        }
    } else if (kind == heliocast::ModelKind::quantile) {
        const auto model = heliocast::load_quantile_model(model_in);
        const auto rows = heliocast::collect_features(window, model.feature_names);
        for (std::size_t i = 0; i < rows.times.size(); ++i) {
            heliocast::ForecastRecord rec;
            rec.t = rows.times[i];
            const auto q_values = heliocast::predict_quantiles(
                model, rows.features.row(static_cast<Eigen::Index>(i)).transpose());
            for (const auto& [q, v] : q_values) rec.quantiles[q] = clamp(v);
            records.push_back(rec);
        }
    } else {
        const auto model = heliocast::load_bayes_model(model_in);
        const auto rows = heliocast::collect_features(window, model.feature_names);
        const auto series = heliocast::forecast_series(model, rows.features);
        for (std::size_t i = 0; i < rows.times.size(); ++i) {
            heliocast::ForecastRecord rec;
            rec.t = rows.times[i];
            rec.mean = clamp(series[i].mean());
            rec.std = series[i].std();
            records.push_back(rec);
        }
    }

    const fs::path out_path =
        out_override.empty() ? fs::path(cfg.output_dir) / "forecast.csv" : fs::path(out_override);
    auto out = open_out(out_path);
    heliocast::write_forecast_csv(out, records);

    // Plot-data companions: clear-sky baseline over the window, and error
    // bars (mean +- k*std) for Gaussian forecasts.
    const heliocast::SiteLocation site(cfg.site_latitude, cfg.site_longitude,
                                       cfg.site_utc_offset);
    const auto sky = heliocast::clear_sky_series(site, start, end, cfg.turbidity);
    auto sky_out = open_out(fs::path(cfg.output_dir) / "clearsky.csv");
    sky_out << "timestamp,zenith_deg,ghi_wm2,dni_wm2\n";
    char buf[160];
    for (const auto& p : sky) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n",
                      heliocast::format_timestamp(p.t).c_str(), p.zenith_deg, p.ghi, p.dni);
        sky_out << buf;
    }
    if (kind == heliocast::ModelKind::bayes) {
        auto bars = open_out(fs::path(cfg.output_dir) / "errorbars.csv");
        bars << "timestamp,mean,lo,hi\n";
        for (const auto& rec : records) {
            const double m = *rec.mean;
            const double half = cfg.error_bar_k * *rec.std;
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n",
                          heliocast::format_timestamp(rec.t).c_str(), m, m - half, m + half);
            bars << buf;
        }
    }

    std::cout << "forecast rows: " << records.size() << "\n";
    return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& forecast_path,
                 const std::string& actuals_path, const std::string& out_override) {
    std::ifstream fin(forecast_path);
    if (!fin) throw heliocast::data_error("cannot open forecast file '" + forecast_path + "'");
    const auto records = heliocast::read_forecast_csv(fin);
    if (records.empty()) throw heliocast::data_error("evaluate: forecast file has no rows");

    std::ifstream ain(actuals_path);
    if (!ain) throw heliocast::data_error("cannot open actuals file '" + actuals_path + "'");
    const auto actuals_data = heliocast::parse_csv(ain, cfg.schema, cfg.station_id).dataset;
    const auto target = need_field(cfg.target);

    std::map<std::int64_t, double> actual_by_time;
    for (const auto& r : actuals_data.records)
        if (r[target]) actual_by_time[r.t.minutes] = *r[target];

    std::vector<double> actuals;
    for (const auto& rec : records) {
        const auto it = actual_by_time.find(rec.t.minutes);
        if (it == actual_by_time.end())
            throw heliocast::alignment_error("evaluate: no actual for timestamp " +
                                             heliocast::format_timestamp(rec.t));
        actuals.push_back(it->second);
    }

    const bool has_std = records.front().std.has_value();
    const bool has_quantiles = !records.front().quantiles.empty();
    heliocast::ScoreReport report;
    if (has_std) {
        std::vector<heliocast::Gaussian1D> forecasts;
        forecasts.reserve(records.size());
        for (const auto& rec : records) {
            if (!rec.mean || !rec.std)
                throw heliocast::data_error("evaluate: Gaussian forecast rows need mean and std");
            forecasts.emplace_back(*rec.mean, *rec.std);
        }
        report = heliocast::score_gaussian_series(forecasts, actuals, cfg.quantiles, "bayes");
    } else if (has_quantiles) {
        std::vector<std::map<double, double>> forecasts;
        forecasts.reserve(records.size());
        for (const auto& rec : records) {
            if (rec.quantiles.empty())
                throw heliocast::data_error("evaluate: quantile forecast rows need q columns");
            forecasts.push_back(rec.quantiles);
        }
        report = heliocast::score_quantile_series(forecasts, actuals, "quantile");
    } else {
        std::vector<double> predictions;
        predictions.reserve(records.size());
        for (const auto& rec : records) {
            if (!rec.mean) throw heliocast::data_error("evaluate: point forecast rows need mean");
            predictions.push_back(*rec.mean);
        }
        report = heliocast::score_point_series(predictions, actuals, "point");
    }

    const fs::path base = out_override.empty()
                              ? fs::path(cfg.output_dir) / ("scores_" + report.method_name)
                              : fs::path(out_override);
    auto js = open_out(fs::path(base.string() + ".json"));
    heliocast::write_score_json(js, report);
    auto cs = open_out(fs::path(base.string() + ".csv"));
    heliocast::write_score_csv(cs, report);
    heliocast::write_score_csv(std::cout, report);
    return kExitOk;
}

int cmd_synth(const RunConfig& cfg, double slope, double intercept, double noise_std,
              long long n, unsigned long long seed, const std::string& out_override) {
    if (n <= 0) throw heliocast::data_error("synth: n must be positive");
    if (noise_std < 0) throw heliocast::data_error("synth: noise_std must be nonnegative");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> feature(0.0, 30.0);
    std::normal_distribution<double> noise(0.0, 1.0);

    const Timestamp t0 = need_timestamp("2021-01-01 00:00", "synth");
    const fs::path out_path = out_override.empty()
                                  ? fs::path(cfg.output_dir) / "synthetic.csv"
                                  : fs::path(out_override);
    auto out = open_out(out_path);
    out << "timestamp,temp_60cm,solar_irradiance\n";
    char buf[128];
    for (long long i = 0; i < n; ++i) {
        const double x = feature(rng);
        const double eps = noise_std > 0.0 ? noise_std * noise(rng) : 0.0;
        const double y = intercept + slope * x + eps;
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g\n",
                      heliocast::format_timestamp(t0 + i * heliocast::kStepMinutes).c_str(), x, y);
        out << buf;
    }
    std::cout << "wrote " << n << " synthetic rows to " << out_path.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"heliocast: probabilistic solar-irradiance forecasting over station CSV data"};
    app.require_subcommand(1);

    std::string config_path;
    RunConfig cfg;

    // Flags shared by every subcommand; each mirrors a config field.
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration");
        cmd->add_option("--data_path", cfg.data_path, "input CSV path");
        cmd->add_option("--station_id", cfg.station_id, "station identifier");
        cmd->add_option("--target", cfg.target, "target field name");
        cmd->add_option_function<std::string>(
            "--schema",
            [&cfg](const std::string& text) {
                const json j = json::parse(text);
                for (const auto& [src, canon] : j.items())
                    cfg.schema[src] = canon.get<std::string>();
            },
            "schema map as inline JSON, source column -> canonical name");
        cmd->add_option_function<std::string>(
            "--features_point",
            [&cfg](const std::string& v) { cfg.features_point = parse_string_list(v); },
            "comma-separated feature list");
        cmd->add_option_function<std::string>(
            "--features_quantile",
            [&cfg](const std::string& v) { cfg.features_quantile = parse_string_list(v); },
            "comma-separated feature list");
        cmd->add_option_function<std::string>(
            "--features_bayes",
            [&cfg](const std::string& v) { cfg.features_bayes = parse_string_list(v); },
            "comma-separated feature list");
        cmd->add_flag("--intercept,!--no-intercept", cfg.intercept, "fit an intercept column");
        cmd->add_option("--train_start", cfg.train_start, "train window start (YYYY-MM-DD HH:MM)");
        cmd->add_option("--train_end", cfg.train_end, "train window end");
        cmd->add_option("--forecast_start", cfg.forecast_start, "forecast window start");
        cmd->add_option("--forecast_end", cfg.forecast_end, "forecast window end");
        cmd->add_option_function<std::string>(
            "--quantiles",
            [&cfg](const std::string& v) { cfg.quantiles = parse_double_list(v); },
            "comma-separated quantile list");
        cmd->add_option("--prior_std", cfg.prior_std, "prior std of the weight distribution");
        cmd->add_option("--noise_std", cfg.noise_std,
                        "likelihood noise std (<= 0: use OLS residual std)");
        cmd->add_flag("--daylight_filter", cfg.daylight_filter,
                      "train only on rows with positive target");
        cmd->add_flag("--clamp_nonnegative", cfg.clamp_nonnegative,
                      "clamp emitted forecasts at zero");
        cmd->add_option("--site.latitude", cfg.site_latitude, "site latitude, degrees");
        cmd->add_option("--site.longitude", cfg.site_longitude,
                        "site longitude, degrees east");
        cmd->add_option("--site.utc_offset", cfg.site_utc_offset, "local clock offset, hours");
        cmd->add_option("--turbidity", cfg.turbidity, "clear-sky turbidity [1,10]");
        cmd->add_option("--error_bar_k", cfg.error_bar_k, "error-bar half width in stds");
        cmd->add_option("--output_dir", cfg.output_dir, "output directory");
        cmd->add_option("--seed", cfg.seed, "RNG seed");
    };

    std::string out_override;
    std::string model_kind;
    std::string model_path;
    std::string forecast_path;
    std::string actuals_path;
    double synth_slope = 2.0;
    double synth_intercept = 200.0;
    double synth_noise = 25.0;
    long long synth_n = 1000;

    auto* ingest = app.add_subcommand("ingest", "parse, clean and re-emit the dataset");
    add_common(ingest);
    ingest->add_option("--out", out_override, "cleaned CSV path");

    auto* train = app.add_subcommand("train", "fit a model over the train window");
    add_common(train);
    train->add_option("--model", model_kind, "point|quantile|bayes")->required();
    train->add_option("--out", out_override, "model JSON path");

    auto* forecast = app.add_subcommand("forecast", "predict over the forecast window");
    add_common(forecast);
    forecast->add_option("--model-file", model_path, "trained model JSON")->required();
    forecast->add_option("--out", out_override, "forecast CSV path");

    auto* evaluate = app.add_subcommand("evaluate", "score a forecast CSV against actuals");
    add_common(evaluate);
    evaluate->add_option("--forecast", forecast_path, "forecast CSV")->required();
    evaluate->add_option("--actuals", actuals_path, "actuals CSV")->required();
    evaluate->add_option("--out", out_override, "report path prefix");

    auto* synth = app.add_subcommand("synth", "generate a seeded linear-Gaussian dataset");
    add_common(synth);
    synth->add_option("--slope", synth_slope, "generating slope");
    synth->add_option("--intercept-value", synth_intercept, "generating intercept");
    synth->add_option("--gen-noise-std", synth_noise, "generating noise std");
    synth->add_option("--n", synth_n, "row count");
    synth->add_option("--out", out_override, "dataset CSV path");

    // First pass so --config is known before field flags override it.
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config '" << config_path << "'\n";
            return kExitData;
        }
        RunConfig from_file;
        try {
            apply_json_config(from_file, json::parse(in));
        } catch (const json::exception& e) {
            std::cerr << "error: bad config JSON: " << e.what() << "\n";
            return kExitData;
        }
        // Re-parse so command-line flags win over config-file values.
        cfg = from_file;
        try {
            app.clear();
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            return app.exit(e);
        }
    }

    try {
        if (ingest->parsed()) return cmd_ingest(cfg, out_override);
        if (train->parsed()) return cmd_train(cfg, model_kind, out_override);
        if (forecast->parsed()) return cmd_forecast(cfg, model_path, out_override);
        if (evaluate->parsed())
            return cmd_evaluate(cfg, forecast_path, actuals_path, out_override);
        if (synth->parsed())
            return cmd_synth(cfg, synth_slope, synth_intercept, synth_noise, synth_n, cfg.seed,
                             out_override);
    } catch (const heliocast::data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const heliocast::fit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFit;
    } catch (const heliocast::alignment_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAlignment;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
