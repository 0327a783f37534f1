#include "heliocast/model_io.hpp"

#include "heliocast/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace heliocast {
namespace {

using nlohmann::json;

std::string f17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out;
}

void write_string_array(std::ostream& out, const std::vector<std::string>& v) {
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i)
        out << (i ? "," : "") << '"' << escape(v[i]) << '"';
    out << ']';
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
    out << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << f17(v[i]);
    out << ']';
}

void write_matrix_row_major(std::ostream& out, const Eigen::MatrixXd& m) {
    out << '[';
    bool first = true;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (!first) out << ',';
            out << f17(m(r, c));
            first = false;
        }
    out << ']';
}

json parse_json(std::istream& in, const char* what) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw data_error(std::string(what) + ": malformed JSON (" + e.what() + ")");
    }
    return j;
}

Eigen::VectorXd to_vector(const json& arr, const char* what) {
    if (!arr.is_array()) throw data_error(std::string(what) + ": expected array");
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

std::vector<std::string> to_names(const json& arr, const char* what) {
    if (!arr.is_array()) throw data_error(std::string(what) + ": expected name array");
    std::vector<std::string> out;
    for (const auto& e : arr) out.push_back(e.get<std::string>());
    return out;
}

} // namespace

const std::vector<double> kForecastColumns{0.025, 0.15, 0.5, 0.85, 0.975};

std::string format_shortest(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return f17(v);
}

void save_linear_model(std::ostream& out, const LinearModel& m) {
    out << "{\"feature_names\": ";
    write_string_array(out, m.feature_names);
    out << ", \"weights\": ";
    write_vector(out, m.weights);
    out << ", \"intercept\": " << (m.intercept ? "true" : "false") << "}\n";
}

LinearModel load_linear_model(std::istream& in) {
    const json j = parse_json(in, "linear model");
    LinearModel m;
    m.feature_names = to_names(j.at("feature_names"), "linear model");
    m.weights = to_vector(j.at("weights"), "linear model");
    m.intercept = j.at("intercept").get<bool>();
    const auto expected =
        static_cast<Eigen::Index>(m.feature_names.size()) + (m.intercept ? 1 : 0);
    if (m.weights.size() != expected)
        throw data_error("linear model: weight count does not match features");
    return m;
}

void save_quantile_model(std::ostream& out, const QuantileModel& m) {
    out << "{\"feature_names\": ";
    write_string_array(out, m.feature_names);
    out << ", \"quantiles\": [";
    for (std::size_t i = 0; i < m.quantiles.size(); ++i)
        out << (i ? "," : "") << format_shortest(m.quantiles[i]);
    out << "], \"weights\": {";
    bool first = true;
    for (double q : m.quantiles) {
        if (!first) out << ", ";
        out << '"' << format_shortest(q) << "\": ";
        write_vector(out, m.weights.at(q));
        first = false;
    }
    out << "}}\n";
}

QuantileModel load_quantile_model(std::istream& in) {
    const json j = parse_json(in, "quantile model");
    QuantileModel m;
    m.feature_names = to_names(j.at("feature_names"), "quantile model");
    for (const auto& q : j.at("quantiles")) m.quantiles.push_back(q.get<double>());
    for (const auto& [key, arr] : j.at("weights").items())
        m.weights[std::strtod(key.c_str(), nullptr)] = to_vector(arr, "quantile model");
    if (m.quantiles.empty() || m.weights.size() != m.quantiles.size())
        throw data_error("quantile model: quantile/weight mismatch");
    const auto wlen = m.weights.begin()->second.size();
    m.intercept = wlen == static_cast<Eigen::Index>(m.feature_names.size()) + 1;
    for (double q : m.quantiles)
        if (!m.weights.contains(q) || m.weights.at(q).size() != wlen)
            throw data_error("quantile model: inconsistent weight vectors");
    return m;
}

void save_bayes_model(std::ostream& out, const BayesModel& m) {
    out << "{\"prior\": {\"mean\": ";
    write_vector(out, m.prior.mean);
    out << ", \"cov\": ";
    write_matrix_row_major(out, m.prior.covariance);
    out << "}, \"posterior\": {\"mean\": ";
    write_vector(out, m.posterior.mean);
    out << ", \"cov\": ";
    write_matrix_row_major(out, m.posterior.covariance);
    out << "}, \"noise_std\": " << f17(m.noise_std) << ", \"feature_names\": ";
    write_string_array(out, m.feature_names);
    out << "}\n";
}

BayesModel load_bayes_model(std::istream& in) {
    const json j = parse_json(in, "bayes model");
    const auto read_gaussian = [](const json& node) {
        const Eigen::VectorXd mean = to_vector(node.at("mean"), "bayes model");
        const Eigen::VectorXd flat = to_vector(node.at("cov"), "bayes model");
        const auto d = mean.size();
        if (flat.size() != d * d) throw data_error("bayes model: covariance size mismatch");
        Eigen::MatrixXd cov(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c) cov(r, c) = flat[r * d + c];
        return GaussianVec(mean, cov);
    };
    BayesModel m;
    m.prior = read_gaussian(j.at("prior"));
    m.posterior = read_gaussian(j.at("posterior"));
    m.noise_std = j.at("noise_std").get<double>();
    m.feature_names = to_names(j.at("feature_names"), "bayes model");
    m.intercept =
        m.posterior.dim() == static_cast<Eigen::Index>(m.feature_names.size()) + 1;
    if (!(m.noise_std > 0.0)) throw data_error("bayes model: noise_std must be positive");
    return m;
}

ModelKind peek_model_kind(std::istream& in) {
    const json j = parse_json(in, "model file");
    if (j.contains("posterior")) return ModelKind::bayes;
    if (j.contains("quantiles")) return ModelKind::quantile;
    if (j.contains("weights")) return ModelKind::point;
    throw data_error("model file: unrecognized model JSON");
}

void write_forecast_csv(std::ostream& out, const std::vector<ForecastRecord>& records) {
    out << "timestamp,mean,std";
    for (double q : kForecastColumns) out << ",q_" << format_shortest(q);
    out << '\n';
    for (const auto& rec : records) {
        out << format_timestamp(rec.t) << ',';
        if (rec.mean) out << f17(*rec.mean);
        out << ',';
        if (rec.std) out << f17(*rec.std);
        for (double q : kForecastColumns) {
            out << ',';
            const auto it = rec.quantiles.find(q);
            if (it != rec.quantiles.end()) out << f17(it->second);
        }
        out << '\n';
    }
}

std::vector<ForecastRecord> read_forecast_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw data_error("forecast CSV: missing header");

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            header.push_back(cell);
        }
    }
    if (header.empty() || header[0] != "timestamp")
        throw data_error("forecast CSV: first column must be 'timestamp'");

    std::vector<ForecastRecord> records;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur.push_back(c);
            }
        }
        cells.push_back(cur);

        ForecastRecord rec;
        const auto ts = parse_timestamp(cells[0]);
        if (!ts) throw data_error("forecast CSV: bad timestamp '" + cells[0] + "'");
        rec.t = *ts;
        for (std::size_t c = 1; c < header.size() && c < cells.size(); ++c) {
            if (cells[c].empty()) continue;
            const double v = std::strtod(cells[c].c_str(), nullptr);
            if (header[c] == "mean") {
                rec.mean = v;
            } else if (header[c] == "std") {
                rec.std = v;
            } else if (header[c].rfind("q_", 0) == 0) {
                rec.quantiles[std::strtod(header[c].c_str() + 2, nullptr)] = v;
            }
        }
        records.push_back(rec);
    }
    return records;
}

void write_score_json(std::ostream& out, const ScoreReport& report) {
    const auto opt = [&](const std::optional<double>& v) {
        return v ? f17(*v) : std::string("null");
    };
    out << "{\"method\": \"" << escape(report.method_name) << "\", \"n\": " << report.n
        << ", \"rmse\": " << opt(report.rmse) << ", \"mean_logs\": " << opt(report.mean_logs)
        << ", \"mean_crps\": " << opt(report.mean_crps) << ", \"mean_pinball\": {";
    bool first = true;
    for (const auto& [q, v] : report.mean_pinball) {
        if (!first) out << ", ";
        out << '"' << format_shortest(q) << "\": " << f17(v);
        first = false;
    }
    out << "}}\n";
}

void write_score_csv(std::ostream& out, const ScoreReport& report) {
    out << "method,n,rmse,mean_logs,mean_crps";
    for (const auto& [q, v] : report.mean_pinball) {
        (void)v;
        out << ",pinball_" << format_shortest(q);
    }
    out << '\n';
    const auto opt = [&](const std::optional<double>& v) {
        return v ? f17(*v) : std::string();
    };
    out << report.method_name << ',' << report.n << ',' << opt(report.rmse) << ','
        << opt(report.mean_logs) << ',' << opt(report.mean_crps);
    for (const auto& [q, v] : report.mean_pinball) {
        (void)q;
        out << ',' << f17(v);
    }
    out << '\n';
}

} // namespace heliocast
