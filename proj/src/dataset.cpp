#include "heliocast/dataset.hpp"

#include "heliocast/errors.hpp"
#include "heliocast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace heliocast {
namespace {

constexpr std::array<const char*, kFieldCount> kFieldNames{
    "temp_2cm",      "temp_10cm", "temp_60cm",      "rel_humidity",
    "rainfall",      "wind_speed", "wind_direction", "solar_irradiance"};

constexpr double kIrradianceMax = 1500.0; // W/m^2 sensor ceiling

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_line(const std::string& line) {
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
    return cells;
}

bool is_missing_marker(const std::string& cell) {
    const std::string t = lower(trim(cell));
    return t.empty() || t == "na" || t == "null";
}

std::optional<double> parse_cell(const std::string& cell) {
    const std::string t = trim(cell);
    if (is_missing_marker(t)) return std::nullopt;
    const char* begin = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double normalize_wind_direction(double deg) {
    double d = std::fmod(deg, 360.0);
    if (d < 0.0) d += 360.0;
    return d;
}

} // namespace

const char* field_name(Field f) {
    return kFieldNames[static_cast<int>(f)];
}

std::optional<Field> field_from_name(const std::string& name) {
    for (int i = 0; i < kFieldCount; ++i)
        if (name == kFieldNames[i]) return static_cast<Field>(i);
    return std::nullopt;
}

ParseResult parse_csv(std::istream& source, const ColumnSchema& schema,
                      std::string station_id) {
    std::string line;
    if (!std::getline(source, line))
        throw data_error("parse_csv: missing header row");

    // column index -> canonical field (or timestamp, marked by -1)
    const auto header = split_line(line);
    std::vector<int> column_field(header.size(), -2); // -2 = ignored
    int timestamp_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        std::string name = trim(header[c]);
        if (auto it = schema.find(name); it != schema.end()) name = it->second;
        if (name == "timestamp") {
            timestamp_col = static_cast<int>(c);
        } else if (auto f = field_from_name(name)) {
            column_field[c] = static_cast<int>(*f);
        }
    }
    if (timestamp_col < 0)
        throw data_error("parse_csv: no column maps to 'timestamp'");

    ParseResult out;
    out.dataset.station_id = std::move(station_id);
    auto& report = out.report;
    std::vector<Observation> rows;

    while (std::getline(source, line)) {
        if (trim(line).empty()) continue;
        ++report.rows_seen;
        const auto cells = split_line(line);
        if (static_cast<std::size_t>(timestamp_col) >= cells.size()) {
            ++report.rows_dropped_bad_timestamp;
            continue;
        }
        const auto ts = parse_timestamp(cells[static_cast<std::size_t>(timestamp_col)]);
        if (!ts) {
            ++report.rows_dropped_bad_timestamp;
            continue;
        }
        Observation obs;
        obs.t = snap_to_grid(*ts);
        for (std::size_t c = 0; c < cells.size() && c < column_field.size(); ++c) {
            if (column_field[c] < 0) continue;
            const auto f = static_cast<Field>(column_field[c]);
            auto v = parse_cell(cells[c]);
            if (!v) continue;
            if (f == Field::SolarIrradiance && (*v < 0.0 || *v > kIrradianceMax)) {
                ++report.cells_rejected;
                continue;
            }
            if (f == Field::WindDirection) v = normalize_wind_direction(*v);
            obs[f] = v;
        }
        rows.push_back(obs);
    }

    if (rows.empty())
        throw data_error("parse_csv: no parseable data rows (empty-data)");

    // Stable sort keeps file order within equal timestamps; last row wins.
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Observation& a, const Observation& b) { return a.t < b.t; });
    auto& records = out.dataset.records;
    records.reserve(rows.size());
    for (const auto& r : rows) {
        if (!records.empty() && records.back().t == r.t) {
            records.back() = r;
            ++report.duplicate_timestamps;
        } else {
            records.push_back(r);
        }
    }
    report.rows_kept = records.size();
    return out;
}

void serialize_csv(std::ostream& out, const Dataset& d) {
    out << "timestamp";
    for (const char* name : kFieldNames) out << ',' << name;
    out << '\n';
    for (const auto& rec : d.records) {
        out << format_timestamp(rec.t);
        for (int i = 0; i < kFieldCount; ++i) {
            out << ',';
            if (rec.values[static_cast<std::size_t>(i)])
                out << format_double(*rec.values[static_cast<std::size_t>(i)]);
        }
        out << '\n';
    }
}

Dataset select_window(const Dataset& d, Timestamp start, Timestamp end) {
    Dataset out;
    out.station_id = d.station_id;
    for (const auto& r : d.records)
        if (start <= r.t && r.t <= end) out.records.push_back(r);
    return out;
}

std::pair<Dataset, Dataset> train_test_split_by_date(const Dataset& d, Timestamp cutoff) {
    Dataset train, test;
    train.station_id = test.station_id = d.station_id;
    for (const auto& r : d.records)
        (r.t <= cutoff ? train : test).records.push_back(r);
    return {std::move(train), std::move(test)};
}

Dataset filter_positive(const Dataset& d, Field field) {
    Dataset out;
    out.station_id = d.station_id;
    for (const auto& r : d.records)
        if (r[field] && *r[field] > 0.0) out.records.push_back(r);
    return out;
}

std::vector<std::pair<std::string, double>> correlation_report(const Dataset& d, Field target) {
    std::size_t with_target = 0;
    for (const auto& r : d.records)
        if (r[target]) ++with_target;
    if (with_target < 2)
        throw data_error("correlation_report: target present in fewer than 2 records");

    std::vector<std::pair<std::string, double>> report;
    for (int i = 0; i < kFieldCount; ++i) {
        const auto f = static_cast<Field>(i);
        if (f == target) continue;
        std::vector<double> xs, ys;
        for (const auto& r : d.records) {
            if (r[f] && r[target]) {
                xs.push_back(*r[f]);
                ys.push_back(*r[target]);
            }
        }
        double r_value = std::numeric_limits<double>::quiet_NaN();
        if (xs.size() >= 2) {
            try {
                r_value = pearson(xs, ys);
            } catch (const std::invalid_argument&) {
                // constant feature (or constant target restriction): undefined marker
            }
        }
        report.emplace_back(field_name(f), r_value);
    }
    std::stable_sort(report.begin(), report.end(), [](const auto& a, const auto& b) {
        const bool an = std::isnan(a.second), bn = std::isnan(b.second);
        if (an != bn) return bn; // defined values first
        if (an && bn) return false;
        return std::abs(a.second) > std::abs(b.second);
    });
    return report;
}

DesignMatrix build_design(const Dataset& d, const std::vector<std::string>& features,
                          Field target, bool intercept) {
    if (features.empty()) throw data_error("build_design: no features selected");
    std::vector<Field> fields;
    fields.reserve(features.size());
    for (const auto& name : features) {
        const auto f = field_from_name(name);
        if (!f) throw data_error("build_design: unknown feature '" + name + "'");
        fields.push_back(*f);
    }

    std::vector<const Observation*> complete;
    for (const auto& r : d.records) {
        if (!r[target]) continue;
        bool ok = true;
        for (Field f : fields)
            if (!r[f]) {
                ok = false;
                break;
            }
        if (ok) complete.push_back(&r);
    }

    DesignMatrix dm;
    dm.feature_names = features;
    dm.intercept = intercept;
    dm.dropped_rows = d.records.size() - complete.size();
    const auto n = static_cast<Eigen::Index>(complete.size());
    const auto m = static_cast<Eigen::Index>(features.size()) + (intercept ? 1 : 0);
    if (n < m)
        throw data_error("build_design: " + std::to_string(n) + " complete rows for " +
                         std::to_string(m) + " columns (insufficient data)");

    dm.features.resize(n, m);
    dm.targets.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Observation& r = *complete[static_cast<std::size_t>(i)];
        Eigen::Index col = 0;
        if (intercept) dm.features(i, col++) = 1.0;
        for (Field f : fields) dm.features(i, col++) = *r[f];
        dm.targets[i] = *r[target];
    }
    return dm;
}

FeatureRows collect_features(const Dataset& d, const std::vector<std::string>& features) {
    std::vector<Field> fields;
    for (const auto& name : features) {
        const auto f = field_from_name(name);
        if (!f) throw data_error("collect_features: unknown feature '" + name + "'");
        fields.push_back(*f);
    }
    FeatureRows out;
    std::vector<std::array<double, 16>> tmp;
    for (const auto& r : d.records) {
        bool ok = true;
        for (Field f : fields)
            if (!r[f]) {
                ok = false;
                break;
            }
        if (!ok) continue;
        out.times.push_back(r.t);
    }
    out.features.resize(static_cast<Eigen::Index>(out.times.size()),
                        static_cast<Eigen::Index>(fields.size()));
    Eigen::Index i = 0;
    for (const auto& r : d.records) {
        bool ok = true;
        for (Field f : fields)
            if (!r[f]) {
                ok = false;
                break;
            }
        if (!ok) continue;
        for (std::size_t c = 0; c < fields.size(); ++c)
            out.features(i, static_cast<Eigen::Index>(c)) = *r[fields[c]];
        ++i;
    }
    return out;
}

} // namespace heliocast
