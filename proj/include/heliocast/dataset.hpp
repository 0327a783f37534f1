#pragma once

#include "heliocast/timestamp.hpp"

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace heliocast {

/// Canonical weather channels of a 15-minute station record.
enum class Field : int {
    Temp2cm = 0,
    Temp10cm,
    Temp60cm,
    RelHumidity,
    Rainfall,
    WindSpeed,
    WindDirection,
    SolarIrradiance,
};

inline constexpr int kFieldCount = 8;

const char* field_name(Field f);
std::optional<Field> field_from_name(const std::string& name);

struct Observation {
    Timestamp t;
    std::array<std::optional<double>, kFieldCount> values{};

    std::optional<double>& operator[](Field f) { return values[static_cast<int>(f)]; }
    const std::optional<double>& operator[](Field f) const { return values[static_cast<int>(f)]; }
};

/// Time-ordered, duplicate-free record collection.
struct Dataset {
    std::vector<Observation> records;
    std::string station_id;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
    Timestamp first() const { return records.front().t; }
    Timestamp last() const { return records.back().t; }
};

struct IngestReport {
    std::size_t rows_seen = 0;          // data rows in the file
    std::size_t rows_kept = 0;          // rows in the resulting Dataset
    std::size_t rows_dropped_bad_timestamp = 0;
    std::size_t duplicate_timestamps = 0; // later row won
    std::size_t cells_rejected = 0;       // out-of-range irradiance values
};

struct ParseResult {
    Dataset dataset;
    IngestReport report;
};

/// Maps source CSV header names to canonical field names ("t60" ->
/// "temp_60cm"). Canonical names always map to themselves; unmapped columns
/// are ignored. A column mapping to "timestamp" must exist.
using ColumnSchema = std::map<std::string, std::string>;

/// Parses a FAWN-style CSV stream. Unparseable cells become missing values;
/// rows with unparseable timestamps are dropped and counted; duplicated
/// timestamps keep the row that appears last in the file. Throws data_error
/// on a missing header or when no row parses.
ParseResult parse_csv(std::istream& source, const ColumnSchema& schema,
                      std::string station_id = {});

/// Writes the canonical CSV (header `timestamp,temp_2cm,...`); floats with 17
/// significant digits, missing cells empty. Stable: parse -> serialize ->
/// parse is a fixed point.
void serialize_csv(std::ostream& out, const Dataset& d);

/// Records with start <= t <= end, order preserved.
Dataset select_window(const Dataset& d, Timestamp start, Timestamp end);

/// (records <= cutoff, records > cutoff).
std::pair<Dataset, Dataset> train_test_split_by_date(const Dataset& d, Timestamp cutoff);

/// Keeps rows where `field` is present and strictly positive. Used by the
/// daylight training filter with the irradiance target.
Dataset filter_positive(const Dataset& d, Field field);

/// Pearson r of every other channel against `target`, over rows where both
/// are present; sorted by |r| descending. Channels with fewer than two paired
/// rows or zero variance get a NaN marker and rank last.
std::vector<std::pair<std::string, double>> correlation_report(const Dataset& d, Field target);

/// Feature matrix with optional leading intercept column plus target vector.
struct DesignMatrix {
    Eigen::MatrixXd features;               // n x m (column 0 is ones when intercept)
    Eigen::VectorXd targets;                 // n
    std::vector<std::string> feature_names;  // raw features, excludes intercept
    bool intercept = true;
    std::size_t dropped_rows = 0;

    Eigen::Index n() const { return features.rows(); }
    Eigen::Index m() const { return features.cols(); }
};

/// Drops rows with a missing target or any missing selected feature, then
/// assembles the design matrix in time order. Throws data_error when fewer
/// complete rows than columns remain.
DesignMatrix build_design(const Dataset& d, const std::vector<std::string>& features,
                          Field target, bool intercept);

/// Feature rows without targets, for prediction. Returns the timestamps that
/// had every feature present alongside the matrix (raw features, no
/// intercept column).
struct FeatureRows {
    Eigen::MatrixXd features;
    std::vector<Timestamp> times;
};
FeatureRows collect_features(const Dataset& d, const std::vector<std::string>& features);

} // namespace heliocast
