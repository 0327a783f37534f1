#pragma once

#include "heliocast/bayes.hpp"
#include "heliocast/linear_model.hpp"
#include "heliocast/metrics.hpp"
#include "heliocast/quantile_model.hpp"
#include "heliocast/timestamp.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace heliocast {

/// Per-timestamp forecast output ready for CSV emission and scoring.
struct ForecastRecord {
    Timestamp t;
    std::optional<double> mean;
    std::optional<double> std;
    std::map<double, double> quantiles;
};

/// The fixed forecast CSV quantile columns
/// (`timestamp,mean,std,q_0.025,q_0.15,q_0.5,q_0.85,q_0.975`).
extern const std::vector<double> kForecastColumns;

enum class ModelKind { point, quantile, bayes };

/// Shortest decimal text that parses back to exactly the same double. Used
/// for quantile labels; bulk floats are written with 17 significant digits.
std::string format_shortest(double v);

// Model files, fixed field order, floats at 17 significant digits.
void save_linear_model(std::ostream& out, const LinearModel& m);
LinearModel load_linear_model(std::istream& in);
void save_quantile_model(std::ostream& out, const QuantileModel& m);
QuantileModel load_quantile_model(std::istream& in);
void save_bayes_model(std::ostream& out, const BayesModel& m);
BayesModel load_bayes_model(std::istream& in);

/// Identifies which model a JSON file holds from its fields.
ModelKind peek_model_kind(std::istream& in);

// Forecast CSV (fixed column set, unused cells empty).
void write_forecast_csv(std::ostream& out, const std::vector<ForecastRecord>& records);
std::vector<ForecastRecord> read_forecast_csv(std::istream& in);

// Score reports in JSON and Table-style CSV
// (`method,n,rmse,mean_logs,mean_crps,pinball_<q>...`).
void write_score_json(std::ostream& out, const ScoreReport& report);
void write_score_csv(std::ostream& out, const ScoreReport& report);

} // namespace heliocast
