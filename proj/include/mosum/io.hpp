#pragma once

#include "mosum/detection.hpp"
#include "mosum/mosum_core.hpp"
#include "mosum/signal_model.hpp"

#include <iosfwd>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mosum {

/// Shortest decimal text for CSV output: 17 significant digits.
std::string format_double(double v);

/// Raised for malformed input files (bad CSV, non-uniform grid, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Series read from CSV, plus the time of the first observation when a
/// t column was present (t_i = t_offset + i * delta_t).
struct CsvSeries {
    Series series;
    double t_offset = 0.0;
};

/// Reads a header-led CSV with an `x` column (or a single numeric column)
/// and an optional uniformly spaced `t` column. delta_t overrides the value
/// inferred from t; without either, delta_t = 1.
CsvSeries read_series_csv(std::istream& in, std::optional<double> delta_t = std::nullopt);

/// Writes `t,x` (and `f` when truth is given) with t_i = t_offset + i dt.
void write_series_csv(std::ostream& out, const Series& series, const std::vector<double>* truth = nullptr,
                      double t_offset = 0.0);

nlohmann::json to_json(const DetectionResult& result);

/// {"n","delta_t","changes","segments":[{"a0","a1"}]}
nlohmann::json signal_to_json(const PiecewiseLinearSignal& signal);
PiecewiseLinearSignal signal_from_json(const nlohmann::json& spec);

} // namespace mosum
