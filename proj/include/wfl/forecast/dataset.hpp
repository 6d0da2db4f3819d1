#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wfl::forecast {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

// NaN marks a missing numeric cell.
struct NumericColumn {
    std::string name;
    std::vector<double> values;
    bool operator==(const NumericColumn&) const = default;
};

struct CategoricalColumn {
    std::string name;
    std::vector<std::optional<std::string>> values;
    bool operator==(const CategoricalColumn&) const = default;
};

/// Hourly weather observations, column-major.
struct Dataset {
    std::vector<double> timestamps;  // hours since 1970-01-01T00:00Z, strictly increasing
    std::vector<NumericColumn> numeric;
    std::vector<CategoricalColumn> categorical;
    std::string target = "Temperature";

    std::size_t rows() const { return timestamps.size(); }

    const NumericColumn* find_numeric(const std::string& name) const;
    const CategoricalColumn* find_categorical(const std::string& name) const;

    /// Throws ForecastError{InvalidArgument} if the target column is absent.
    std::span<const double> target_values() const;

    /// Rows [begin, end).
    Dataset slice(std::size_t begin, std::size_t end) const;

    /// Throws ForecastError{ArityMismatch} on ragged columns and
    /// ForecastError{InvalidArgument} on non-increasing timestamps.
    void validate() const;

    bool operator==(const Dataset& other) const;
};

// Standard weather schema column names.
namespace columns {
inline constexpr const char* kTimestamp = "Timestamp";
inline constexpr const char* kTemperature = "Temperature";
inline constexpr const char* kHumidity = "Humidity";
inline constexpr const char* kWindSpeed = "WindSpeed";
inline constexpr const char* kVisibility = "Visibility";
inline constexpr const char* kPressure = "Pressure";
inline constexpr const char* kSummary = "Summary";
}  // namespace columns

/// Empty dataset with the five numeric columns and Summary, in schema order.
Dataset empty_weather_dataset();

}  // namespace wfl::forecast
