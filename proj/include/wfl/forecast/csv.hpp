#pragma once

#include <string>
#include <string_view>

#include "wfl/forecast/dataset.hpp"

namespace wfl::forecast {

/// Parses an ISO-8601 timestamp ("2006-04-01 00:00:00.000 +0200",
/// "2006-04-01T00:00:00Z", "2006-04-01") into hours since the Unix epoch.
double parse_iso8601_hours(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ" (seconds rounded).
std::string format_iso8601(double hours);

/// Reads the weather CSV schema: header with Timestamp, Temperature, Humidity,
/// WindSpeed, Visibility, Pressure, Summary in any order and nothing else;
/// empty cells are missing values. Throws ForecastError{MalformedCsv}.
Dataset parse_weather_csv(std::string_view text);

std::string to_weather_csv(const Dataset& data);

}  // namespace wfl::forecast
