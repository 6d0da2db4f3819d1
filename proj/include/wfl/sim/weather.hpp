#pragma once

#include <cstddef>
#include <cstdint>

#include "wfl/forecast/dataset.hpp"

namespace wfl::sim {

// Temperature in degrees C; t counts hours from `start_hours`.
//   T(t) = base + trend*t + daily*sin(2pi(t-6)/24) + seasonal*sin(2pi t/8760) + a(t)
// where the anomaly a is a stationary Gaussian AR(1) with standard deviation
// noise_sd and lag-one correlation noise_persistence. The other features are
// derived from T plus noise scaled by `feature_noise`.
struct WeatherParams {
    double start_hours = 317736.0;  // 2006-04-01T00:00Z
    double base_celsius = 10.0;
    double trend_per_hour = 0.0;
    double daily_amplitude = 6.0;
    double seasonal_amplitude = 0.0;  // drifts over a short series; off by default
    double noise_sd = 1.0;
    double noise_persistence = 0.8;
    double feature_noise = 1.0;
    bool operator==(const WeatherParams&) const = default;
};

inline constexpr std::size_t kMinSeriesHours = 48;

/// Hourly synthetic series in the standard weather schema. Summary is "Rain"
/// when humidity >= 0.85, else "Sunny" when T >= 15, else "Cloudy".
/// Throws SimError{SeriesTooShort} for n < 48.
forecast::Dataset generate_weather(std::uint64_t seed, std::size_t n, const WeatherParams& params = {});

}  // namespace wfl::sim
