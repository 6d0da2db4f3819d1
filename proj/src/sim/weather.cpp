#include "wfl/sim/weather.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wfl/common/rng.hpp"
#include "wfl/sim/error.hpp"

namespace wfl::sim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

forecast::Dataset generate_weather(std::uint64_t seed, std::size_t n, const WeatherParams& p) {
    if (n < kMinSeriesHours) {
        throw SimError(SimErrc::SeriesTooShort, std::to_string(n) + " hours, need at least 48");
    }
    forecast::Dataset d = forecast::empty_weather_dataset();
    auto& temp = d.numeric[0].values;
    auto& hum = d.numeric[1].values;
    auto& wind = d.numeric[2].values;
    auto& vis = d.numeric[3].values;
    auto& pres = d.numeric[4].values;
    auto& summary = d.categorical[0].values;
    d.timestamps.reserve(n);
    for (auto* v : {&temp, &hum, &wind, &vis, &pres}) v->reserve(n);
    summary.reserve(n);

    Rng rng(seed);
    const double fn = p.feature_noise;
    const double rho = p.noise_persistence;
    const double innovation_sd = p.noise_sd * std::sqrt(1.0 - rho * rho);
    double anomaly = p.noise_sd * rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        const double T = p.base_celsius + p.trend_per_hour * t + p.daily_amplitude * std::sin(kTwoPi * (t - 6.0) / 24.0) +
                         p.seasonal_amplitude * std::sin(kTwoPi * t / 8760.0) + anomaly;
        const double H = std::clamp(0.75 - 0.02 * (T - p.base_celsius) + 0.05 * fn * rng.normal(), 0.0, 1.0);
        const double W = std::max(0.0, 10.0 + 3.0 * std::sin(kTwoPi * (t - 14.0) / 24.0) + 2.0 * fn * rng.normal());
        const double V = std::clamp(12.0 - 8.0 * (H - 0.7) + fn * rng.normal(), 0.0, 16.0);
        const double P = 1013.0 + 5.0 * std::sin(kTwoPi * t / 120.0) + fn * rng.normal();

        d.timestamps.push_back(p.start_hours + t);
        temp.push_back(T);
        hum.push_back(H);
        wind.push_back(W);
        vis.push_back(V);
        pres.push_back(P);
        summary.emplace_back(H >= 0.85 ? "Rain" : T >= 15.0 ? "Sunny" : "Cloudy");
        anomaly = rho * anomaly + innovation_sd * rng.normal();
    }
    return d;
}

}  // namespace wfl::sim
