#include "wfl/forecast/dataset.hpp"

#include <bit>
#include <cstdint>

#include "wfl/forecast/error.hpp"

namespace wfl::forecast {

const char* to_string(ForecastErrc code) {
    switch (code) {
        case ForecastErrc::AllMissingColumn: return "AllMissingColumn";
        case ForecastErrc::EmptyTrainingSet: return "EmptyTrainingSet";
        case ForecastErrc::ArityMismatch: return "ArityMismatch";
        case ForecastErrc::TooFewRows: return "TooFewRows";
        case ForecastErrc::InsufficientHistory: return "InsufficientHistory";
        case ForecastErrc::SingularSystem: return "SingularSystem";
        case ForecastErrc::InsufficientContext: return "InsufficientContext";
        case ForecastErrc::LengthMismatch: return "LengthMismatch";
        case ForecastErrc::EmptyInput: return "EmptyInput";
        case ForecastErrc::MapeUndefined: return "MapeUndefined";
        case ForecastErrc::MissingMetric: return "MissingMetric";
        case ForecastErrc::MalformedBytes: return "MalformedBytes";
        case ForecastErrc::UnsupportedVersion: return "UnsupportedVersion";
        case ForecastErrc::MalformedCsv: return "MalformedCsv";
        case ForecastErrc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

const NumericColumn* Dataset::find_numeric(const std::string& name) const {
    for (const auto& c : numeric) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const CategoricalColumn* Dataset::find_categorical(const std::string& name) const {
    for (const auto& c : categorical) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::span<const double> Dataset::target_values() const {
    const auto* col = find_numeric(target);
    if (col == nullptr) throw ForecastError(ForecastErrc::InvalidArgument, "no target column '" + target + "'");
    return col->values;
}

Dataset Dataset::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > rows()) throw ForecastError(ForecastErrc::InvalidArgument, "slice out of range");
    Dataset out;
    out.target = target;
    out.timestamps.assign(timestamps.begin() + begin, timestamps.begin() + end);
    for (const auto& c : numeric) {
        out.numeric.push_back({c.name, {c.values.begin() + begin, c.values.begin() + end}});
    }
    for (const auto& c : categorical) {
        out.categorical.push_back({c.name, {c.values.begin() + begin, c.values.begin() + end}});
    }
    return out;
}

void Dataset::validate() const {
    const auto n = rows();
    for (const auto& c : numeric) {
        if (c.values.size() != n) throw ForecastError(ForecastErrc::ArityMismatch, "column " + c.name);
    }
    for (const auto& c : categorical) {
        if (c.values.size() != n) throw ForecastError(ForecastErrc::ArityMismatch, "column " + c.name);
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(timestamps[i] > timestamps[i - 1])) {
            throw ForecastError(ForecastErrc::InvalidArgument,
                                "timestamps must be strictly increasing (row " + std::to_string(i) + ")");
        }
    }
}

bool Dataset::operator==(const Dataset& other) const {
    auto same_bits = [](const std::vector<double>& a, const std::vector<double>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
        }
        return true;
    };
    if (target != other.target || !same_bits(timestamps, other.timestamps)) return false;
    if (numeric.size() != other.numeric.size() || categorical != other.categorical) return false;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
        if (numeric[i].name != other.numeric[i].name || !same_bits(numeric[i].values, other.numeric[i].values)) {
            return false;
        }
    }
    return true;
}

Dataset empty_weather_dataset() {
    Dataset d;
    for (const char* name : {columns::kTemperature, columns::kHumidity, columns::kWindSpeed, columns::kVisibility,
                             columns::kPressure}) {
        d.numeric.push_back({name, {}});
    }
    d.categorical.push_back({columns::kSummary, {}});
    return d;
}

}  // namespace wfl::forecast
