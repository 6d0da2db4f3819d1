#pragma once

#include <stdexcept>
#include <string>

namespace wfl::forecast {

enum class ForecastErrc {
    AllMissingColumn,
    EmptyTrainingSet,
    ArityMismatch,
    TooFewRows,
    InsufficientHistory,
    SingularSystem,
    InsufficientContext,
    LengthMismatch,
    EmptyInput,
    MapeUndefined,
    MissingMetric,
    MalformedBytes,
    UnsupportedVersion,
    MalformedCsv,
    InvalidArgument,
};

const char* to_string(ForecastErrc code);

class ForecastError : public std::runtime_error {
public:
    ForecastError(ForecastErrc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}
    ForecastErrc code() const { return code_; }

private:
    ForecastErrc code_;
};

}  // namespace wfl::forecast
