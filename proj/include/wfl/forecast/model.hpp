#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wfl/forecast/dataset.hpp"
#include "wfl/forecast/preprocess.hpp"
#include "wfl/ledger/types.hpp"

namespace wfl::forecast {

enum class ForecasterKind : std::uint8_t { NaiveLast = 0, SeasonalNaive = 1, AutoRegressive = 2, NearestCentroid = 3 };

const char* to_string(ForecasterKind kind);
/// Accepts "naive", "seasonal", "ar", "centroid" and the enum names.
std::optional<ForecasterKind> parse_forecaster_kind(std::string_view text);

inline constexpr double kRidgeLambda = 1e-6;

struct ForecasterSpec {
    ForecasterKind kind = ForecasterKind::AutoRegressive;
    std::uint32_t order = 3;    // AutoRegressive
    std::uint32_t period = 24;  // SeasonalNaive
    std::string target = columns::kTemperature;
    std::string class_column = columns::kSummary;  // NearestCentroid
};

struct NaiveLastParams {
    double last_value = 0.0;
    bool operator==(const NaiveLastParams&) const = default;
};

struct SeasonalNaiveParams {
    std::vector<double> season;  // trailing `period` training values, oldest first
    bool operator==(const SeasonalNaiveParams&) const = default;
};

// y_t = intercept + sum_i coefficients[i] * y_{t-1-i}
struct AutoRegressiveParams {
    double intercept = 0.0;
    std::vector<double> coefficients;
    bool operator==(const AutoRegressiveParams&) const = default;
};

struct NearestCentroidParams {
    std::string class_column;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> centroids;  // one per label, feature_width() wide
    bool operator==(const NearestCentroidParams&) const = default;
};

using ModelParams = std::variant<NaiveLastParams, SeasonalNaiveParams, AutoRegressiveParams, NearestCentroidParams>;

struct ForecastModel {
    ModelParams params;
    PreprocessStats preprocess;
    std::string target = columns::kTemperature;
    std::uint32_t training_rows = 0;

    ForecasterKind kind() const { return static_cast<ForecasterKind>(params.index()); }
    ledger::ModelKind ledger_kind() const {
        return kind() == ForecasterKind::NearestCentroid ? ledger::ModelKind::Classification
                                                         : ledger::ModelKind::Regression;
    }
    /// Trailing target values `forecast` needs.
    std::size_t required_history() const;

    /// Throws ForecastError{InvalidArgument} when the structural invariants fail.
    void check_invariants() const;

    bool operator==(const ForecastModel&) const = default;
};

/// Fits on an imputed training set. Throws EmptyTrainingSet,
/// InsufficientHistory, SingularSystem or InvalidArgument.
ForecastModel fit_forecaster(const ForecasterSpec& spec, const Dataset& train);

/// Rolls `horizon` steps past the end of `history` (target values, oldest
/// first). AutoRegressive feeds its own predictions back in. Throws
/// InsufficientContext; NearestCentroid models throw InvalidArgument.
std::vector<double> forecast_series(const ForecastModel& model, std::span<const double> history, std::size_t horizon);

/// Class label for every row of `data`. Regression models throw InvalidArgument.
std::vector<std::string> classify(const ForecastModel& model, const Dataset& data);

using Prediction = std::variant<std::vector<double>, std::vector<std::string>>;

/// Regression kinds: `horizon` steps after the context's target column.
/// NearestCentroid: labels for the final `horizon` rows of the context
/// (all rows when horizon is 0 or exceeds the row count).
Prediction predict(const ForecastModel& model, const Dataset& context, std::size_t horizon);

}  // namespace wfl::forecast
