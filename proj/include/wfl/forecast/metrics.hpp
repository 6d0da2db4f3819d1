#pragma once

#include <optional>
#include <span>
#include <string>

#include "wfl/ledger/types.hpp"

namespace wfl::forecast {

inline constexpr double kMapeGuard = 1e-8;

struct RegressionMetrics {
    double mae = 0.0;
    double rmse = 0.0;
    double mape = 0.0;                // fraction, over points with |y| > kMapeGuard
    std::size_t mape_excluded = 0;    // points skipped by the guard
};

/// Throws LengthMismatch, EmptyInput or MapeUndefined.
RegressionMetrics regression_metrics(std::span<const double> y_true, std::span<const double> y_pred);

struct ClassificationMetrics {
    double accuracy = 0.0;
    double f1_macro = 0.0;  // mean over classes present in labels_true
};

ClassificationMetrics classification_metrics(std::span<const std::string> labels_true,
                                             std::span<const std::string> labels_pred);

struct MetricReport {
    std::optional<double> mae;
    std::optional<double> rmse;
    std::optional<double> mape;
    std::optional<double> accuracy;
    std::optional<double> f1_macro;
    std::size_t points = 0;
    std::size_t mape_excluded = 0;
};

/// Maps local evaluation to a vote in basis points.
/// Regression: round(10000 * clamp(1 - mae/mae_reference, 0, 1)); a zero
/// reference scores 10000 only for an exact candidate; a non-finite candidate
/// error scores 0. Classification: round(10000 * f1_macro).
/// Throws MissingMetric.
ledger::ScoreBp skill_score(const MetricReport& candidate, const MetricReport& reference, ledger::ModelKind kind);

}  // namespace wfl::forecast
