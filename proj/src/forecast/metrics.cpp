#include "wfl/forecast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wfl/forecast/error.hpp"

namespace wfl::forecast {

RegressionMetrics regression_metrics(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw ForecastError(ForecastErrc::LengthMismatch,
                            std::to_string(y_true.size()) + " targets vs " + std::to_string(y_pred.size()) + " predictions");
    }
    if (y_true.empty()) throw ForecastError(ForecastErrc::EmptyInput, "no points");

    double abs_sum = 0.0, sq_sum = 0.0, pct_sum = 0.0;
    std::size_t pct_n = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double e = y_true[i] - y_pred[i];
        abs_sum += std::abs(e);
        sq_sum += e * e;
        if (std::abs(y_true[i]) > kMapeGuard) {
            pct_sum += std::abs(e) / std::abs(y_true[i]);
            ++pct_n;
        }
    }
    if (pct_n == 0) throw ForecastError(ForecastErrc::MapeUndefined, "every target is within the zero guard");
    const double n = static_cast<double>(y_true.size());
    RegressionMetrics m;
    m.mae = abs_sum / n;
    m.rmse = std::sqrt(sq_sum / n);
    m.mape = pct_sum / static_cast<double>(pct_n);
    m.mape_excluded = y_true.size() - pct_n;
    return m;
}

ClassificationMetrics classification_metrics(std::span<const std::string> labels_true,
                                             std::span<const std::string> labels_pred) {
    if (labels_true.size() != labels_pred.size()) {
        throw ForecastError(ForecastErrc::LengthMismatch, "label vectors differ in length");
    }
    if (labels_true.empty()) throw ForecastError(ForecastErrc::EmptyInput, "no labels");

    struct Counts {
        std::size_t tp = 0, fp = 0, fn = 0;
    };
    std::map<std::string, Counts> per_class;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels_true.size(); ++i) {
        if (labels_true[i] == labels_pred[i]) {
            ++correct;
            ++per_class[labels_true[i]].tp;
        } else {
            ++per_class[labels_true[i]].fn;
            ++per_class[labels_pred[i]].fp;
        }
    }
    double f1_sum = 0.0;
    std::size_t classes = 0;
    for (const auto& [label, c] : per_class) {
        if (c.tp + c.fn == 0) continue;  // only classes present in labels_true
        ++classes;
        const double denom = 2.0 * c.tp + c.fp + c.fn;
        f1_sum += denom > 0.0 ? 2.0 * c.tp / denom : 0.0;
    }
    ClassificationMetrics m;
    m.accuracy = static_cast<double>(correct) / static_cast<double>(labels_true.size());
    m.f1_macro = f1_sum / static_cast<double>(classes);
    return m;
}

ledger::ScoreBp skill_score(const MetricReport& candidate, const MetricReport& reference, ledger::ModelKind kind) {
    auto to_bp = [](double fraction) {
        return static_cast<ledger::ScoreBp>(std::lround(10000.0 * std::clamp(fraction, 0.0, 1.0)));
    };
    if (kind == ledger::ModelKind::Classification) {
        if (!candidate.f1_macro) throw ForecastError(ForecastErrc::MissingMetric, "candidate lacks f1_macro");
        if (!std::isfinite(*candidate.f1_macro)) return 0;
        return to_bp(*candidate.f1_macro);
    }
    if (!candidate.mae || !reference.mae) throw ForecastError(ForecastErrc::MissingMetric, "regression skill needs mae");
    const double cand = *candidate.mae;
    const double ref = *reference.mae;
    if (!std::isfinite(cand)) return 0;
    if (ref == 0.0) return cand == 0.0 ? 10000 : 0;
    return to_bp(1.0 - cand / ref);
}

}  // namespace wfl::forecast
