#include "wfl/forecast/evaluation.hpp"

#include <cmath>

#include "wfl/forecast/error.hpp"

namespace wfl::forecast {

namespace {

MetricReport regression_report(const std::vector<double>& truth, const std::vector<double>& pred) {
    MetricReport r;
    r.points = truth.size();
    bool finite = true;
    for (double p : pred) finite = finite && std::isfinite(p);
    if (!finite) {
        // A diverging model has no meaningful error magnitude.
        r.mae = r.rmse = r.mape = std::numeric_limits<double>::infinity();
        return r;
    }
    auto m = regression_metrics(truth, pred);
    r.mae = m.mae;
    r.rmse = m.rmse;
    r.mape = m.mape;
    r.mape_excluded = m.mape_excluded;
    return r;
}

template <typename Forecaster>
MetricReport rolling(const Dataset& data, std::size_t first_origin, std::size_t horizon, Forecaster&& fc) {
    auto y = data.target_values();
    if (first_origin >= y.size()) throw ForecastError(ForecastErrc::EmptyInput, "no evaluation origins");
    if (horizon == 0) throw ForecastError(ForecastErrc::InvalidArgument, "horizon must be positive");
    std::vector<double> truth, pred;
    for (std::size_t o = first_origin; o < y.size(); ++o) {
        const std::size_t h = std::min(horizon, y.size() - o);
        auto f = fc(y.first(o), h);
        for (std::size_t k = 0; k < h; ++k) {
            truth.push_back(y[o + k]);
            pred.push_back(f[k]);
        }
    }
    return regression_report(truth, pred);
}

}  // namespace

MetricReport evaluate_rolling(const ForecastModel& model, const Dataset& data, std::size_t first_origin,
                              std::size_t horizon) {
    if (model.kind() == ForecasterKind::NearestCentroid) {
        const auto& nc = std::get<NearestCentroidParams>(model.params);
        if (first_origin >= data.rows()) throw ForecastError(ForecastErrc::EmptyInput, "no evaluation rows");
        auto window = data.slice(first_origin, data.rows());
        const auto* col = window.find_categorical(nc.class_column);
        if (col == nullptr) throw ForecastError(ForecastErrc::InvalidArgument, "no class column " + nc.class_column);
        std::vector<std::string> truth;
        for (const auto& v : col->values) truth.push_back(v.value_or(kUnknownLabel));
        auto pred = classify(model, window);
        auto m = classification_metrics(truth, pred);
        MetricReport r;
        r.points = truth.size();
        r.accuracy = m.accuracy;
        r.f1_macro = m.f1_macro;
        return r;
    }
    Dataset d = data;
    d.target = model.target;
    return rolling(d, first_origin, horizon,
                   [&](std::span<const double> hist, std::size_t h) { return forecast_series(model, hist, h); });
}

MetricReport evaluate_naive_reference(const Dataset& data, std::size_t first_origin, std::size_t horizon) {
    if (first_origin == 0) throw ForecastError(ForecastErrc::InsufficientContext, "naive reference needs history");
    return rolling(data, first_origin, horizon, [](std::span<const double> hist, std::size_t h) {
        return std::vector<double>(h, hist.back());
    });
}

}  // namespace wfl::forecast
