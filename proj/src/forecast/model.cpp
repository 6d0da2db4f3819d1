#include "wfl/forecast/model.hpp"

#include <cmath>
#include <limits>

#include "wfl/forecast/error.hpp"

namespace wfl::forecast {

const char* to_string(ForecasterKind kind) {
    switch (kind) {
        case ForecasterKind::NaiveLast: return "NaiveLast";
        case ForecasterKind::SeasonalNaive: return "SeasonalNaive";
        case ForecasterKind::AutoRegressive: return "AutoRegressive";
        case ForecasterKind::NearestCentroid: return "NearestCentroid";
    }
    return "Unknown";
}

std::optional<ForecasterKind> parse_forecaster_kind(std::string_view t) {
    if (t == "naive" || t == "NaiveLast") return ForecasterKind::NaiveLast;
    if (t == "seasonal" || t == "SeasonalNaive") return ForecasterKind::SeasonalNaive;
    if (t == "ar" || t == "AutoRegressive") return ForecasterKind::AutoRegressive;
    if (t == "centroid" || t == "NearestCentroid") return ForecasterKind::NearestCentroid;
    return std::nullopt;
}

std::size_t ForecastModel::required_history() const {
    switch (kind()) {
        case ForecasterKind::NaiveLast: return 1;
        case ForecasterKind::SeasonalNaive: return std::get<SeasonalNaiveParams>(params).season.size();
        case ForecasterKind::AutoRegressive: return std::get<AutoRegressiveParams>(params).coefficients.size();
        case ForecasterKind::NearestCentroid: return 0;
    }
    return 0;
}

void ForecastModel::check_invariants() const {
    auto fail = [](const std::string& why) { throw ForecastError(ForecastErrc::InvalidArgument, why); };
    for (const auto& c : preprocess.numeric) {
        if (!(c.stddev > 0.0) || !std::isfinite(c.stddev) || !std::isfinite(c.mean)) fail("bad column stats " + c.name);
    }
    if (const auto* s = std::get_if<SeasonalNaiveParams>(&params); s && s->season.empty()) fail("empty season");
    if (const auto* a = std::get_if<AutoRegressiveParams>(&params); a && a->coefficients.empty()) fail("AR order 0");
    if (const auto* c = std::get_if<NearestCentroidParams>(&params)) {
        if (c->labels.empty() || c->labels.size() != c->centroids.size()) fail("centroid/label count mismatch");
        for (const auto& centroid : c->centroids) {
            if (centroid.size() != preprocess.feature_width()) fail("centroid dimension differs from feature width");
        }
    }
}

namespace {

std::vector<double> checked_target(const Dataset& train) {
    auto y = train.target_values();
    for (double v : y) {
        if (is_missing(v)) throw ForecastError(ForecastErrc::InvalidArgument, "missing target value; impute first");
    }
    return {y.begin(), y.end()};
}

AutoRegressiveParams fit_autoregressive(const std::vector<double>& y, std::size_t order) {
    const std::size_t n = y.size();
    if (n <= order) {
        throw ForecastError(ForecastErrc::InsufficientHistory,
                            "AR(" + std::to_string(order) + ") needs more than " + std::to_string(order) + " rows");
    }
    const auto rows = static_cast<Eigen::Index>(n - order);
    const auto p = static_cast<Eigen::Index>(order);
    Eigen::MatrixXd x(rows, p);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(r) + order;
        target(r) = y[t];
        for (Eigen::Index i = 0; i < p; ++i) x(r, i) = y[t - 1 - static_cast<std::size_t>(i)];
    }
    // Centering makes the intercept drop out of the normal equations; the
    // ridge term then only penalizes the lag coefficients.
    const Eigen::RowVectorXd x_mean = x.colwise().mean();
    const double y_mean = target.mean();
    x.rowwise() -= x_mean;
    target.array() -= y_mean;

    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += kRidgeLambda;
    const Eigen::VectorXd rhs = x.transpose() * target;
    Eigen::LDLT<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw ForecastError(ForecastErrc::SingularSystem, "LDLT failed");
    Eigen::VectorXd phi = solver.solve(rhs);
    // One refinement step recovers digits lost to the gram matrix's conditioning.
    phi += solver.solve(rhs - gram * phi);
    if (!phi.allFinite()) throw ForecastError(ForecastErrc::SingularSystem, "non-finite AR coefficients");

    AutoRegressiveParams out;
    out.coefficients.assign(phi.data(), phi.data() + phi.size());
    out.intercept = y_mean - x_mean.dot(phi);
    return out;
}

NearestCentroidParams fit_centroids(const ForecasterSpec& spec, const Dataset& train, const PreprocessStats& stats) {
    const auto* labels = train.find_categorical(spec.class_column);
    if (labels == nullptr) throw ForecastError(ForecastErrc::InvalidArgument, "no class column " + spec.class_column);
    auto features = apply_preprocessor(stats, train);

    NearestCentroidParams out;
    out.class_column = spec.class_column;
    std::vector<std::size_t> counts;
    const auto width = static_cast<std::size_t>(features.cols());
    for (std::size_t r = 0; r < train.rows(); ++r) {
        const std::string label = labels->values[r].value_or(kUnknownLabel);
        auto it = std::find(out.labels.begin(), out.labels.end(), label);
        std::size_t k = static_cast<std::size_t>(it - out.labels.begin());
        if (it == out.labels.end()) {
            out.labels.push_back(label);
            out.centroids.emplace_back(width, 0.0);
            counts.push_back(0);
        }
        for (std::size_t c = 0; c < width; ++c) {
            out.centroids[k][c] += features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
        ++counts[k];
    }
    for (std::size_t k = 0; k < out.labels.size(); ++k) {
        for (auto& v : out.centroids[k]) v /= static_cast<double>(counts[k]);
    }
    return out;
}

}  // namespace

ForecastModel fit_forecaster(const ForecasterSpec& spec, const Dataset& train) {
    if (train.rows() == 0) throw ForecastError(ForecastErrc::EmptyTrainingSet, "no training rows");
    ForecastModel model;
    model.target = spec.target;
    model.training_rows = static_cast<std::uint32_t>(train.rows());

    Dataset data = train;
    data.target = spec.target;

    switch (spec.kind) {
        case ForecasterKind::NaiveLast: {
            auto y = checked_target(data);
            model.params = NaiveLastParams{y.back()};
            model.preprocess = fit_preprocessor(data);
            break;
        }
        case ForecasterKind::SeasonalNaive: {
            if (spec.period == 0) throw ForecastError(ForecastErrc::InvalidArgument, "period must be positive");
            auto y = checked_target(data);
            if (y.size() < spec.period) {
                throw ForecastError(ForecastErrc::InsufficientHistory, "fewer rows than one season");
            }
            model.params = SeasonalNaiveParams{{y.end() - spec.period, y.end()}};
            model.preprocess = fit_preprocessor(data);
            break;
        }
        case ForecasterKind::AutoRegressive: {
            if (spec.order == 0) throw ForecastError(ForecastErrc::InvalidArgument, "AR order must be positive");
            model.params = fit_autoregressive(checked_target(data), spec.order);
            model.preprocess = fit_preprocessor(data);
            break;
        }
        case ForecasterKind::NearestCentroid: {
            model.preprocess = fit_preprocessor(data, {spec.class_column});
            model.params = fit_centroids(spec, data, model.preprocess);
            break;
        }
    }
    return model;
}

std::vector<double> forecast_series(const ForecastModel& model, std::span<const double> history, std::size_t horizon) {
    if (model.kind() == ForecasterKind::NearestCentroid) {
        throw ForecastError(ForecastErrc::InvalidArgument, "classification model cannot forecast a series");
    }
    const auto need = model.required_history();
    if (history.size() < need) {
        throw ForecastError(ForecastErrc::InsufficientContext,
                            "need " + std::to_string(need) + " trailing values, have " + std::to_string(history.size()));
    }
    std::vector<double> out;
    out.reserve(horizon);
    switch (model.kind()) {
        case ForecasterKind::NaiveLast:
            out.assign(horizon, history.back());
            break;
        case ForecasterKind::SeasonalNaive: {
            const auto base = history.size() - need;
            for (std::size_t h = 0; h < horizon; ++h) out.push_back(history[base + h % need]);
            break;
        }
        case ForecasterKind::AutoRegressive: {
            const auto& ar = std::get<AutoRegressiveParams>(model.params);
            std::vector<double> window(history.end() - static_cast<std::ptrdiff_t>(need), history.end());
            for (std::size_t h = 0; h < horizon; ++h) {
                double next = ar.intercept;
                for (std::size_t i = 0; i < need; ++i) next += ar.coefficients[i] * window[window.size() - 1 - i];
                out.push_back(next);
                window.push_back(next);
            }
            break;
        }
        case ForecasterKind::NearestCentroid:
            break;
    }
    return out;
}

std::vector<std::string> classify(const ForecastModel& model, const Dataset& data) {
    const auto* nc = std::get_if<NearestCentroidParams>(&model.params);
    if (nc == nullptr) throw ForecastError(ForecastErrc::InvalidArgument, "regression model cannot classify");
    auto features = apply_preprocessor(model.preprocess, data);
    std::vector<std::string> out;
    out.reserve(data.rows());
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < nc->centroids.size(); ++k) {
            double d = 0.0;
            for (Eigen::Index c = 0; c < features.cols(); ++c) {
                double diff = features(r, c) - nc->centroids[k][static_cast<std::size_t>(c)];
                d += diff * diff;
            }
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        out.push_back(nc->labels[best]);
    }
    return out;
}

Prediction predict(const ForecastModel& model, const Dataset& context, std::size_t horizon) {
    if (model.kind() == ForecasterKind::NearestCentroid) {
        const auto n = context.rows();
        const auto take = (horizon == 0 || horizon > n) ? n : horizon;
        return classify(model, context.slice(n - take, n));
    }
    Dataset ctx = context;
    ctx.target = model.target;
    auto y = ctx.target_values();
    for (double v : y) {
        if (is_missing(v)) throw ForecastError(ForecastErrc::InvalidArgument, "missing target value in context");
    }
    return forecast_series(model, y, horizon);
}

}  // namespace wfl::forecast
