#include "wfl/forecast/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "wfl/forecast/error.hpp"

namespace wfl::forecast {

Dataset impute_missing(const Dataset& data) {
    data.validate();
    Dataset out = data;
    for (auto& col : out.numeric) {
        double sum = 0.0;
        std::size_t observed = 0;
        for (double v : col.values) {
            if (!is_missing(v)) {
                sum += v;
                ++observed;
            }
        }
        if (col.values.empty()) continue;
        if (observed == 0) throw ForecastError(ForecastErrc::AllMissingColumn, col.name);
        const double mean = sum / static_cast<double>(observed);
        std::optional<double> last;
        for (auto& v : col.values) {
            if (is_missing(v)) {
                v = last.value_or(mean);
            } else {
                last = v;
            }
        }
    }
    for (auto& col : out.categorical) {
        for (auto& v : col.values) {
            if (!v) v = kUnknownLabel;
        }
    }
    return out;
}

std::optional<std::size_t> CategoricalLayout::index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
}

std::size_t PreprocessStats::feature_width() const {
    std::size_t w = numeric.size();
    for (const auto& c : categorical) w += c.labels.size();
    return w;
}

PreprocessStats fit_preprocessor(const Dataset& train, const std::set<std::string>& exclude) {
    if (train.rows() == 0) throw ForecastError(ForecastErrc::EmptyTrainingSet, "no training rows");
    train.validate();
    PreprocessStats stats;
    const double n = static_cast<double>(train.rows());
    for (const auto& col : train.numeric) {
        if (exclude.contains(col.name)) continue;
        double sum = 0.0;
        for (double v : col.values) {
            if (is_missing(v)) throw ForecastError(ForecastErrc::InvalidArgument, "missing value in " + col.name + "; impute first");
            sum += v;
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (double v : col.values) ss += (v - mean) * (v - mean);
        double sd = std::sqrt(ss / n);
        if (!(sd > 0.0)) sd = 1.0;
        stats.numeric.push_back({col.name, mean, sd});
    }
    for (const auto& col : train.categorical) {
        if (exclude.contains(col.name)) continue;
        CategoricalLayout layout{col.name, {}};
        for (const auto& v : col.values) {
            const std::string& label = v ? *v : std::string(kUnknownLabel);
            if (!layout.index_of(label)) layout.labels.push_back(label);
        }
        stats.categorical.push_back(std::move(layout));
    }
    return stats;
}

Eigen::MatrixXd apply_preprocessor(const PreprocessStats& stats, const Dataset& data) {
    const auto rows = static_cast<Eigen::Index>(data.rows());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(stats.feature_width()));
    Eigen::Index col_index = 0;
    for (const auto& cs : stats.numeric) {
        const auto* col = data.find_numeric(cs.name);
        if (col == nullptr || col->values.size() != data.rows()) {
            throw ForecastError(ForecastErrc::ArityMismatch, "missing numeric column " + cs.name);
        }
        for (Eigen::Index r = 0; r < rows; ++r) {
            double v = col->values[static_cast<std::size_t>(r)];
            if (is_missing(v)) throw ForecastError(ForecastErrc::InvalidArgument, "missing value in " + cs.name);
            out(r, col_index) = (v - cs.mean) / cs.stddev;
        }
        ++col_index;
    }
    for (const auto& layout : stats.categorical) {
        const auto* col = data.find_categorical(layout.name);
        if (col == nullptr || col->values.size() != data.rows()) {
            throw ForecastError(ForecastErrc::ArityMismatch, "missing categorical column " + layout.name);
        }
        const auto unknown = layout.index_of(kUnknownLabel);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const auto& v = col->values[static_cast<std::size_t>(r)];
            auto idx = layout.index_of(v ? *v : std::string(kUnknownLabel));
            if (!idx) idx = unknown;
            if (idx) out(r, col_index + static_cast<Eigen::Index>(*idx)) = 1.0;
        }
        col_index += static_cast<Eigen::Index>(layout.labels.size());
    }
    return out;
}

TemporalSplit temporal_split(const Dataset& data, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ForecastError(ForecastErrc::InvalidArgument, "train_fraction must lie in (0, 1)");
    }
    const auto n = data.rows();
    if (n < 2) throw ForecastError(ForecastErrc::TooFewRows, "need at least 2 rows, have " + std::to_string(n));
    // Tiny relative slack so 0.29 * 100 lands on 29 rather than 28.999...
    auto cut = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction * (1.0 + 1e-12)));
    if (cut == 0 || cut >= n) {
        throw ForecastError(ForecastErrc::TooFewRows, "split of " + std::to_string(n) + " rows leaves one side empty");
    }
    return {data.slice(0, cut), data.slice(cut, n)};
}

}  // namespace wfl::forecast
