#pragma once

// Brute-force metric definitions written independently of the library:
// long-double accumulation, explicit confusion matrix, precision/recall form of F1.

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace wfl::testing {

struct OracleRegression {
    long double mae, rmse, mape;
};

inline OracleRegression oracle_regression(const std::vector<double>& y, const std::vector<double>& yhat) {
    long double abs_total = 0, sq_total = 0, pct_total = 0;
    std::size_t pct_count = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        long double diff = static_cast<long double>(yhat[i]) - static_cast<long double>(y[i]);
        abs_total += std::fabs(diff);
        sq_total += diff * diff;
        if (std::fabs(static_cast<long double>(y[i])) > 1e-8L) {
            pct_total += std::fabs(diff) / std::fabs(static_cast<long double>(y[i]));
            pct_count += 1;
        }
    }
    long double n = static_cast<long double>(y.size());
    return {abs_total / n, std::sqrt(sq_total / n), pct_total / static_cast<long double>(pct_count)};
}

struct OracleClassification {
    double accuracy, f1_macro;
};

inline OracleClassification oracle_classification(const std::vector<std::string>& truth,
                                                  const std::vector<std::string>& pred) {
    std::set<std::string> classes(truth.begin(), truth.end());
    std::set<std::string> all(truth.begin(), truth.end());
    all.insert(pred.begin(), pred.end());
    std::vector<std::string> labels(all.begin(), all.end());
    std::vector<std::vector<int>> confusion(labels.size(), std::vector<int>(labels.size(), 0));
    auto idx = [&](const std::string& l) {
        return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
    };
    int hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        confusion[idx(truth[i])][idx(pred[i])] += 1;
        if (truth[i] == pred[i]) ++hits;
    }
    double f1_total = 0;
    for (const auto& c : classes) {
        auto k = idx(c);
        double tp = confusion[k][k];
        double predicted = 0, actual = 0;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            predicted += confusion[j][k];
            actual += confusion[k][j];
        }
        double precision = predicted > 0 ? tp / predicted : 0;
        double recall = actual > 0 ? tp / actual : 0;
        f1_total += (precision + recall) > 0 ? 2 * precision * recall / (precision + recall) : 0;
    }
    return {static_cast<double>(hits) / static_cast<double>(truth.size()),
            f1_total / static_cast<double>(classes.size())};
}

inline bool close_rel(long double a, long double b, long double rel = 1e-9L) {
    long double scale = std::max({std::fabs(a), std::fabs(b), 1e-300L});
    return std::fabs(a - b) <= rel * scale;
}

}  // namespace wfl::testing
