#pragma once

#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wfl/forecast/dataset.hpp"

namespace wfl::forecast {

inline constexpr const char* kUnknownLabel = "unknown";

/// Forward-fill numeric gaps, then fill leading gaps with the column mean of
/// observed values. Categorical gaps become "unknown". Throws AllMissingColumn.
Dataset impute_missing(const Dataset& data);

struct ColumnStats {
    std::string name;
    double mean = 0.0;
    double stddev = 1.0;  // population; constant columns get 1
    bool operator==(const ColumnStats&) const = default;
};

struct CategoricalLayout {
    std::string name;
    std::vector<std::string> labels;  // first-appearance order; index = encoded value
    std::optional<std::size_t> index_of(const std::string& label) const;
    bool operator==(const CategoricalLayout&) const = default;
};

struct PreprocessStats {
    std::vector<ColumnStats> numeric;
    std::vector<CategoricalLayout> categorical;

    /// Width of the standardized matrix: numeric columns plus one-hot slots.
    std::size_t feature_width() const;
    bool operator==(const PreprocessStats&) const = default;
};

/// Statistics from training rows only. Columns named in `exclude` are skipped.
PreprocessStats fit_preprocessor(const Dataset& train, const std::set<std::string>& exclude = {});

/// z-scores for numeric columns followed by one-hot blocks; a label missing
/// from the layout falls back to "unknown" if that label was seen in training
/// and to an all-zero block otherwise. Throws ArityMismatch when `data` lacks a
/// fitted column, InvalidArgument on missing numeric cells.
Eigen::MatrixXd apply_preprocessor(const PreprocessStats& stats, const Dataset& data);

struct TemporalSplit {
    Dataset train;
    Dataset test;
};

/// First floor(n * fraction) rows train, the rest test; no shuffling.
/// Throws TooFewRows for n < 2 or a split that leaves either side empty.
TemporalSplit temporal_split(const Dataset& data, double train_fraction);

}  // namespace wfl::forecast
