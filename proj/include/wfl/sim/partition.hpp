#pragma once

#include <cstddef>
#include <vector>

#include "wfl/forecast/dataset.hpp"

namespace wfl::sim {

struct Partition {
    std::vector<forecast::Dataset> shards;
    forecast::Dataset holdout;
    std::size_t holdout_begin = 0;  // row index of the holdout in the source
};

/// Holdout = trailing `holdout_fraction` of rows; the rest is cut into k
/// contiguous blocks in time order, the first (rows % k) one row longer.
/// Throws SimError{TooFewRows} when a shard would have fewer than 48 rows.
Partition partition(const forecast::Dataset& data, std::size_t k, double holdout_fraction);

}  // namespace wfl::sim
