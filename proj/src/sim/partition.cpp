#include "wfl/sim/partition.hpp"

#include <cmath>

#include "wfl/sim/error.hpp"
#include "wfl/sim/weather.hpp"

namespace wfl::sim {

Partition partition(const forecast::Dataset& data, std::size_t k, double holdout_fraction) {
    if (k == 0) throw SimError(SimErrc::TooFewRows, "need at least one shard");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
        throw SimError(SimErrc::InvalidConfig, "holdout fraction must be in (0, 1)");
    }
    const std::size_t n = data.rows();
    const auto body = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - holdout_fraction) * (1.0 + 1e-12)));
    if (body >= n || body / k < kMinSeriesHours) {
        throw SimError(SimErrc::TooFewRows, std::to_string(n) + " rows cannot give " + std::to_string(k) +
                                                " shards of 48 rows plus a holdout");
    }

    Partition out;
    out.holdout_begin = body;
    out.holdout = data.slice(body, n);
    const std::size_t base = body / k, extra = body % k;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t len = base + (i < extra ? 1 : 0);
        out.shards.push_back(data.slice(begin, begin + len));
        begin += len;
    }
    return out;
}

}  // namespace wfl::sim
