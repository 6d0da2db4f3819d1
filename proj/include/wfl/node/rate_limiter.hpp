#pragma once

#include <map>
#include <mutex>
#include <string>

namespace wfl::node {

struct RateLimit {
    double capacity = 30.0;
    double refill_per_second = 1.0;
};

// Per-token token bucket. A token's bucket starts full on first use. Time
// only moves forward: an earlier `now` than the last refill adds nothing.
class RateLimiter {
public:
    explicit RateLimiter(RateLimit limit = {}) : limit_(limit) {}

    /// Consumes one unit if available.
    bool try_acquire(const std::string& token, double now_seconds);

    /// Current level after refilling to `now_seconds`, without consuming.
    double level(const std::string& token, double now_seconds);

    const RateLimit& limit() const { return limit_; }

private:
    struct Bucket {
        double level;
        double last;
    };
    Bucket& refill(const std::string& token, double now);

    RateLimit limit_;
    std::mutex mu_;
    std::map<std::string, Bucket> buckets_;
};

}  // namespace wfl::node
