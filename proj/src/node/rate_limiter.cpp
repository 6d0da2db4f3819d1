#include "wfl/node/rate_limiter.hpp"

#include <algorithm>

namespace wfl::node {

RateLimiter::Bucket& RateLimiter::refill(const std::string& token, double now) {
    auto [it, fresh] = buckets_.try_emplace(token, Bucket{limit_.capacity, now});
    Bucket& b = it->second;
    if (!fresh && now > b.last) {
        b.level = std::min(limit_.capacity, b.level + (now - b.last) * limit_.refill_per_second);
        b.last = now;
    }
    return b;
}

bool RateLimiter::try_acquire(const std::string& token, double now_seconds) {
    std::lock_guard lock(mu_);
    Bucket& b = refill(token, now_seconds);
    if (b.level < 1.0) return false;
    b.level -= 1.0;
    return true;
}

double RateLimiter::level(const std::string& token, double now_seconds) {
    std::lock_guard lock(mu_);
    return refill(token, now_seconds).level;
}

}  // namespace wfl::node
