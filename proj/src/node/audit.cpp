#include "wfl/node/audit.hpp"

#include <algorithm>

namespace wfl::node {

const char* to_string(Decision d) {
    switch (d) {
        case Decision::Allowed: return "allowed";
        case Decision::Unauthenticated401: return "unauthenticated-401";
        case Decision::Denied403: return "denied-403";
        case Decision::Limited429: return "limited-429";
    }
    return "unknown";
}

Json audit_to_json(const AuditRecord& r) {
    return {{"timestamp", r.timestamp},
            {"account", r.account ? Json(r.account->hex()) : Json(nullptr)},
            {"endpoint", r.endpoint},
            {"decision", to_string(r.decision)},
            {"status", r.status},
            {"detail", r.detail}};
}

void AuditLog::append(AuditRecord record) {
    std::lock_guard lock(mu_);
    records_.push_back(std::move(record));
}

std::vector<AuditRecord> AuditLog::snapshot() const {
    std::lock_guard lock(mu_);
    return records_;
}

std::size_t AuditLog::size() const {
    std::lock_guard lock(mu_);
    return records_.size();
}

std::size_t AuditLog::count(Decision d) const {
    std::lock_guard lock(mu_);
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(), [d](const AuditRecord& r) { return r.decision == d; }));
}

}  // namespace wfl::node
