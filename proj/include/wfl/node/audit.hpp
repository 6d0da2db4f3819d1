#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wfl/common/canonical_json.hpp"
#include "wfl/ledger/types.hpp"

namespace wfl::node {

enum class Decision { Allowed, Unauthenticated401, Denied403, Limited429 };

const char* to_string(Decision d);  // "allowed", "unauthenticated-401", "denied-403", "limited-429"

struct AuditRecord {
    double timestamp = 0.0;  // seconds since the Unix epoch
    std::optional<ledger::AccountId> account;
    std::string endpoint;  // "POST /models"
    Decision decision = Decision::Allowed;
    int status = 200;
    std::string detail;
};

Json audit_to_json(const AuditRecord& record);

// Append-only and safe to share between request threads.
class AuditLog {
public:
    void append(AuditRecord record);
    std::vector<AuditRecord> snapshot() const;
    std::size_t size() const;
    std::size_t count(Decision d) const;

private:
    mutable std::mutex mu_;
    std::vector<AuditRecord> records_;
};

}  // namespace wfl::node
