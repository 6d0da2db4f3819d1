#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

#include "wfl/cas/blob_store.hpp"
#include "wfl/ledger/ledger.hpp"
#include "wfl/node/audit.hpp"
#include "wfl/node/auth.hpp"
#include "wfl/node/rate_limiter.hpp"

namespace wfl::node {

struct Request {
    std::string method;  // "GET", "POST"
    std::string path;    // without the query string
    std::map<std::string, std::string> query;
    std::optional<std::string> authorization;  // raw Authorization header
    std::string content_type;
    std::string body;
};

struct Response {
    int status = 200;
    std::string body;  // canonical JSON
};

using Clock = std::function<double()>;  // seconds since the Unix epoch

double system_clock_seconds();

/// Transport-independent request handling.
///
/// Every request passes, in order: bearer-token lookup (401), the token's rate
/// limiter (429), then the endpoint's minimum role (403). Each request leaves
/// exactly one audit record whatever the outcome. Ledger mutations take an
/// exclusive lock and go through Ledger::apply, so refused transactions never
/// change state; reads share the lock.
class NodeService {
public:
    NodeService(ledger::Ledger ledger, cas::BlobStore& store, TokenTable tokens, RateLimit limit = {},
                Clock clock = system_clock_seconds);

    Response handle(const Request& request);

    /// When set, the encoded ledger state is rewritten after every accepted mutation.
    void persist_to(std::filesystem::path path) { state_path_ = std::move(path); }

    Digest digest() const;
    ledger::LedgerState state() const;
    const AuditLog& audit() const { return audit_; }

private:
    Response dispatch(const Request& request, const ApiToken& caller, std::string& detail);
    Response mutate(const ledger::Transaction& tx, int success_status, std::string& detail);
    void save_locked() const;

    ledger::Ledger ledger_;
    cas::BlobStore& store_;
    TokenTable tokens_;
    RateLimiter limiter_;
    Clock clock_;
    AuditLog audit_;
    mutable std::shared_mutex ledger_mu_;
    std::optional<std::filesystem::path> state_path_;
};

}  // namespace wfl::node
