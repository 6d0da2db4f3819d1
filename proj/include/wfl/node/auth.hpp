#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wfl/ledger/types.hpp"

namespace wfl::node {

enum class NodeErrc { InvalidConfig, BindFailure };

const char* to_string(NodeErrc code);

class NodeError : public std::runtime_error {
public:
    NodeError(NodeErrc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}
    NodeErrc code() const { return code_; }

private:
    NodeErrc code_;
};

struct ApiToken {
    std::string token;
    ledger::AccountId account;
    ledger::Role role = ledger::Role::User;
};

/// Provisioned bearer tokens. Both token -> account and account -> token are
/// one-to-one; duplicates are configuration errors.
class TokenTable {
public:
    TokenTable() = default;
    /// Throws NodeError{InvalidConfig}.
    explicit TokenTable(std::vector<ApiToken> tokens);

    const ApiToken* find(std::string_view token) const;
    const std::vector<ApiToken>& tokens() const { return tokens_; }
    std::optional<ledger::AccountId> owner() const;

private:
    std::vector<ApiToken> tokens_;
    std::map<std::string, std::size_t, std::less<>> by_token_;
};

/// JSON file: {"tokens": [{"token": "...", "role": "client", "account": "<64 hex>"}]}.
/// "label": "<name>" may replace "account" (the id is then SHA-256 of the label).
/// Throws NodeError{InvalidConfig}.
TokenTable load_tokens(const std::filesystem::path& path);
TokenTable parse_tokens(std::string_view json_text);

}  // namespace wfl::node
