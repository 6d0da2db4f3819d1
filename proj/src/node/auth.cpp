#include "wfl/node/auth.hpp"

#include <set>

#include "wfl/common/canonical_json.hpp"
#include "wfl/common/files.hpp"

namespace wfl::node {

namespace {
[[noreturn]] void invalid(const std::string& detail) { throw NodeError(NodeErrc::InvalidConfig, detail); }
}  // namespace

const char* to_string(NodeErrc code) {
    switch (code) {
        case NodeErrc::InvalidConfig: return "InvalidConfig";
        case NodeErrc::BindFailure: return "BindFailure";
    }
    return "Unknown";
}

TokenTable::TokenTable(std::vector<ApiToken> tokens) : tokens_(std::move(tokens)) {
    std::set<ledger::AccountId> accounts;
    std::size_t owners = 0;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        const auto& t = tokens_[i];
        if (t.token.empty()) invalid("empty token");
        if (!by_token_.emplace(t.token, i).second) invalid("duplicate token");
        if (!accounts.insert(t.account).second) invalid("account " + t.account.hex() + " has two tokens");
        owners += t.role == ledger::Role::Owner;
    }
    if (owners > 1) invalid("more than one owner token");
}

const ApiToken* TokenTable::find(std::string_view token) const {
    auto it = by_token_.find(token);
    return it == by_token_.end() ? nullptr : &tokens_[it->second];
}

std::optional<ledger::AccountId> TokenTable::owner() const {
    for (const auto& t : tokens_)
        if (t.role == ledger::Role::Owner) return t.account;
    return std::nullopt;
}

TokenTable parse_tokens(std::string_view json_text) {
    Json doc = Json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("tokens") || !doc["tokens"].is_array()) {
        invalid("token file must be a JSON object with a \"tokens\" array");
    }
    std::vector<ApiToken> out;
    for (const auto& entry : doc["tokens"]) {
        if (!entry.is_object()) invalid("token entries must be objects");
        for (const auto& [key, _] : entry.items()) {
            if (key != "token" && key != "role" && key != "account" && key != "label") invalid("unknown token key " + key);
        }
        ApiToken t;
        if (!entry.contains("token") || !entry["token"].is_string()) invalid("token entry needs a \"token\" string");
        t.token = entry["token"].get<std::string>();
        if (!entry.contains("role") || !entry["role"].is_string()) invalid("token entry needs a \"role\" string");
        auto role = ledger::parse_role(entry["role"].get<std::string>());
        if (!role) invalid("unknown role " + entry["role"].get<std::string>());
        t.role = *role;
        if (entry.contains("account") == entry.contains("label")) invalid("token entry needs exactly one of account, label");
        try {
            t.account = entry.contains("account") ? ledger::AccountId::parse(entry["account"].get<std::string>())
                                                  : ledger::AccountId::from_label(entry["label"].get<std::string>());
        } catch (const std::exception& e) {
            invalid(std::string("bad account: ") + e.what());
        }
        out.push_back(std::move(t));
    }
    return TokenTable(std::move(out));
}

TokenTable load_tokens(const std::filesystem::path& path) {
    Bytes raw;
    try {
        raw = read_file(path);
    } catch (const std::exception& e) {
        invalid("cannot read token file " + path.string() + ": " + e.what());
    }
    return parse_tokens(std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size()));
}

}  // namespace wfl::node
