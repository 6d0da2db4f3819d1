#include "wfl/ledger/types.hpp"

#include "wfl/common/sha256.hpp"

namespace wfl::ledger {

const char* to_string(LedgerErrc code) {
    switch (code) {
        case LedgerErrc::InvalidParams: return "InvalidParams";
        case LedgerErrc::Unauthorized: return "Unauthorized";
        case LedgerErrc::DuplicateAccount: return "DuplicateAccount";
        case LedgerErrc::DuplicateCid: return "DuplicateCid";
        case LedgerErrc::UnknownModel: return "UnknownModel";
        case LedgerErrc::SelfVote: return "SelfVote";
        case LedgerErrc::AlreadyVoted: return "AlreadyVoted";
        case LedgerErrc::VotingClosed: return "VotingClosed";
        case LedgerErrc::InvalidScore: return "InvalidScore";
        case LedgerErrc::EmptyVoteSet: return "EmptyVoteSet";
        case LedgerErrc::ZeroTotalReputation: return "ZeroTotalReputation";
        case LedgerErrc::Reentrant: return "Reentrant";
        case LedgerErrc::MalformedState: return "MalformedState";
    }
    return "Unknown";
}

AccountId AccountId::from_label(std::string_view label) { return AccountId(sha256(as_bytes(label))); }

AccountId AccountId::parse(std::string_view hex) {
    if (hex.size() != 64) throw std::invalid_argument("account id must be 64 hex digits");
    auto raw = from_hex(hex);
    std::array<std::uint8_t, 32> b{};
    std::copy(raw.begin(), raw.end(), b.begin());
    return AccountId(b);
}

const char* to_string(Role role) {
    switch (role) {
        case Role::User: return "user";
        case Role::Client: return "client";
        case Role::Admin: return "admin";
        case Role::Owner: return "owner";
    }
    return "unknown";
}

std::optional<Role> parse_role(std::string_view text) {
    if (text == "user") return Role::User;
    if (text == "client") return Role::Client;
    if (text == "admin") return Role::Admin;
    if (text == "owner") return Role::Owner;
    return std::nullopt;
}

void LedgerParams::validate() const {
    if (vote_eligibility_min > quorum_reputation) {
        throw LedgerError(LedgerErrc::InvalidParams, "vote_eligibility_min exceeds quorum_reputation");
    }
    if (quorum_reputation == 0) {
        throw LedgerError(LedgerErrc::InvalidParams, "quorum_reputation must be positive");
    }
    if (reject_threshold_bp > kScoreScaleBp) {
        throw LedgerError(LedgerErrc::InvalidParams, "reject_threshold_bp exceeds 10000");
    }
}

const char* to_string(ModelStatus status) {
    switch (status) {
        case ModelStatus::Open: return "Open";
        case ModelStatus::Finalized: return "Finalized";
        case ModelStatus::Primary: return "Primary";
        case ModelStatus::Rejected: return "Rejected";
    }
    return "Unknown";
}

const char* to_string(ModelKind kind) {
    return kind == ModelKind::Regression ? "regression" : "classification";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) {
    if (text == "regression") return ModelKind::Regression;
    if (text == "classification") return ModelKind::Classification;
    return std::nullopt;
}

unsigned __int128 ModelRecord::counted_reputation() const {
    unsigned __int128 total = 0;
    for (const auto& v : votes) total += v.voter_reputation_at_cast;
    return total;
}

const char* to_string(EventType type) {
    switch (type) {
        case EventType::AdminAdded: return "AdminAdded";
        case EventType::ClientAdded: return "ClientAdded";
        case EventType::ModelSubmitted: return "ModelSubmitted";
        case EventType::ScoreCast: return "ScoreCast";
        case EventType::ModelFinalized: return "ModelFinalized";
        case EventType::ModelPromoted: return "ModelPromoted";
        case EventType::ModelRejected: return "ModelRejected";
        case EventType::ReputationChanged: return "ReputationChanged";
        case EventType::AccessDenied: return "AccessDenied";
    }
    return "Unknown";
}

const Account* LedgerState::find_account(const AccountId& id) const {
    auto it = accounts.find(id);
    return it == accounts.end() ? nullptr : &it->second;
}

const ModelRecord* LedgerState::find_model(ModelId id) const {
    auto it = models.find(id);
    return it == models.end() ? nullptr : &it->second;
}

}  // namespace wfl::ledger
