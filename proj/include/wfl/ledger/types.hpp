#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wfl/cas/cid.hpp"
#include "wfl/common/bytes.hpp"

namespace wfl::ledger {

using cas::Cid;
using ModelId = std::uint64_t;
using Reputation = std::uint64_t;
using ScoreBp = std::uint32_t;

inline constexpr ScoreBp kScoreScaleBp = 10000;

enum class LedgerErrc {
    InvalidParams,
    Unauthorized,
    DuplicateAccount,
    DuplicateCid,
    UnknownModel,
    SelfVote,
    AlreadyVoted,
    VotingClosed,
    InvalidScore,
    EmptyVoteSet,
    ZeroTotalReputation,
    Reentrant,
    MalformedState,
};

const char* to_string(LedgerErrc code);

class LedgerError : public std::runtime_error {
public:
    LedgerError(LedgerErrc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}
    LedgerErrc code() const { return code_; }
    const std::string& detail() const { return detail_; }

private:
    LedgerErrc code_;
    std::string detail_;
};

/// Opaque 32-byte account identifier; text form is 64 lowercase hex digits.
class AccountId {
public:
    AccountId() = default;
    explicit AccountId(const std::array<std::uint8_t, 32>& bytes) : bytes_(bytes) {}

    /// Deterministic id for a human-readable name (SHA-256 of the label).
    static AccountId from_label(std::string_view label);
    /// Throws std::invalid_argument unless `hex` is 64 hex digits.
    static AccountId parse(std::string_view hex);

    const std::array<std::uint8_t, 32>& bytes() const { return bytes_; }
    std::string hex() const { return to_hex(bytes_); }

    auto operator<=>(const AccountId&) const = default;

private:
    std::array<std::uint8_t, 32> bytes_{};
};

// Ordered by authority: User < Client < Admin < Owner.
enum class Role : std::uint8_t { User = 0, Client = 1, Admin = 2, Owner = 3 };

const char* to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct Account {
    AccountId id;
    Role role = Role::User;
    Reputation reputation = 0;

    bool operator==(const Account&) const = default;
};

struct LedgerParams {
    Reputation vote_eligibility_min = 10;
    Reputation quorum_reputation = 100;
    ScoreBp reject_threshold_bp = 2500;
    Reputation promotion_bonus = 10;
    Reputation participation_bonus = 1;
    Reputation rejection_penalty = 5;
    Reputation admin_initial_reputation = 100;

    /// Throws LedgerError{InvalidParams}.
    void validate() const;

    bool operator==(const LedgerParams&) const = default;
};

struct Vote {
    AccountId voter;
    ScoreBp score_bp = 0;
    Reputation voter_reputation_at_cast = 0;
    std::uint64_t sequence_index = 0;

    bool operator==(const Vote&) const = default;
};

enum class ModelStatus : std::uint8_t { Open = 0, Finalized = 1, Primary = 2, Rejected = 3 };
enum class ModelKind : std::uint8_t { Regression = 0, Classification = 1 };

inline constexpr std::size_t kModelKindCount = 2;

const char* to_string(ModelStatus status);
const char* to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view text);

struct ModelRecord {
    ModelId model_id = 0;
    Cid cid;
    AccountId submitter;
    ModelKind kind = ModelKind::Regression;
    ModelStatus status = ModelStatus::Open;
    std::vector<Vote> votes;
    std::optional<ScoreBp> final_score_bp;
    std::uint64_t submitted_at = 0;

    /// Sum of voter_reputation_at_cast over recorded votes.
    unsigned __int128 counted_reputation() const;

    bool operator==(const ModelRecord&) const = default;
};

enum class EventType : std::uint8_t {
    AdminAdded,
    ClientAdded,
    ModelSubmitted,
    ScoreCast,
    ModelFinalized,
    ModelPromoted,
    ModelRejected,
    ReputationChanged,
    AccessDenied,
};

const char* to_string(EventType type);

// One flat record per event kind; fields that a kind does not use stay empty.
struct Event {
    EventType type = EventType::AccessDenied;
    std::uint64_t sequence_index = 0;
    std::optional<AccountId> account;
    std::optional<ModelId> model_id;
    std::optional<ScoreBp> score_bp;
    Reputation old_reputation = 0;
    Reputation new_reputation = 0;
    std::optional<ModelId> demoted;  // ModelPromoted: the replaced incumbent
    std::string reason;              // AccessDenied

    bool operator==(const Event&) const = default;
};

struct LedgerState {
    LedgerParams params;
    std::map<AccountId, Account> accounts;
    std::map<ModelId, ModelRecord> models;
    std::array<std::optional<ModelId>, kModelKindCount> primary{};
    std::uint64_t next_sequence = 0;
    ModelId next_model_id = 0;
    std::vector<Event> event_log;

    const Account* find_account(const AccountId& id) const;
    const ModelRecord* find_model(ModelId id) const;
    std::optional<ModelId> primary_of(ModelKind kind) const { return primary[static_cast<std::size_t>(kind)]; }
};

}  // namespace wfl::ledger
