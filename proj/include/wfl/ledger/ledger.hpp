#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "wfl/common/sha256.hpp"
#include "wfl/ledger/types.hpp"

namespace wfl::ledger {

struct AddAdmin {
    AccountId caller;
    AccountId new_admin;
};

struct AddClient {
    AccountId caller;
    AccountId new_client;
};

struct SubmitModel {
    AccountId caller;
    Cid cid;
    ModelKind kind = ModelKind::Regression;
};

struct CastScore {
    AccountId caller;
    ModelId model_id = 0;
    ScoreBp score_bp = 0;
};

using Transaction = std::variant<AddAdmin, AddClient, SubmitModel, CastScore>;

struct ApplyResult {
    bool accepted = false;
    std::vector<Event> events;  // on rejection: the single AccessDenied event
    std::optional<ModelId> model_id;
    std::optional<LedgerErrc> error;
};

/// The governance contract as a single-writer state machine.
///
/// Every operation validates completely before touching state, so a throwing
/// call leaves the state exactly as it was. `apply` is the transactional entry
/// point: it never throws for contract violations, logging an AccessDenied
/// event instead. Accepted transactions advance `next_sequence` by one.
///
/// Listeners run after a transaction commits. A listener that tries to submit
/// another transaction from inside the notification is refused with Reentrant.
class Ledger {
public:
    using Listener = std::function<void(const Ledger&, const std::vector<Event>&)>;

    explicit Ledger(LedgerState state);

    static Ledger genesis(const AccountId& owner, const LedgerParams& params = {});

    const LedgerState& state() const { return state_; }
    const LedgerParams& params() const { return state_.params; }

    Event add_admin(const AccountId& caller, const AccountId& new_admin);
    Event add_client(const AccountId& caller, const AccountId& new_client);

    struct Submission {
        ModelId model_id;
        Event event;
    };
    Submission submit_model(const AccountId& caller, const Cid& cid, ModelKind kind);

    std::vector<Event> cast_score(const AccountId& caller, ModelId model_id, ScoreBp score_bp);

    ApplyResult apply(const Transaction& tx);

    void subscribe(Listener listener) { listeners_.push_back(std::move(listener)); }

    /// Hash over the canonical encoding of everything except the event log.
    Digest digest() const;

    /// Hash over params, models, votes and primary pointers only. Excludes
    /// the account registry and sequence stamps, so runs that differ only in
    /// rejected traffic or extra registrations compare equal.
    Digest governance_digest() const;

private:
    void guard_reentry() const;
    std::vector<Event> commit(std::vector<Event> events);
    const Account& require_account(const AccountId& id, const char* action) const;

    LedgerState state_;
    std::set<Cid> cids_;
    std::vector<Listener> listeners_;
    bool notifying_ = false;
};

}  // namespace wfl::ledger
