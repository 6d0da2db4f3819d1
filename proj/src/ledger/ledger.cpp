#include "wfl/ledger/ledger.hpp"

#include <algorithm>

#include "wfl/ledger/codec.hpp"
#include "wfl/ledger/weighted_score.hpp"

namespace wfl::ledger {

namespace {

Reputation saturating_sub(Reputation value, Reputation delta) { return value > delta ? value - delta : 0; }

Reputation saturating_add(Reputation value, Reputation delta) {
    Reputation out = value + delta;
    return out < value ? std::numeric_limits<Reputation>::max() : out;
}

struct NotifyScope {
    explicit NotifyScope(bool& flag) : flag_(flag) { flag_ = true; }
    ~NotifyScope() { flag_ = false; }
    bool& flag_;
};

}  // namespace

Ledger::Ledger(LedgerState state) : state_(std::move(state)) {
    state_.params.validate();
    for (const auto& [id, model] : state_.models) {
        if (!cids_.insert(model.cid).second) {
            throw LedgerError(LedgerErrc::MalformedState, "duplicate cid " + model.cid.str());
        }
    }
}

Ledger Ledger::genesis(const AccountId& owner, const LedgerParams& params) {
    params.validate();
    LedgerState s;
    s.params = params;
    s.accounts.emplace(owner, Account{owner, Role::Owner, params.admin_initial_reputation});
    return Ledger(std::move(s));
}

void Ledger::guard_reentry() const {
    if (notifying_) throw LedgerError(LedgerErrc::Reentrant, "transaction submitted during event notification");
}

const Account& Ledger::require_account(const AccountId& id, const char* action) const {
    const auto* acct = state_.find_account(id);
    if (acct == nullptr) throw LedgerError(LedgerErrc::Unauthorized, std::string("unregistered caller may not ") + action);
    return *acct;
}

std::vector<Event> Ledger::commit(std::vector<Event> events) {
    ++state_.next_sequence;
    state_.event_log.insert(state_.event_log.end(), events.begin(), events.end());
    if (!listeners_.empty()) {
        NotifyScope scope(notifying_);
        for (const auto& l : listeners_) l(*this, events);
    }
    return events;
}

Event Ledger::add_admin(const AccountId& caller, const AccountId& new_admin) {
    guard_reentry();
    const auto& owner = require_account(caller, "add admins");
    if (owner.role != Role::Owner) throw LedgerError(LedgerErrc::Unauthorized, "only the owner may add admins");
    if (state_.accounts.contains(new_admin)) throw LedgerError(LedgerErrc::DuplicateAccount, new_admin.hex());

    state_.accounts.emplace(new_admin, Account{new_admin, Role::Admin, state_.params.admin_initial_reputation});
    Event ev;
    ev.type = EventType::AdminAdded;
    ev.sequence_index = state_.next_sequence;
    ev.account = new_admin;
    ev.new_reputation = state_.params.admin_initial_reputation;
    return commit({ev}).front();
}

Event Ledger::add_client(const AccountId& caller, const AccountId& new_client) {
    guard_reentry();
    const auto& registrar = require_account(caller, "add clients");
    if (registrar.role != Role::Owner && registrar.role != Role::Admin) {
        throw LedgerError(LedgerErrc::Unauthorized, "only the owner or an admin may add clients");
    }
    if (state_.accounts.contains(new_client)) throw LedgerError(LedgerErrc::DuplicateAccount, new_client.hex());

    // The registered account is the argument, never the caller.
    state_.accounts.emplace(new_client, Account{new_client, Role::Client, 0});
    Event ev;
    ev.type = EventType::ClientAdded;
    ev.sequence_index = state_.next_sequence;
    ev.account = new_client;
    return commit({ev}).front();
}

Ledger::Submission Ledger::submit_model(const AccountId& caller, const Cid& cid, ModelKind kind) {
    guard_reentry();
    const auto& submitter = require_account(caller, "submit models");
    if (submitter.role != Role::Client) throw LedgerError(LedgerErrc::Unauthorized, "only clients may submit models");
    if (cids_.contains(cid)) throw LedgerError(LedgerErrc::DuplicateCid, cid.str());

    ModelRecord rec;
    rec.model_id = state_.next_model_id;
    rec.cid = cid;
    rec.submitter = caller;
    rec.kind = kind;
    rec.submitted_at = state_.next_sequence;

    ++state_.next_model_id;
    cids_.insert(cid);
    auto id = rec.model_id;
    state_.models.emplace(id, std::move(rec));

    Event ev;
    ev.type = EventType::ModelSubmitted;
    ev.sequence_index = state_.next_sequence;
    ev.account = caller;
    ev.model_id = id;
    return {id, commit({ev}).front()};
}

std::vector<Event> Ledger::cast_score(const AccountId& caller, ModelId model_id, ScoreBp score_bp) {
    guard_reentry();
    const auto& params = state_.params;
    auto mit = state_.models.find(model_id);
    if (mit == state_.models.end()) throw LedgerError(LedgerErrc::UnknownModel, std::to_string(model_id));
    ModelRecord& model = mit->second;
    if (model.status != ModelStatus::Open) {
        throw LedgerError(LedgerErrc::VotingClosed, "model " + std::to_string(model_id) + " is " + to_string(model.status));
    }
    const auto& voter = require_account(caller, "vote");
    if (voter.role != Role::Admin && voter.role != Role::Client) {
        throw LedgerError(LedgerErrc::Unauthorized, std::string("role ") + to_string(voter.role) + " may not vote");
    }
    if (voter.reputation < params.vote_eligibility_min) {
        throw LedgerError(LedgerErrc::Unauthorized, "reputation " + std::to_string(voter.reputation) +
                                                        " below eligibility minimum " +
                                                        std::to_string(params.vote_eligibility_min));
    }
    if (caller == model.submitter) throw LedgerError(LedgerErrc::SelfVote, caller.hex());
    bool voted = std::any_of(model.votes.begin(), model.votes.end(), [&](const Vote& v) { return v.voter == caller; });
    if (voted) throw LedgerError(LedgerErrc::AlreadyVoted, caller.hex());
    if (score_bp > kScoreScaleBp) throw LedgerError(LedgerErrc::InvalidScore, std::to_string(score_bp));

    // Checks done; everything below is effects only.
    const auto seq = state_.next_sequence;
    std::vector<Event> events;
    model.votes.push_back(Vote{caller, score_bp, voter.reputation, seq});
    {
        Event ev;
        ev.type = EventType::ScoreCast;
        ev.sequence_index = seq;
        ev.account = caller;
        ev.model_id = model_id;
        ev.score_bp = score_bp;
        ev.new_reputation = voter.reputation;
        events.push_back(ev);
    }

    if (model.counted_reputation() >= params.quorum_reputation) {
        std::vector<WeightedScore> ws;
        ws.reserve(model.votes.size());
        for (const auto& v : model.votes) ws.push_back({v.voter_reputation_at_cast, v.score_bp});
        const ScoreBp final_score = weighted_final_score(ws);
        model.final_score_bp = final_score;
        model.status = ModelStatus::Finalized;

        Event fin;
        fin.type = EventType::ModelFinalized;
        fin.sequence_index = seq;
        fin.account = model.submitter;
        fin.model_id = model_id;
        fin.score_bp = final_score;
        events.push_back(fin);

        auto& slot = state_.primary[static_cast<std::size_t>(model.kind)];
        Account& submitter = state_.accounts.at(model.submitter);
        const Reputation old_rep = submitter.reputation;

        if (final_score < params.reject_threshold_bp) {
            model.status = ModelStatus::Rejected;
            submitter.reputation = saturating_sub(old_rep, params.rejection_penalty);
            Event rej;
            rej.type = EventType::ModelRejected;
            rej.sequence_index = seq;
            rej.account = model.submitter;
            rej.model_id = model_id;
            rej.score_bp = final_score;
            events.push_back(rej);
        } else {
            bool improves = !slot.has_value() || final_score > *state_.models.at(*slot).final_score_bp;
            if (improves) {
                Event pro;
                pro.type = EventType::ModelPromoted;
                pro.sequence_index = seq;
                pro.account = model.submitter;
                pro.model_id = model_id;
                pro.score_bp = final_score;
                if (slot) {
                    state_.models.at(*slot).status = ModelStatus::Finalized;
                    pro.demoted = *slot;
                }
                model.status = ModelStatus::Primary;
                slot = model_id;
                submitter.reputation = saturating_add(old_rep, params.promotion_bonus);
                events.push_back(pro);
            } else {
                submitter.reputation = saturating_add(old_rep, params.participation_bonus);
            }
        }

        if (submitter.reputation != old_rep) {
            Event rep;
            rep.type = EventType::ReputationChanged;
            rep.sequence_index = seq;
            rep.account = model.submitter;
            rep.model_id = model_id;
            rep.old_reputation = old_rep;
            rep.new_reputation = submitter.reputation;
            events.push_back(rep);
        }
    }
    return commit(std::move(events));
}

ApplyResult Ledger::apply(const Transaction& tx) {
    ApplyResult result;
    try {
        std::visit(
            [&](const auto& t) {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, AddAdmin>) {
                    result.events = {add_admin(t.caller, t.new_admin)};
                } else if constexpr (std::is_same_v<T, AddClient>) {
                    result.events = {add_client(t.caller, t.new_client)};
                } else if constexpr (std::is_same_v<T, SubmitModel>) {
                    auto sub = submit_model(t.caller, t.cid, t.kind);
                    result.model_id = sub.model_id;
                    result.events = {sub.event};
                } else {
                    result.model_id = t.model_id;
                    result.events = cast_score(t.caller, t.model_id, t.score_bp);
                }
            },
            tx);
        result.accepted = true;
    } catch (const LedgerError& e) {
        result.accepted = false;
        result.error = e.code();
        Event denied;
        denied.type = EventType::AccessDenied;
        denied.sequence_index = state_.next_sequence;
        denied.account = std::visit([](const auto& t) { return t.caller; }, tx);
        if (const auto* cs = std::get_if<CastScore>(&tx)) denied.model_id = cs->model_id;
        denied.reason = e.what();
        state_.event_log.push_back(denied);
        result.events = {denied};
    }
    return result;
}

Digest Ledger::digest() const { return sha256(encode_state(state_, EventLogMode::Exclude)); }

Digest Ledger::governance_digest() const {
    ByteWriter w;
    w.raw(std::string_view("WFG1"));
    const auto& p = state_.params;
    for (auto v : {p.vote_eligibility_min, p.quorum_reputation, static_cast<Reputation>(p.reject_threshold_bp),
                   p.promotion_bonus, p.participation_bonus, p.rejection_penalty, p.admin_initial_reputation}) {
        w.u64(v);
    }
    w.u32(static_cast<std::uint32_t>(state_.models.size()));
    for (const auto& [id, m] : state_.models) {
        w.u64(id);
        w.raw(m.cid.digest());
        w.raw(m.submitter.bytes());
        w.u8(static_cast<std::uint8_t>(m.kind));
        w.u8(static_cast<std::uint8_t>(m.status));
        w.boolean(m.final_score_bp.has_value());
        w.u32(m.final_score_bp.value_or(0));
        w.u32(static_cast<std::uint32_t>(m.votes.size()));
        for (const auto& v : m.votes) {
            w.raw(v.voter.bytes());
            w.u32(v.score_bp);
            w.u64(v.voter_reputation_at_cast);
        }
    }
    for (const auto& slot : state_.primary) {
        w.boolean(slot.has_value());
        w.u64(slot.value_or(0));
    }
    return sha256(w.bytes());
}

}  // namespace wfl::ledger
