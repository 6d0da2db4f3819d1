#include "wfl/ledger/codec.hpp"

#include <sstream>

namespace wfl::ledger {

namespace {

constexpr std::string_view kMagic = "WFL1";

void put_account_id(ByteWriter& w, const AccountId& id) { w.raw(id.bytes()); }

AccountId get_account_id(ByteReader& r) {
    std::array<std::uint8_t, 32> b{};
    auto raw = r.raw(32);
    std::copy(raw.begin(), raw.end(), b.begin());
    return AccountId(b);
}

Cid get_cid(ByteReader& r) {
    Digest d{};
    auto raw = r.raw(32);
    std::copy(raw.begin(), raw.end(), d.begin());
    return Cid(d);
}

template <typename T>
void put_opt_u64(ByteWriter& w, const std::optional<T>& v) {
    w.boolean(v.has_value());
    if (v) w.u64(*v);
}

void put_event(ByteWriter& w, const Event& e) {
    w.u8(static_cast<std::uint8_t>(e.type));
    w.u64(e.sequence_index);
    w.boolean(e.account.has_value());
    if (e.account) put_account_id(w, *e.account);
    put_opt_u64(w, e.model_id);
    w.boolean(e.score_bp.has_value());
    if (e.score_bp) w.u32(*e.score_bp);
    w.u64(e.old_reputation);
    w.u64(e.new_reputation);
    put_opt_u64(w, e.demoted);
    w.str(e.reason);
}

Event get_event(ByteReader& r) {
    Event e;
    auto type = r.u8();
    if (type > static_cast<std::uint8_t>(EventType::AccessDenied)) throw DecodeError("bad event type");
    e.type = static_cast<EventType>(type);
    e.sequence_index = r.u64();
    if (r.boolean()) e.account = get_account_id(r);
    if (r.boolean()) e.model_id = r.u64();
    if (r.boolean()) e.score_bp = r.u32();
    e.old_reputation = r.u64();
    e.new_reputation = r.u64();
    if (r.boolean()) e.demoted = r.u64();
    e.reason = r.str();
    return e;
}

}  // namespace

Bytes encode_state(const LedgerState& s, EventLogMode mode) {
    ByteWriter w;
    w.raw(kMagic);
    const auto& p = s.params;
    w.u64(p.vote_eligibility_min);
    w.u64(p.quorum_reputation);
    w.u32(p.reject_threshold_bp);
    w.u64(p.promotion_bonus);
    w.u64(p.participation_bonus);
    w.u64(p.rejection_penalty);
    w.u64(p.admin_initial_reputation);
    w.u32(kScoreScaleBp);

    w.u64(s.next_sequence);
    w.u64(s.next_model_id);

    w.u32(static_cast<std::uint32_t>(s.accounts.size()));
    for (const auto& [id, a] : s.accounts) {
        put_account_id(w, id);
        w.u8(static_cast<std::uint8_t>(a.role));
        w.u64(a.reputation);
    }

    w.u32(static_cast<std::uint32_t>(s.models.size()));
    for (const auto& [id, m] : s.models) {
        w.u64(id);
        w.raw(m.cid.digest());
        put_account_id(w, m.submitter);
        w.u8(static_cast<std::uint8_t>(m.kind));
        w.u8(static_cast<std::uint8_t>(m.status));
        w.boolean(m.final_score_bp.has_value());
        if (m.final_score_bp) w.u32(*m.final_score_bp);
        w.u64(m.submitted_at);
        w.u32(static_cast<std::uint32_t>(m.votes.size()));
        for (const auto& v : m.votes) {
            put_account_id(w, v.voter);
            w.u32(v.score_bp);
            w.u64(v.voter_reputation_at_cast);
            w.u64(v.sequence_index);
        }
    }

    for (const auto& slot : s.primary) put_opt_u64(w, slot);

    if (mode == EventLogMode::Include) {
        w.u32(static_cast<std::uint32_t>(s.event_log.size()));
        for (const auto& e : s.event_log) put_event(w, e);
    } else {
        w.u32(0);
    }
    return std::move(w).take();
}

LedgerState decode_state(ByteView bytes) {
    try {
        ByteReader r(bytes);
        auto magic = r.raw(4);
        if (std::string_view(reinterpret_cast<const char*>(magic.data()), 4) != kMagic) {
            throw DecodeError("bad magic");
        }
        LedgerState s;
        auto& p = s.params;
        p.vote_eligibility_min = r.u64();
        p.quorum_reputation = r.u64();
        p.reject_threshold_bp = r.u32();
        p.promotion_bonus = r.u64();
        p.participation_bonus = r.u64();
        p.rejection_penalty = r.u64();
        p.admin_initial_reputation = r.u64();
        if (r.u32() != kScoreScaleBp) throw DecodeError("unexpected score scale");

        s.next_sequence = r.u64();
        s.next_model_id = r.u64();

        auto n_accounts = r.u32();
        r.expect_items(n_accounts, 41);
        std::size_t owners = 0;
        for (std::uint32_t i = 0; i < n_accounts; ++i) {
            Account a;
            a.id = get_account_id(r);
            auto role = r.u8();
            if (role > static_cast<std::uint8_t>(Role::Owner)) throw DecodeError("bad role");
            a.role = static_cast<Role>(role);
            owners += a.role == Role::Owner;
            a.reputation = r.u64();
            if (!s.accounts.empty() && !(s.accounts.rbegin()->first < a.id)) throw DecodeError("accounts not ascending");
            s.accounts.emplace(a.id, a);
        }
        if (owners != 1) throw DecodeError("state must have exactly one owner");

        auto n_models = r.u32();
        r.expect_items(n_models, 87);
        for (std::uint32_t i = 0; i < n_models; ++i) {
            ModelRecord m;
            m.model_id = r.u64();
            m.cid = get_cid(r);
            m.submitter = get_account_id(r);
            auto kind = r.u8();
            if (kind >= kModelKindCount) throw DecodeError("bad model kind");
            m.kind = static_cast<ModelKind>(kind);
            auto status = r.u8();
            if (status > static_cast<std::uint8_t>(ModelStatus::Rejected)) throw DecodeError("bad model status");
            m.status = static_cast<ModelStatus>(status);
            if (r.boolean()) m.final_score_bp = r.u32();
            if (m.final_score_bp.has_value() != (m.status != ModelStatus::Open)) {
                throw DecodeError("final score present iff model is not open");
            }
            m.submitted_at = r.u64();
            auto n_votes = r.u32();
            r.expect_items(n_votes, 52);
            for (std::uint32_t j = 0; j < n_votes; ++j) {
                Vote v;
                v.voter = get_account_id(r);
                v.score_bp = r.u32();
                if (v.score_bp > kScoreScaleBp) throw DecodeError("vote score out of range");
                v.voter_reputation_at_cast = r.u64();
                v.sequence_index = r.u64();
                if (!s.accounts.contains(v.voter)) throw DecodeError("vote from unknown account");
                m.votes.push_back(v);
            }
            if (!s.models.empty() && s.models.rbegin()->first >= m.model_id) throw DecodeError("models not ascending");
            if (m.model_id >= s.next_model_id) throw DecodeError("model id beyond next_model_id");
            s.models.emplace(m.model_id, std::move(m));
        }

        for (std::size_t k = 0; k < kModelKindCount; ++k) {
            if (r.boolean()) {
                auto id = r.u64();
                const auto* m = s.find_model(id);
                if (m == nullptr || m->status != ModelStatus::Primary || static_cast<std::size_t>(m->kind) != k) {
                    throw DecodeError("primary pointer does not reference a primary model of its kind");
                }
                s.primary[k] = id;
            }
        }

        auto n_events = r.u32();
        r.expect_items(n_events, 31);
        s.event_log.reserve(n_events);
        for (std::uint32_t i = 0; i < n_events; ++i) s.event_log.push_back(get_event(r));
        if (!r.done()) throw DecodeError("trailing bytes");
        try {
            s.params.validate();
        } catch (const LedgerError& e) {
            throw DecodeError(e.what());
        }
        return s;
    } catch (const DecodeError& e) {
        throw LedgerError(LedgerErrc::MalformedState, e.what());
    }
}

Json event_to_json(const Event& e) {
    Json j;
    j["type"] = to_string(e.type);
    j["seq"] = e.sequence_index;
    if (e.account) j["account"] = e.account->hex();
    if (e.model_id) j["model_id"] = *e.model_id;
    if (e.score_bp) j["score_bp"] = *e.score_bp;
    switch (e.type) {
        case EventType::ReputationChanged:
            j["old"] = e.old_reputation;
            j["new"] = e.new_reputation;
            break;
        case EventType::AdminAdded:
        case EventType::ScoreCast:
            j["reputation"] = e.new_reputation;
            break;
        case EventType::ModelPromoted:
            if (e.demoted) j["demoted"] = *e.demoted;
            break;
        case EventType::AccessDenied:
            j["reason"] = e.reason;
            break;
        default:
            break;
    }
    return j;
}

std::string events_to_jsonl(const std::vector<Event>& events) {
    std::string out;
    for (const auto& e : events) {
        out += canonical_dump(event_to_json(e));
        out.push_back('\n');
    }
    return out;
}

Json model_to_json(const ModelRecord& m) {
    Json j;
    j["model_id"] = m.model_id;
    j["cid"] = m.cid.str();
    j["submitter"] = m.submitter.hex();
    j["kind"] = to_string(m.kind);
    j["status"] = to_string(m.status);
    j["final_score_bp"] = m.final_score_bp ? Json(*m.final_score_bp) : Json(nullptr);
    j["submitted_at"] = m.submitted_at;
    Json votes = Json::array();
    for (const auto& v : m.votes) {
        votes.push_back({{"voter", v.voter.hex()},
                         {"score_bp", v.score_bp},
                         {"reputation", v.voter_reputation_at_cast},
                         {"seq", v.sequence_index}});
    }
    j["votes"] = votes;
    return j;
}

Json account_to_json(const Account& a) {
    return {{"id", a.id.hex()}, {"role", to_string(a.role)}, {"reputation", a.reputation}};
}

}  // namespace wfl::ledger
