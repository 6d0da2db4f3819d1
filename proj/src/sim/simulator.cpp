#include "wfl/sim/simulator.hpp"

#include <stdlib.h>

#include <algorithm>
#include <cmath>

#include "wfl/common/rng.hpp"
#include "wfl/forecast/codec.hpp"
#include "wfl/forecast/error.hpp"
#include "wfl/forecast/evaluation.hpp"
#include "wfl/ledger/codec.hpp"
#include "wfl/sim/error.hpp"
#include "wfl/sim/partition.hpp"
#include "wfl/sim/weather.hpp"

namespace wfl::sim {

namespace {

using ledger::AccountId;
using ledger::ModelId;
using ledger::ModelStatus;
using ledger::Reputation;
using ledger::ScoreBp;

// Independent RNG stream tags.
enum : std::uint64_t { kWeatherStream = 1, kWindowStream = 2, kPoisonStream = 3 };

class ScratchDir {
public:
    ScratchDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "wfl-sim-XXXXXX").string();
        if (!::mkdtemp(tmpl.data())) throw SimError(SimErrc::InvalidConfig, "cannot create scratch directory");
        path_ = tmpl;
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

std::size_t split_point(std::size_t n, double holdout_fraction) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - holdout_fraction) * (1.0 + 1e-12)));
}

std::size_t min_training_rows(const forecast::ForecasterSpec& spec) {
    switch (spec.kind) {
        case forecast::ForecasterKind::AutoRegressive: return 2 * spec.order + 8;
        case forecast::ForecasterKind::SeasonalNaive: return spec.period;
        default: return 24;
    }
}

void poison(forecast::ForecastModel& model, double noise_scale, Rng& rng) {
    std::visit(
        [&](auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, forecast::NaiveLastParams>) {
                p.last_value += rng.normal(0.0, noise_scale);
            } else if constexpr (std::is_same_v<T, forecast::SeasonalNaiveParams>) {
                for (double& v : p.season) v += rng.normal(0.0, noise_scale);
            } else if constexpr (std::is_same_v<T, forecast::AutoRegressiveParams>) {
                p.intercept += rng.normal(0.0, noise_scale);
                for (double& v : p.coefficients) v += rng.normal(0.0, noise_scale);
            } else {
                for (auto& c : p.centroids)
                    for (double& v : c) v += rng.normal(0.0, noise_scale);
            }
        },
        model.params);
}

Reputation reputation_of(const ledger::Ledger& l, const AccountId& id) {
    const auto* a = l.state().find_account(id);
    return a ? a->reputation : 0;
}

template <typename T>
Json opt(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

const char* to_string(AgentKind kind) {
    switch (kind) {
        case AgentKind::Admin: return "admin";
        case AgentKind::Honest: return "honest";
        case AgentKind::Poisoner: return "poisoner";
        case AgentKind::Sybil: return "sybil";
        case AgentKind::FrontRunner: return "front_runner";
        case AgentKind::Colluder: return "colluder";
    }
    return "unknown";
}

const Agent* WorldState::find_agent(const AccountId& id) const {
    for (const auto& a : agents)
        if (a.id == id) return &a;
    return nullptr;
}

WorldState make_world(const ScenarioConfig& config, const std::filesystem::path& store_root) {
    config.validate();
    const AccountId owner = AccountId::from_label("owner");
    WorldState w(config, ledger::Ledger::genesis(owner, config.ledger));
    w.store = std::make_unique<cas::BlobStore>(store_root);

    auto add = [&](std::string label, AgentKind kind) -> Agent& {
        Agent a;
        a.id = AccountId::from_label(label);
        a.label = std::move(label);
        a.kind = kind;
        return w.agents.emplace_back(std::move(a));
    };
    for (std::uint32_t i = 0; i < config.num_admins; ++i) add("admin-" + std::to_string(i), AgentKind::Admin);
    for (std::uint32_t i = 0; i < config.num_honest_clients; ++i) add("honest-" + std::to_string(i), AgentKind::Honest);
    std::uint32_t counters[4] = {};
    for (const auto& spec : config.adversaries) {
        const std::string n = std::to_string(counters[spec.index()]++);
        if (const auto* p = std::get_if<Poisoner>(&spec)) {
            add("poisoner-" + n, AgentKind::Poisoner).noise_scale = p->noise_scale;
        } else if (const auto* s = std::get_if<SybilSwarm>(&spec)) {
            for (std::uint32_t j = 0; j < s->identity_count; ++j)
                add("sybil-" + n + "-" + std::to_string(j), AgentKind::Sybil).fixed_score_bp = s->target_score_bp;
        } else if (const auto* f = std::get_if<FrontRunner>(&spec)) {
            add("frontrunner-" + n, AgentKind::FrontRunner).fixed_score_bp = f->score_bp;
        } else if (const auto* c = std::get_if<Colluder>(&spec)) {
            for (std::uint32_t j = 0; j < c->partner_count; ++j)
                add("colluder-" + n + "-" + std::to_string(j), AgentKind::Colluder).fixed_score_bp = c->target_score_bp;
        }
    }

    const AccountId registrar = w.agents.front().id;
    for (const auto& a : w.agents) {
        if (a.kind == AgentKind::Admin) {
            w.ledger.add_admin(owner, a.id);
        } else {
            w.ledger.add_client(registrar, a.id);
        }
    }

    std::vector<std::size_t> holders;
    for (std::size_t i = 0; i < w.agents.size(); ++i)
        if (w.agents[i].kind != AgentKind::Sybil) holders.push_back(i);

    w.series = generate_weather(derive_seed(config.seed, {kWeatherStream}), config.series_length, config.weather);
    Partition parts = partition(w.series, holders.size(), config.holdout_fraction);
    w.holdout_begin = parts.holdout_begin;
    for (std::size_t s = 0; s < holders.size(); ++s) {
        Agent& a = w.agents[holders[s]];
        a.shard = s;
        const std::size_t rows = parts.shards[s].rows();
        const std::size_t lh = split_point(rows, config.local_holdout_fraction);
        if (lh == 0 || lh >= rows) throw SimError(SimErrc::InvalidConfig, "local holdout leaves an empty slice");
        if (lh < min_training_rows(config.forecaster)) {
            throw SimError(SimErrc::TooFewRows, "shard training slice too short for the forecaster");
        }
        w.local_holdout_begin.push_back(lh);
        w.shards.push_back(std::move(parts.shards[s]));
        if (a.kind != AgentKind::Admin) w.submitters.push_back(holders[s]);
    }
    return w;
}

RoundRecord run_round(WorldState& w) {
    const ScenarioConfig& cfg = w.config;
    RoundRecord rec;
    rec.round = w.round;
    rec.attack_phase = w.attacking();

    const std::size_t submitter_index = w.submitters[w.round % w.submitters.size()];
    const Agent& submitter = w.agents[submitter_index];
    rec.submitter = submitter.label;
    rec.submitter_kind = submitter.kind;
    rec.submitter_reputation_before = reputation_of(w.ledger, submitter.id);
    rec.poisoned = rec.attack_phase && submitter.kind == AgentKind::Poisoner;

    try {
        const std::size_t shard = *submitter.shard;
        const std::size_t train_rows = w.local_holdout_begin[shard];
        Rng window_rng(derive_seed(cfg.seed, {kWindowStream, w.round}));
        const std::size_t min_len = std::min(train_rows, std::max(train_rows / 2, min_training_rows(cfg.forecaster)));
        const std::size_t len = min_len + window_rng.below(train_rows - min_len + 1);
        const std::size_t start = window_rng.below(train_rows - len + 1);

        forecast::ForecastModel model = forecast::fit_forecaster(cfg.forecaster, w.shards[shard].slice(start, start + len));
        if (rec.poisoned) {
            Rng poison_rng(derive_seed(cfg.seed, {kPoisonStream, w.round}));
            poison(model, submitter.noise_scale, poison_rng);
        }

        const cas::Cid cid = w.store->put(forecast::encode_model(model));
        rec.cid = cid.str();
        auto submitted = w.ledger.apply(ledger::SubmitModel{submitter.id, cid, model.ledger_kind()});
        if (!submitted.accepted) throw ledger::LedgerError(*submitted.error, "submission refused");
        const ModelId mid = *submitted.model_id;
        rec.model_id = mid;

        const forecast::ForecastModel candidate = forecast::decode_model(w.store->get(cid));
        const ledger::ModelKind kind = candidate.ledger_kind();

        std::map<std::size_t, ScoreBp> honest_scores;
        auto honest_score = [&](std::size_t agent_index) {
            auto it = honest_scores.find(agent_index);
            if (it != honest_scores.end()) return it->second;
            const std::size_t s = *w.agents[agent_index].shard;
            ScoreBp score = 0;
            try {
                auto report = forecast::evaluate_rolling(candidate, w.shards[s], w.local_holdout_begin[s], cfg.eval_horizon);
                forecast::MetricReport reference;
                if (kind == ledger::ModelKind::Regression) {
                    auto ref = w.reference_cache.find(s);
                    if (ref == w.reference_cache.end()) {
                        ref = w.reference_cache
                                  .emplace(s, forecast::evaluate_naive_reference(w.shards[s], w.local_holdout_begin[s],
                                                                                 cfg.eval_horizon))
                                  .first;
                    }
                    reference = ref->second;
                }
                score = forecast::skill_score(report, reference, kind);
            } catch (const forecast::ForecastError&) {
                score = 0;  // a model the voter cannot evaluate gets no credit
            }
            honest_scores.emplace(agent_index, score);
            return score;
        };

        auto forced = [&](const Agent& a) {
            return a.kind == AgentKind::Sybil || (rec.attack_phase && a.kind != AgentKind::Admin && a.kind != AgentKind::Honest &&
                                                  a.kind != AgentKind::Poisoner);
        };

        struct Tally {
            std::uint32_t accepted = 0, denied = 0;
        };
        auto cast_all = [&](ledger::Ledger& l, const std::vector<std::size_t>& order, Tally& tally) {
            for (std::size_t idx : order) {
                if (l.state().find_model(mid)->status != ModelStatus::Open) break;
                const Agent& a = w.agents[idx];
                const bool fixed = forced(a);
                if (!fixed && reputation_of(l, a.id) < cfg.ledger.vote_eligibility_min) continue;
                const ScoreBp score = fixed ? a.fixed_score_bp : honest_score(idx);
                auto res = l.apply(ledger::CastScore{a.id, mid, score});
                ++(res.accepted ? tally.accepted : tally.denied);
            }
        };

        std::vector<std::size_t> front, sybils, natural;
        for (std::size_t i = 0; i < w.agents.size(); ++i) {
            if (i == submitter_index) continue;
            const Agent& a = w.agents[i];
            if (a.kind == AgentKind::Sybil) {
                sybils.push_back(i);
            } else {
                natural.push_back(i);
                if (rec.attack_phase && a.kind == AgentKind::FrontRunner) front.push_back(i);
            }
        }
        std::vector<std::size_t> natural_order = sybils;
        natural_order.insert(natural_order.end(), natural.begin(), natural.end());
        std::vector<std::size_t> order = front;
        order.insert(order.end(), sybils.begin(), sybils.end());
        for (std::size_t i : natural)
            if (std::find(front.begin(), front.end(), i) == front.end()) order.push_back(i);

        std::optional<ledger::Ledger> fork;
        if (!front.empty()) fork.emplace(w.ledger);

        Tally tally;
        cast_all(w.ledger, order, tally);
        rec.votes_accepted = tally.accepted;
        rec.votes_denied = tally.denied;

        if (fork) {
            Tally ignored;
            cast_all(*fork, natural_order, ignored);
            const auto& with = *w.ledger.state().find_model(mid);
            FrontRunRecord fr;
            for (const auto& v : with.votes) {
                const Agent* a = w.find_agent(v.voter);
                if (a && a->kind == AgentKind::FrontRunner) fr.attacker_reputation += v.voter_reputation_at_cast;
            }
            fr.counted_reputation = static_cast<std::uint64_t>(with.counted_reputation());
            fr.score_front_run = with.final_score_bp;
            fr.score_natural = fork->state().find_model(mid)->final_score_bp;
            if (fr.score_front_run && fr.score_natural) {
                const std::int64_t delta =
                    static_cast<std::int64_t>(*fr.score_front_run) - static_cast<std::int64_t>(*fr.score_natural);
                fr.delta_bp = delta;
                const auto lhs = static_cast<unsigned __int128>(delta < 0 ? -delta : delta) * fr.counted_reputation;
                const auto rhs = static_cast<unsigned __int128>(fr.attacker_reputation) * ledger::kScoreScaleBp;
                fr.within_bound = lhs <= rhs;
            }
            rec.front_run = fr;
        }
    } catch (const ledger::LedgerError& e) {
        rec.failure = e.what();
    } catch (const cas::CasError& e) {
        rec.failure = e.what();
    } catch (const forecast::ForecastError& e) {
        rec.failure = e.what();
    } catch (const DecodeError& e) {
        rec.failure = e.what();
    }

    if (rec.model_id) {
        const auto* m = w.ledger.state().find_model(*rec.model_id);
        rec.status = m->status;
        rec.final_score_bp = m->final_score_bp;
        rec.promoted = m->status == ModelStatus::Primary;
    }
    rec.submitter_reputation_after = reputation_of(w.ledger, submitter.id);

    const auto primary_kind = cfg.forecaster.kind == forecast::ForecasterKind::NearestCentroid
                                  ? ledger::ModelKind::Classification
                                  : ledger::ModelKind::Regression;
    rec.primary_model_id = w.ledger.state().primary_of(primary_kind);
    if (rec.primary_model_id && primary_kind == ledger::ModelKind::Regression) {
        auto [it, fresh] = w.holdout_mae_cache.try_emplace(*rec.primary_model_id);
        if (fresh) {
            try {
                const auto& record = *w.ledger.state().find_model(*rec.primary_model_id);
                auto model = forecast::decode_model(w.store->get(record.cid));
                it->second = forecast::evaluate_rolling(model, w.series, w.holdout_begin, cfg.eval_horizon).mae;
            } catch (const std::exception&) {
                it->second = std::nullopt;
            }
        }
        rec.primary_holdout_mae = it->second;
    }

    ++w.round;
    return rec;
}

namespace {

SimulationReport run_once(const ScenarioConfig& config) {
    ScratchDir dir;
    WorldState w = make_world(config, dir.path());
    SimulationReport report;
    report.config = config;
    auto& out = report.attacks;
    const std::uint32_t total = config.warmup_rounds + config.rounds;
    for (std::uint32_t r = 0; r < total; ++r) {
        RoundRecord rec = run_round(w);
        if (rec.poisoned && rec.model_id) {
            ++out.poisoned_submissions;
            if (rec.status == ModelStatus::Rejected) ++out.poisoned_rejections;
            if (rec.promoted) ++out.poisoned_promotions;
            if (rec.submitter_reputation_after < rec.submitter_reputation_before) ++out.poisoned_reputation_decreases;
        }
        if (rec.front_run) {
            const auto& fr = *rec.front_run;
            if (fr.attacker_reputation > 0) ++out.front_run_rounds;
            if (!fr.within_bound) ++out.front_run_bound_violations;
            if (fr.delta_bp) {
                const std::int64_t mag = *fr.delta_bp < 0 ? -*fr.delta_bp : *fr.delta_bp;
                out.reordering_score_delta_bp = std::max(out.reordering_score_delta_bp.value_or(0), mag);
            }
        }
        report.rounds.push_back(std::move(rec));
    }
    for (const auto& a : w.agents) report.final_reputation[a.label] = reputation_of(w.ledger, a.id);
    report.state_digest = to_hex(w.ledger.digest());
    report.governance_digest = to_hex(w.ledger.governance_digest());
    report.final_state = w.ledger.state();
    return report;
}

}  // namespace

SimulationReport run_scenario(const ScenarioConfig& config) {
    SimulationReport report = run_once(config);
    const auto is_sybil = [](const AdversarySpec& a) { return std::holds_alternative<SybilSwarm>(a); };
    if (std::any_of(config.adversaries.begin(), config.adversaries.end(), is_sybil)) {
        ScenarioConfig without = config;
        std::erase_if(without.adversaries, is_sybil);
        report.attacks.sybil_digest_delta = run_once(without).governance_digest != report.governance_digest;
    }
    return report;
}

Json report_to_json(const SimulationReport& report) {
    Json rounds = Json::array();
    for (const auto& r : report.rounds) {
        Json front_run = nullptr;
        if (r.front_run) {
            const auto& f = *r.front_run;
            front_run = {{"attacker_reputation", f.attacker_reputation},
                         {"counted_reputation", f.counted_reputation},
                         {"score_front_run_bp", opt(f.score_front_run)},
                         {"score_natural_bp", opt(f.score_natural)},
                         {"delta_bp", opt(f.delta_bp)},
                         {"within_bound", f.within_bound}};
        }
        rounds.push_back({
            {"round", r.round},
            {"phase", r.attack_phase ? "attack" : "warmup"},
            {"submitter", r.submitter},
            {"submitter_kind", to_string(r.submitter_kind)},
            {"poisoned", r.poisoned},
            {"model_id", opt(r.model_id)},
            {"cid", opt(r.cid)},
            {"status", r.status ? Json(ledger::to_string(*r.status)) : Json(nullptr)},
            {"final_score_bp", opt(r.final_score_bp)},
            {"promoted", r.promoted},
            {"submitter_reputation_before", r.submitter_reputation_before},
            {"submitter_reputation_after", r.submitter_reputation_after},
            {"votes_accepted", r.votes_accepted},
            {"votes_denied", r.votes_denied},
            {"primary_model_id", opt(r.primary_model_id)},
            {"primary_holdout_mae", opt(r.primary_holdout_mae)},
            {"front_run", std::move(front_run)},
            {"failure", opt(r.failure)},
        });
    }
    const auto& a = report.attacks;
    return Json{
        {"config", config_to_json(report.config)},
        {"seed", report.config.seed},
        {"rounds", std::move(rounds)},
        {"attack_outcomes",
         {{"poisoned_submissions", a.poisoned_submissions},
          {"poisoned_rejections", a.poisoned_rejections},
          {"poisoned_promotions", a.poisoned_promotions},
          {"poisoned_reputation_decreases", a.poisoned_reputation_decreases},
          {"sybil_digest_delta", opt(a.sybil_digest_delta)},
          {"reordering_score_delta_bp", opt(a.reordering_score_delta_bp)},
          {"front_run_rounds", a.front_run_rounds},
          {"front_run_bound_violations", a.front_run_bound_violations}}},
        {"final_reputation", Json(report.final_reputation)},
        {"digests", {{"state", report.state_digest}, {"governance", report.governance_digest}}},
    };
}

std::string report_json(const SimulationReport& report) { return canonical_dump(report_to_json(report)); }

}  // namespace wfl::sim
