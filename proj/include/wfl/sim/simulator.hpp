#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wfl/cas/blob_store.hpp"
#include "wfl/common/canonical_json.hpp"
#include "wfl/forecast/metrics.hpp"
#include "wfl/ledger/ledger.hpp"
#include "wfl/sim/scenario.hpp"

namespace wfl::sim {

enum class AgentKind { Admin, Honest, Poisoner, Sybil, FrontRunner, Colluder };

const char* to_string(AgentKind kind);

struct Agent {
    std::string label;
    ledger::AccountId id;
    AgentKind kind = AgentKind::Honest;
    std::optional<std::size_t> shard;  // index into WorldState::shards
    ledger::ScoreBp fixed_score_bp = 0;  // Sybil, FrontRunner, Colluder
    double noise_scale = 0.0;            // Poisoner
};

/// Everything a scenario mutates between rounds.
struct WorldState {
    WorldState(ScenarioConfig c, ledger::Ledger l) : config(std::move(c)), ledger(std::move(l)) {}

    ScenarioConfig config;
    ledger::Ledger ledger;
    std::unique_ptr<cas::BlobStore> store;
    std::vector<Agent> agents;  // registration order, which is also the natural vote order
    std::vector<forecast::Dataset> shards;
    std::vector<std::size_t> local_holdout_begin;  // per shard
    forecast::Dataset series;                      // the full generated series
    std::size_t holdout_begin = 0;                 // global holdout = series rows from here on
    std::vector<std::size_t> submitters;           // agent indices, round-robin order
    std::uint32_t round = 0;

    std::map<std::size_t, forecast::MetricReport> reference_cache;  // shard -> NaiveLast report
    std::map<ledger::ModelId, std::optional<double>> holdout_mae_cache;

    bool attacking() const { return round >= config.warmup_rounds; }
    const Agent* find_agent(const ledger::AccountId& id) const;
};

/// Genesis: owner, admins, then clients (honest first, adversaries in configuration
/// order), registered through the ledger. Data-holding agents get one shard
/// each. Blobs go to a store rooted at `store_root`. Throws SimError.
WorldState make_world(const ScenarioConfig& config, const std::filesystem::path& store_root);

struct FrontRunRecord {
    ledger::Reputation attacker_reputation = 0;  // counted front-run weight
    std::uint64_t counted_reputation = 0;        // total counted weight with front-running
    std::optional<ledger::ScoreBp> score_front_run;
    std::optional<ledger::ScoreBp> score_natural;
    std::optional<std::int64_t> delta_bp;
    bool within_bound = true;
};

struct RoundRecord {
    std::uint32_t round = 0;
    bool attack_phase = false;
    std::string submitter;
    AgentKind submitter_kind = AgentKind::Honest;
    bool poisoned = false;
    std::optional<ledger::ModelId> model_id;
    std::optional<std::string> cid;
    std::optional<ledger::ModelStatus> status;
    std::optional<ledger::ScoreBp> final_score_bp;
    bool promoted = false;
    ledger::Reputation submitter_reputation_before = 0;
    ledger::Reputation submitter_reputation_after = 0;
    std::uint32_t votes_accepted = 0;
    std::uint32_t votes_denied = 0;
    std::optional<ledger::ModelId> primary_model_id;
    std::optional<double> primary_holdout_mae;
    std::optional<FrontRunRecord> front_run;
    std::optional<std::string> failure;
};

struct AttackOutcomes {
    std::uint32_t poisoned_submissions = 0;
    std::uint32_t poisoned_rejections = 0;
    std::uint32_t poisoned_promotions = 0;
    std::uint32_t poisoned_reputation_decreases = 0;
    std::optional<bool> sybil_digest_delta;  // set when the scenario has a SybilSwarm
    std::optional<std::int64_t> reordering_score_delta_bp;  // largest |delta| over front-run rounds
    std::uint32_t front_run_rounds = 0;                     // rounds where a front-run vote counted
    std::uint32_t front_run_bound_violations = 0;
};

struct SimulationReport {
    ScenarioConfig config;
    std::vector<RoundRecord> rounds;
    AttackOutcomes attacks;
    std::map<std::string, ledger::Reputation> final_reputation;  // by agent label
    std::string state_digest;
    std::string governance_digest;
    ledger::LedgerState final_state;  // not part of the JSON report
};

/// One retrain/submit/vote cycle. Ledger, store and forecaster errors end the
/// round as a recorded failure.
RoundRecord run_round(WorldState& world);

/// generate -> partition -> rounds, using a scratch store that is removed
/// afterwards. Throws SimError{InvalidConfig}.
SimulationReport run_scenario(const ScenarioConfig& config);

Json report_to_json(const SimulationReport& report);
std::string report_json(const SimulationReport& report);

}  // namespace wfl::sim
