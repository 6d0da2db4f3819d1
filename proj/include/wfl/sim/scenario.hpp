#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wfl/common/canonical_json.hpp"
#include "wfl/forecast/model.hpp"
#include "wfl/ledger/types.hpp"
#include "wfl/sim/weather.hpp"

namespace wfl::sim {

// Submits models with Gaussian noise added to every fitted parameter.
struct Poisoner {
    double noise_scale = 50.0;
    bool operator==(const Poisoner&) const = default;
};

// Fresh client identities with no data; they vote `target_score_bp` on everything.
struct SybilSwarm {
    std::uint32_t identity_count = 1;
    ledger::ScoreBp target_score_bp = 10000;
    bool operator==(const SybilSwarm&) const = default;
};

// Honest submitter whose votes go to the front of every round's vote order.
struct FrontRunner {
    ledger::ScoreBp score_bp = 0;
    bool operator==(const FrontRunner&) const = default;
};

// Data-holding clients that submit honest models and all vote a fixed score.
struct Colluder {
    std::uint32_t partner_count = 1;
    ledger::ScoreBp target_score_bp = 10000;
    bool operator==(const Colluder&) const = default;
};

using AdversarySpec = std::variant<Poisoner, SybilSwarm, FrontRunner, Colluder>;

const char* adversary_type(const AdversarySpec& spec);

// Adversaries behave honestly (clean models, honest votes in natural order)
// for the first `warmup_rounds` rounds, then attack for `rounds` more.
// Sybil identities never change behavior.
struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::uint32_t num_admins = 1;
    std::uint32_t num_honest_clients = 4;
    std::uint32_t warmup_rounds = 0;
    std::uint32_t rounds = 10;
    std::uint32_t series_length = 2400;
    double holdout_fraction = 0.2;
    double local_holdout_fraction = 0.2;
    std::uint32_t eval_horizon = 6;
    forecast::ForecasterSpec forecaster;
    ledger::LedgerParams ledger;
    WeatherParams weather;
    std::vector<AdversarySpec> adversaries;

    /// Throws SimError{InvalidConfig}.
    void validate() const;
    bool operator==(const ScenarioConfig&) const = default;
};

/// TOML keys mirror the field names above; adversaries are an array of
/// tables with a `type` key (poisoner, sybil_swarm, front_runner, colluder).
/// Unknown keys are rejected. Throws SimError{InvalidConfig}.
ScenarioConfig parse_scenario(std::string_view toml_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

Json config_to_json(const ScenarioConfig& config);

}  // namespace wfl::sim
