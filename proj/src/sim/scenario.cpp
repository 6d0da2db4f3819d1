#include "wfl/sim/scenario.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "toml.hpp"
#include "wfl/common/files.hpp"
#include "wfl/sim/error.hpp"

namespace wfl::sim {

namespace {

[[noreturn]] void invalid(const std::string& detail) { throw SimError(SimErrc::InvalidConfig, detail); }

// Reads keys out of one table and rejects whatever is left unread.
class TableReader {
public:
    TableReader(const toml::table& table, std::string where) : table_(table), where_(std::move(where)) {}

    template <typename UInt>
    void uint(const char* key, UInt& out) {
        const toml::node* node = take(key);
        if (!node) return;
        auto v = node->value_exact<std::int64_t>();
        if (!v || *v < 0 || static_cast<std::uint64_t>(*v) > std::numeric_limits<UInt>::max()) {
            invalid(name(key) + " must be a non-negative integer in range");
        }
        out = static_cast<UInt>(*v);
    }

    void real(const char* key, double& out) {
        const toml::node* node = take(key);
        if (!node) return;
        auto v = node->value<double>();
        if (!v || !node->is_number()) invalid(name(key) + " must be a number");
        out = *v;
    }

    void text(const char* key, std::string& out) {
        const toml::node* node = take(key);
        if (!node) return;
        auto v = node->value_exact<std::string>();
        if (!v) invalid(name(key) + " must be a string");
        out = *v;
    }

    const toml::node* take(const char* key) {
        seen_.insert(key);
        return table_.get(key);
    }

    void finish() const {
        for (const auto& [k, v] : table_) {
            if (!seen_.count(std::string(k.str()))) invalid("unknown key " + name(std::string(k.str())));
        }
    }

    std::string name(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

private:
    const toml::table& table_;
    std::string where_;
    std::set<std::string> seen_;
};

const toml::table* subtable(TableReader& r, const char* key) {
    const toml::node* node = r.take(key);
    if (!node) return nullptr;
    if (!node->is_table()) invalid(r.name(key) + " must be a table");
    return node->as_table();
}

AdversarySpec read_adversary(const toml::table& t, const std::string& where) {
    TableReader r(t, where);
    std::string type;
    r.text("type", type);
    AdversarySpec spec;
    if (type == "poisoner") {
        Poisoner p;
        r.real("noise_scale", p.noise_scale);
        spec = p;
    } else if (type == "sybil_swarm") {
        SybilSwarm s;
        r.uint("identity_count", s.identity_count);
        r.uint("target_score_bp", s.target_score_bp);
        spec = s;
    } else if (type == "front_runner") {
        FrontRunner f;
        r.uint("score_bp", f.score_bp);
        spec = f;
    } else if (type == "colluder") {
        Colluder c;
        r.uint("partner_count", c.partner_count);
        r.uint("target_score_bp", c.target_score_bp);
        spec = c;
    } else {
        invalid(where + ".type must be poisoner, sybil_swarm, front_runner or colluder");
    }
    r.finish();
    return spec;
}

}  // namespace

const char* adversary_type(const AdversarySpec& spec) {
    static constexpr const char* kNames[] = {"poisoner", "sybil_swarm", "front_runner", "colluder"};
    return kNames[spec.index()];
}

void ScenarioConfig::validate() const {
    if (num_honest_clients < 1) invalid("num_honest_clients must be at least 1");
    if (num_admins < 1) invalid("num_admins must be at least 1");
    if (rounds < 1) invalid("rounds must be at least 1");
    if (series_length < kMinSeriesHours) invalid("series_length must be at least 48");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) invalid("holdout_fraction must be in (0, 1)");
    if (!(local_holdout_fraction > 0.0 && local_holdout_fraction < 1.0)) {
        invalid("local_holdout_fraction must be in (0, 1)");
    }
    if (eval_horizon < 1) invalid("eval_horizon must be at least 1");
    if (forecaster.kind == forecast::ForecasterKind::AutoRegressive && forecaster.order < 1) {
        invalid("forecaster.order must be at least 1");
    }
    if (forecaster.kind == forecast::ForecasterKind::SeasonalNaive && forecaster.period < 1) {
        invalid("forecaster.period must be at least 1");
    }
    try {
        ledger.validate();
    } catch (const ledger::LedgerError& e) {
        invalid(std::string("ledger: ") + e.what());
    }
    for (double v : {weather.base_celsius, weather.trend_per_hour, weather.daily_amplitude, weather.seasonal_amplitude,
                     weather.start_hours}) {
        if (!std::isfinite(v)) invalid("weather parameters must be finite");
    }
    if (!(weather.noise_sd >= 0.0 && std::isfinite(weather.noise_sd)) ||
        !(weather.feature_noise >= 0.0 && std::isfinite(weather.feature_noise))) {
        invalid("weather noise must be finite and non-negative");
    }
    if (!(weather.noise_persistence >= 0.0 && weather.noise_persistence < 1.0)) {
        invalid("weather.noise_persistence must be in [0, 1)");
    }
    for (const auto& a : adversaries) {
        if (const auto* p = std::get_if<Poisoner>(&a)) {
            if (!(p->noise_scale > 0.0 && std::isfinite(p->noise_scale))) invalid("poisoner noise_scale must be > 0");
        } else if (const auto* s = std::get_if<SybilSwarm>(&a)) {
            if (s->identity_count < 1) invalid("sybil_swarm identity_count must be at least 1");
            if (s->target_score_bp > ledger::kScoreScaleBp) invalid("sybil_swarm target_score_bp exceeds 10000");
        } else if (const auto* f = std::get_if<FrontRunner>(&a)) {
            if (f->score_bp > ledger::kScoreScaleBp) invalid("front_runner score_bp exceeds 10000");
        } else if (const auto* c = std::get_if<Colluder>(&a)) {
            if (c->partner_count < 1) invalid("colluder partner_count must be at least 1");
            if (c->target_score_bp > ledger::kScoreScaleBp) invalid("colluder target_score_bp exceeds 10000");
        }
    }
}

ScenarioConfig parse_scenario(std::string_view toml_text) {
    toml::table root;
    try {
        root = toml::parse(toml_text);
    } catch (const toml::parse_error& e) {
        invalid(std::string("TOML: ") + std::string(e.description()));
    }

    ScenarioConfig c;
    TableReader r(root, "");
    r.uint("seed", c.seed);
    r.uint("num_admins", c.num_admins);
    r.uint("num_honest_clients", c.num_honest_clients);
    r.uint("warmup_rounds", c.warmup_rounds);
    r.uint("rounds", c.rounds);
    r.uint("series_length", c.series_length);
    r.real("holdout_fraction", c.holdout_fraction);
    r.real("local_holdout_fraction", c.local_holdout_fraction);
    r.uint("eval_horizon", c.eval_horizon);

    if (const auto* t = subtable(r, "forecaster")) {
        TableReader fr(*t, "forecaster");
        std::string kind;
        fr.text("kind", kind);
        if (!kind.empty()) {
            auto k = forecast::parse_forecaster_kind(kind);
            if (!k) invalid("forecaster.kind must be naive, seasonal, ar or centroid");
            c.forecaster.kind = *k;
        }
        fr.uint("order", c.forecaster.order);
        fr.uint("period", c.forecaster.period);
        fr.finish();
    }
    if (const auto* t = subtable(r, "ledger")) {
        TableReader lr(*t, "ledger");
        auto& p = c.ledger;
        lr.uint("vote_eligibility_min", p.vote_eligibility_min);
        lr.uint("quorum_reputation", p.quorum_reputation);
        lr.uint("reject_threshold_bp", p.reject_threshold_bp);
        lr.uint("promotion_bonus", p.promotion_bonus);
        lr.uint("participation_bonus", p.participation_bonus);
        lr.uint("rejection_penalty", p.rejection_penalty);
        lr.uint("admin_initial_reputation", p.admin_initial_reputation);
        lr.finish();
    }
    if (const auto* t = subtable(r, "weather")) {
        TableReader wr(*t, "weather");
        auto& w = c.weather;
        wr.real("start_hours", w.start_hours);
        wr.real("base_celsius", w.base_celsius);
        wr.real("trend_per_hour", w.trend_per_hour);
        wr.real("daily_amplitude", w.daily_amplitude);
        wr.real("seasonal_amplitude", w.seasonal_amplitude);
        wr.real("noise_sd", w.noise_sd);
        wr.real("noise_persistence", w.noise_persistence);
        wr.real("feature_noise", w.feature_noise);
        wr.finish();
    }
    if (const toml::node* node = r.take("adversaries")) {
        const auto* arr = node->as_array();
        if (!arr) invalid("adversaries must be an array of tables");
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const auto* t = (*arr)[i].as_table();
            if (!t) invalid("adversaries must be an array of tables");
            c.adversaries.push_back(read_adversary(*t, "adversaries[" + std::to_string(i) + "]"));
        }
    }
    r.finish();
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) invalid("scenario file not found: " + path.string());
    Bytes raw;
    try {
        raw = read_file(path);
    } catch (const std::exception& e) {
        invalid(e.what());
    }
    return parse_scenario(std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size()));
}

Json config_to_json(const ScenarioConfig& c) {
    Json adversaries = Json::array();
    for (const auto& a : c.adversaries) {
        Json j{{"type", adversary_type(a)}};
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Poisoner>) {
                    j["noise_scale"] = s.noise_scale;
                } else if constexpr (std::is_same_v<T, SybilSwarm>) {
                    j["identity_count"] = s.identity_count;
                    j["target_score_bp"] = s.target_score_bp;
                } else if constexpr (std::is_same_v<T, FrontRunner>) {
                    j["score_bp"] = s.score_bp;
                } else {
                    j["partner_count"] = s.partner_count;
                    j["target_score_bp"] = s.target_score_bp;
                }
            },
            a);
        adversaries.push_back(std::move(j));
    }
    const auto& p = c.ledger;
    const auto& w = c.weather;
    return Json{
        {"seed", c.seed},
        {"num_admins", c.num_admins},
        {"num_honest_clients", c.num_honest_clients},
        {"warmup_rounds", c.warmup_rounds},
        {"rounds", c.rounds},
        {"series_length", c.series_length},
        {"holdout_fraction", c.holdout_fraction},
        {"local_holdout_fraction", c.local_holdout_fraction},
        {"eval_horizon", c.eval_horizon},
        {"forecaster",
         {{"kind", forecast::to_string(c.forecaster.kind)},
          {"order", c.forecaster.order},
          {"period", c.forecaster.period}}},
        {"ledger",
         {{"vote_eligibility_min", p.vote_eligibility_min},
          {"quorum_reputation", p.quorum_reputation},
          {"reject_threshold_bp", p.reject_threshold_bp},
          {"promotion_bonus", p.promotion_bonus},
          {"participation_bonus", p.participation_bonus},
          {"rejection_penalty", p.rejection_penalty},
          {"admin_initial_reputation", p.admin_initial_reputation}}},
        {"weather",
         {{"start_hours", w.start_hours},
          {"base_celsius", w.base_celsius},
          {"trend_per_hour", w.trend_per_hour},
          {"daily_amplitude", w.daily_amplitude},
          {"seasonal_amplitude", w.seasonal_amplitude},
          {"noise_sd", w.noise_sd},
          {"noise_persistence", w.noise_persistence},
          {"feature_noise", w.feature_noise}}},
        {"adversaries", std::move(adversaries)},
    };
}

}  // namespace wfl::sim
