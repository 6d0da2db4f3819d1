#include "wfl/cli/cli.hpp"

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "wfl/cas/blob_store.hpp"
#include "wfl/common/base64.hpp"
#include "wfl/common/canonical_json.hpp"
#include "wfl/common/files.hpp"
#include "wfl/forecast/codec.hpp"
#include "wfl/forecast/csv.hpp"
#include "wfl/forecast/error.hpp"
#include "wfl/forecast/evaluation.hpp"
#include "wfl/forecast/preprocess.hpp"
#include "wfl/ledger/codec.hpp"
#include "wfl/node/server.hpp"
#include "wfl/sim/error.hpp"
#include "wfl/sim/simulator.hpp"
#include "wfl/sim/sweep.hpp"

namespace wfl::cli {

namespace {

// Failure that is neither a usage error nor raised by a library module.
struct CliError : std::runtime_error {
    CliError(std::string c, const std::string& detail) : std::runtime_error(detail), code(std::move(c)) {}
    std::string code;
};

Bytes read_input(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw CliError("FileNotFound", "no such file: " + path);
    return read_file(path);
}

std::string read_text(const std::string& path) {
    const Bytes b = read_input(path);
    return std::string(b.begin(), b.end());
}

Json metrics_to_json(const forecast::MetricReport& m) {
    const auto num = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    return Json{{"mae", num(m.mae)},
                {"rmse", num(m.rmse)},
                {"mape", num(m.mape)},
                {"accuracy", num(m.accuracy)},
                {"f1_macro", num(m.f1_macro)},
                {"points", m.points},
                {"mape_excluded", m.mape_excluded}};
}

Json ledger_summary(const ledger::LedgerState& st, bool events) {
    const ledger::Ledger l(st);
    Json accounts = Json::array();
    for (const auto& [id, a] : st.accounts) accounts.push_back(ledger::account_to_json(a));
    Json models = Json::array();
    for (const auto& [id, m] : st.models) models.push_back(ledger::model_to_json(m));
    const auto pointer = [&](ledger::ModelKind k) { return st.primary_of(k) ? Json(*st.primary_of(k)) : Json(nullptr); };
    const auto& p = st.params;
    Json j{{"digest", to_hex(l.digest())},
           {"governance_digest", to_hex(l.governance_digest())},
           {"params",
            {{"vote_eligibility_min", p.vote_eligibility_min},
             {"quorum_reputation", p.quorum_reputation},
             {"reject_threshold_bp", p.reject_threshold_bp},
             {"promotion_bonus", p.promotion_bonus},
             {"participation_bonus", p.participation_bonus},
             {"rejection_penalty", p.rejection_penalty},
             {"admin_initial_reputation", p.admin_initial_reputation}}},
           {"accounts", std::move(accounts)},
           {"models", std::move(models)},
           {"primary", {{"regression", pointer(ledger::ModelKind::Regression)},
                        {"classification", pointer(ledger::ModelKind::Classification)}}},
           {"next_sequence", st.next_sequence},
           {"event_count", st.event_log.size()}};
    if (events) {
        Json log = Json::array();
        for (const auto& e : st.event_log) log.push_back(ledger::event_to_json(e));
        j["events"] = std::move(log);
    }
    return j;
}

void print(std::ostream& out, const Json& j, bool json, const std::string& plain) {
    if (json) {
        out << canonical_dump(j) << '\n';
    } else {
        out << plain << '\n';
    }
}

struct Options {
    bool json = false;

    std::string scenario, out, state_out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> sweep;

    std::string state;
    bool events = false;

    std::string store = "store";
    std::string file, cid;

    std::string kind = "ar";
    std::uint32_t order = 3;
    std::uint32_t period = 24;
    std::string data, model;
    std::size_t horizon = 6;
    double holdout_fraction = 0.2;

    std::string config;
    std::optional<std::uint16_t> port;
};

int simulate(const Options& o, std::ostream& out) {
    auto config = sim::load_scenario(o.scenario);
    if (o.seed) config.seed = *o.seed;
    config.validate();

    if (o.sweep) {
        if (*o.sweep == 0) throw CliError("InvalidArgument", "--sweep needs at least one seed");
        if (!o.state_out.empty()) throw CliError("InvalidArgument", "--state-out is not available with --sweep");
        const auto seeds = sim::sweep_seeds(config.seed, *o.sweep);
        const auto reports = sim::run_sweep(config, seeds);
        Json all = Json::array();
        Json summary = Json::array();
        for (const auto& r : reports) {
            Json j = sim::report_to_json(r);
            summary.push_back({{"seed", r.config.seed}, {"state_digest", r.state_digest}, {"attack_outcomes", j["attack_outcomes"]}});
            all.push_back(std::move(j));
        }
        if (!o.out.empty()) write_file_atomic(o.out, canonical_dump(Json{{"reports", std::move(all)}}) + "\n");
        print(out, Json{{"out", o.out.empty() ? Json(nullptr) : Json(o.out)}, {"reports", std::move(summary)}}, o.json,
              "ran " + std::to_string(reports.size()) + " seeds" + (o.out.empty() ? "" : ", wrote " + o.out));
        return kOk;
    }

    const auto report = sim::run_scenario(config);
    const std::string text = sim::report_json(report) + "\n";
    if (!o.state_out.empty()) write_file_atomic(o.state_out, ledger::encode_state(report.final_state));
    if (o.out.empty()) {
        out << text;
        return kOk;
    }
    write_file_atomic(o.out, text);
    print(out,
          Json{{"out", o.out},
               {"seed", config.seed},
               {"rounds", report.rounds.size()},
               {"state_digest", report.state_digest},
               {"governance_digest", report.governance_digest},
               {"attack_outcomes", sim::report_to_json(report)["attack_outcomes"]}},
          o.json, "wrote " + o.out + " (state digest " + report.state_digest + ")");
    return kOk;
}

int ledger_inspect(const Options& o, std::ostream& out) {
    const auto st = ledger::decode_state(read_input(o.state));
    // Always JSON: the summary has no useful plain-text form.
    out << canonical_dump(ledger_summary(st, o.events)) << '\n';
    return kOk;
}

int cas_put(const Options& o, std::ostream& out) {
    const Bytes bytes = read_input(o.file);
    cas::BlobStore store(o.store);
    const auto cid = store.put(bytes);
    print(out, Json{{"cid", cid.str()}, {"size", bytes.size()}}, o.json, cid.str());
    return kOk;
}

int cas_get(const Options& o, std::ostream& out) {
    const auto cid = cas::Cid::parse(o.cid);
    const cas::BlobStore store(o.store);
    const Bytes bytes = store.get(cid);
    if (!o.out.empty()) {
        write_file_atomic(o.out, bytes);
        print(out, Json{{"cid", cid.str()}, {"size", bytes.size()}, {"out", o.out}}, o.json, "wrote " + o.out);
    } else if (o.json) {
        out << canonical_dump(Json{{"cid", cid.str()}, {"size", bytes.size()}, {"base64", base64_encode(bytes)}}) << '\n';
    } else {
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    return kOk;
}

int forecast_fit(const Options& o, std::ostream& out) {
    const auto kind = forecast::parse_forecaster_kind(o.kind);
    if (!kind) throw CliError("InvalidArgument", "--kind must be naive, seasonal, ar or centroid");
    forecast::ForecasterSpec spec{*kind};
    spec.order = o.order;
    spec.period = o.period;
    const auto data = forecast::impute_missing(forecast::parse_weather_csv(read_text(o.data)));
    const auto model = forecast::fit_forecaster(spec, data);
    const Bytes bytes = forecast::encode_model(model);
    write_file_atomic(o.out, bytes);
    const auto cid = cas::Cid::of(bytes);
    print(out,
          Json{{"out", o.out}, {"kind", forecast::to_string(model.kind())}, {"training_rows", model.training_rows}, {"cid", cid.str()}},
          o.json, "wrote " + o.out + " (" + cid.str() + ")");
    return kOk;
}

int forecast_eval(const Options& o, std::ostream& out) {
    const auto model = forecast::decode_model(read_input(o.model));
    const auto data = forecast::impute_missing(forecast::parse_weather_csv(read_text(o.data)));
    if (!(o.holdout_fraction > 0.0 && o.holdout_fraction < 1.0))
        throw CliError("InvalidArgument", "--holdout-fraction must be in (0, 1)");
    const auto split = forecast::temporal_split(data, 1.0 - o.holdout_fraction);
    const std::size_t first_origin = split.train.rows();
    const auto m = forecast::evaluate_rolling(model, data, first_origin, o.horizon);
    Json j{{"kind", forecast::to_string(model.kind())}, {"first_origin", first_origin}, {"horizon", o.horizon},
           {"metrics", metrics_to_json(m)}};
    std::string plain;
    if (model.ledger_kind() == ledger::ModelKind::Regression) {
        const auto ref = forecast::evaluate_naive_reference(data, first_origin, o.horizon);
        const auto skill = forecast::skill_score(m, ref, ledger::ModelKind::Regression);
        j["reference_metrics"] = metrics_to_json(ref);
        j["skill_bp"] = skill;
        plain = "mae " + std::to_string(m.mae.value_or(0)) + ", skill " + std::to_string(skill) + " bp";
    } else {
        j["skill_bp"] = forecast::skill_score(m, m, ledger::ModelKind::Classification);
        plain = "f1_macro " + std::to_string(m.f1_macro.value_or(0));
    }
    print(out, j, o.json, plain);
    return kOk;
}

int serve(const Options& o, std::ostream&) {
    auto config = node::load_node_config(o.config);
    if (o.port) config.port = *o.port;
    node::serve(config);
    return kOk;
}

std::pair<std::string, std::string> classify_error(const std::exception& e) {
    if (const auto* x = dynamic_cast<const CliError*>(&e)) return {x->code, x->what()};
    if (const auto* x = dynamic_cast<const sim::SimError*>(&e)) return {sim::to_string(x->code()), x->what()};
    if (const auto* x = dynamic_cast<const forecast::ForecastError*>(&e)) return {forecast::to_string(x->code()), x->what()};
    if (const auto* x = dynamic_cast<const cas::CasError*>(&e)) return {cas::to_string(x->code()), x->what()};
    if (const auto* x = dynamic_cast<const ledger::LedgerError*>(&e)) return {ledger::to_string(x->code()), x->what()};
    if (const auto* x = dynamic_cast<const node::NodeError*>(&e)) return {node::to_string(x->code()), x->what()};
    if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return {"IoError", e.what()};
    return {"Error", e.what()};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weather forecasting ledger: simulation, inspection, storage, forecasting and the node service.", "wfl"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.json, "Machine-readable JSON on standard output");

    auto* sim_cmd = app.add_subcommand("simulate", "Run a scenario and write its report");
    sim_cmd->add_option("--scenario", o.scenario, "Scenario TOML file")->required();
    sim_cmd->add_option("--out", o.out, "Report JSON output (standard output if omitted)");
    sim_cmd->add_option("--seed", o.seed, "Override the scenario seed");
    sim_cmd->add_option("--sweep", o.sweep, "Run this many consecutive seeds in parallel");
    sim_cmd->add_option("--state-out", o.state_out, "Write the final ledger state");
    sim_cmd->add_flag("--json", o.json);

    auto* inspect = app.add_subcommand("ledger-inspect", "Summarize an encoded ledger state");
    inspect->add_option("--state", o.state, "Encoded ledger state file")->required();
    inspect->add_flag("--events", o.events, "Include the event log");
    inspect->add_flag("--json", o.json);

    auto* cas_cmd = app.add_subcommand("cas", "Content-addressed blob store");
    cas_cmd->require_subcommand(1);
    auto* put = cas_cmd->add_subcommand("put", "Store a file and print its Cid");
    put->add_option("file", o.file)->required();
    put->add_option("--store", o.store, "Store directory")->capture_default_str();
    put->add_flag("--json", o.json);
    auto* get = cas_cmd->add_subcommand("get", "Fetch a blob by Cid");
    get->add_option("cid", o.cid)->required();
    get->add_option("--store", o.store, "Store directory")->capture_default_str();
    get->add_option("--out", o.out, "Output file (standard output if omitted)");
    get->add_flag("--json", o.json);

    auto* fc = app.add_subcommand("forecast", "Fit and evaluate forecasters");
    fc->require_subcommand(1);
    auto* fit = fc->add_subcommand("fit", "Fit a forecaster on a weather CSV");
    fit->add_option("--kind", o.kind, "naive, seasonal, ar or centroid")->capture_default_str();
    fit->add_option("--order", o.order, "AR order")->capture_default_str();
    fit->add_option("--period", o.period, "Seasonal period in hours")->capture_default_str();
    fit->add_option("--data", o.data, "Training CSV")->required();
    fit->add_option("--out", o.out, "Model output file")->required();
    fit->add_flag("--json", o.json);
    auto* eval = fc->add_subcommand("eval", "Rolling-origin evaluation on a weather CSV");
    eval->add_option("--model", o.model, "Model file")->required();
    eval->add_option("--data", o.data, "Evaluation CSV")->required();
    eval->add_option("--horizon", o.horizon, "Forecast horizon in hours")->capture_default_str()->check(CLI::PositiveNumber);
    eval->add_option("--holdout-fraction", o.holdout_fraction, "Trailing fraction used as origins")->capture_default_str();
    eval->add_flag("--json", o.json);

    auto* serve_cmd = app.add_subcommand("serve", "Run the node HTTP service");
    serve_cmd->add_option("--config", o.config, "Node TOML config")->required();
    serve_cmd->add_option("--port", o.port, "Override the configured port");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "wfl: " << e.what() << "\n";
        err << "Run with --help for usage.\n";
        return kUsageError;
    }

    try {
        if (*sim_cmd) return simulate(o, out);
        if (*inspect) return ledger_inspect(o, out);
        if (*put) return cas_put(o, out);
        if (*get) return cas_get(o, out);
        if (*fit) return forecast_fit(o, out);
        if (*eval) return forecast_eval(o, out);
        if (*serve_cmd) return serve(o, out);
    } catch (const std::exception& e) {
        const auto [code, detail] = classify_error(e);
        out << canonical_dump(Json{{"error", code}, {"detail", detail}}) << '\n';
        return kDomainError;
    }
    err << "wfl: no subcommand\n";
    return kUsageError;
}

}  // namespace wfl::cli
