#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "support/sha256_reference.hpp"
#include "support/temp_dir.hpp"
#include "wfl/cas/blob_store.hpp"
#include "wfl/cli/cli.hpp"
#include "wfl/common/files.hpp"
#include "wfl/forecast/codec.hpp"
#include "wfl/forecast/csv.hpp"
#include "wfl/forecast/evaluation.hpp"
#include "wfl/forecast/preprocess.hpp"
#include "wfl/ledger/codec.hpp"
#include "wfl/sim/simulator.hpp"
#include "wfl/sim/weather.hpp"

using namespace wfl;
using wfl::testing::TempDir;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run wfl_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    const Bytes b = read_file(p);
    return std::string(b.begin(), b.end());
}

const char* kScenario = R"(
seed = 11
num_honest_clients = 3
rounds = 6
series_length = 1200

[[adversaries]]
type = "poisoner"
)";

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("cas put of an empty file prints the SHA-256 of nothing") {
        TempDir d("wfl-cli");
        write_file_atomic(d / "empty", std::string_view{});
        auto r = wfl_run({"cas", "put", (d / "empty").string(), "--store", (d / "store").string()});
        CHECK(r.code == 0);
        CHECK(r.out == "sha256-" + to_hex(wfl::testing::sha256_reference({})) + "\n");
        CHECK(r.out == "sha256-e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855\n");
    }

    TEST_CASE("cas get round-trips and reports missing blobs") {
        TempDir d("wfl-cli");
        write_file_atomic(d / "blob", std::string_view("hello blob"));
        const auto store = (d / "store").string();
        auto put = wfl_run({"--json", "cas", "put", (d / "blob").string(), "--store", store});
        REQUIRE(put.code == 0);
        const auto cid = Json::parse(put.out)["cid"].get<std::string>();
        auto get = wfl_run({"cas", "get", cid, "--store", store, "--out", (d / "copy").string()});
        CHECK(get.code == 0);
        CHECK(slurp(d / "copy") == "hello blob");
        CHECK(wfl_run({"cas", "get", cid, "--store", store}).out == "hello blob");

        auto missing = wfl_run({"cas", "get", "sha256-" + std::string(64, '0'), "--store", store});
        CHECK(missing.code == 1);
        CHECK(Json::parse(missing.out)["error"] == "NotFound");
        auto bad = wfl_run({"cas", "get", "md5-abc", "--store", store});
        CHECK(bad.code == 1);
        CHECK(Json::parse(bad.out)["error"] == "InvalidCid");
        CHECK(wfl_run({"cas", "put", (d / "nothing").string(), "--store", store}).code == 1);
    }

    TEST_CASE("simulate is byte-identical across runs and honors --seed") {
        TempDir d("wfl-cli");
        write_file_atomic(d / "s.toml", std::string_view(kScenario));
        const auto s = (d / "s.toml").string();
        REQUIRE(wfl_run({"simulate", "--scenario", s, "--out", (d / "a.json").string()}).code == 0);
        REQUIRE(wfl_run({"simulate", "--scenario", s, "--out", (d / "b.json").string()}).code == 0);
        CHECK(read_file(d / "a.json") == read_file(d / "b.json"));

        REQUIRE(wfl_run({"simulate", "--scenario", s, "--seed", "12", "--out", (d / "c.json").string()}).code == 0);
        const auto a = Json::parse(slurp(d / "a.json"));
        const auto c = Json::parse(slurp(d / "c.json"));
        CHECK(a["seed"] == 11);
        CHECK(c["seed"] == 12);
        CHECK(a["digests"]["state"] != c["digests"]["state"]);

        auto cfg = sim::load_scenario(d / "s.toml");
        CHECK(slurp(d / "a.json") == sim::report_json(sim::run_scenario(cfg)) + "\n");
    }

    TEST_CASE("simulate --json summary and ledger-inspect agree with the report") {
        TempDir d("wfl-cli");
        write_file_atomic(d / "s.toml", std::string_view(kScenario));
        auto r = wfl_run({"simulate", "--scenario", (d / "s.toml").string(), "--out", (d / "r.json").string(), "--json",
                          "--state-out", (d / "st.bin").string()});
        REQUIRE(r.code == 0);
        const auto summary = Json::parse(r.out);
        const auto report = Json::parse(slurp(d / "r.json"));
        CHECK(summary["state_digest"] == report["digests"]["state"]);
        CHECK(summary["attack_outcomes"] == report["attack_outcomes"]);

        auto inspect = wfl_run({"ledger-inspect", "--state", (d / "st.bin").string(), "--events"});
        REQUIRE(inspect.code == 0);
        const auto j = Json::parse(inspect.out);
        CHECK(j["digest"] == report["digests"]["state"]);
        CHECK(j["governance_digest"] == report["digests"]["governance"]);
        CHECK(j["events"].size() == j["event_count"].get<std::size_t>());
        CHECK(j["models"].size() == 6);

        write_file_atomic(d / "junk.bin", std::string_view("WFL1junk"));
        auto junk = wfl_run({"ledger-inspect", "--state", (d / "junk.bin").string()});
        CHECK(junk.code == 1);
        CHECK(Json::parse(junk.out)["error"] == "MalformedState");
    }

    TEST_CASE("sweep reports equal individual runs") {
        TempDir d("wfl-cli");
        write_file_atomic(d / "s.toml", std::string_view(kScenario));
        auto r = wfl_run({"simulate", "--scenario", (d / "s.toml").string(), "--sweep", "3", "--seed", "40", "--out",
                          (d / "sw.json").string(), "--json"});
        REQUIRE(r.code == 0);
        const auto all = Json::parse(slurp(d / "sw.json"))["reports"];
        REQUIRE(all.size() == 3);
        auto cfg = sim::load_scenario(d / "s.toml");
        for (std::uint64_t i = 0; i < 3; ++i) {
            cfg.seed = 40 + i;
            CHECK(canonical_dump(all[i]) == sim::report_json(sim::run_scenario(cfg)));
        }
        CHECK(Json::parse(r.out)["reports"].size() == 3);
    }

    TEST_CASE("missing scenario is a domain error with a JSON object") {
        auto r = wfl_run({"simulate", "--scenario", "missing.toml", "--out", "never.json"});
        CHECK(r.code == 1);
        const auto j = Json::parse(r.out);
        CHECK(j["error"] == "InvalidConfig");
        CHECK(j["detail"].is_string());
        CHECK_FALSE(std::filesystem::exists("never.json"));
    }

    TEST_CASE("failures leave no partial outputs") {
        TempDir d("wfl-cli");
        write_file_atomic(d / "bad.toml", std::string_view("rounds = 2\nnot_a_key = 1\n"));
        auto r = wfl_run({"simulate", "--scenario", (d / "bad.toml").string(), "--out", (d / "r.json").string()});
        CHECK(r.code == 1);
        CHECK_FALSE(std::filesystem::exists(d / "r.json"));

        write_file_atomic(d / "bad.csv", std::string_view("Timestamp,Temperature\n"));
        auto f = wfl_run({"forecast", "fit", "--data", (d / "bad.csv").string(), "--out", (d / "m.bin").string()});
        CHECK(f.code == 1);
        CHECK_FALSE(std::filesystem::exists(d / "m.bin"));
        for (const auto& entry : std::filesystem::directory_iterator(d.path())) {
            CHECK_MESSAGE(entry.path().filename().string().find(".tmp") == std::string::npos, entry.path());
        }
    }

    TEST_CASE("usage errors exit 2") {
        CHECK(wfl_run({}).code == 2);
        CHECK(wfl_run({"simulate"}).code == 2);
        CHECK(wfl_run({"simulate", "--scenario", "x.toml", "--frobnicate"}).code == 2);
        CHECK(wfl_run({"explode"}).code == 2);
        CHECK(wfl_run({"cas"}).code == 2);
        CHECK(wfl_run({"forecast", "eval", "--model", "m", "--data", "d", "--horizon", "0"}).code == 2);
        auto r = wfl_run({"simulate", "--scenario", "x.toml", "--seed", "abc"});
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        CHECK_FALSE(r.err.empty());
        CHECK(wfl_run({"--help"}).code == 0);
    }

    TEST_CASE("forecast fit writes canonical model bytes and eval matches the library") {
        TempDir d("wfl-cli");
        const auto data = sim::generate_weather(5, 400);
        write_file_atomic(d / "w.csv", forecast::to_weather_csv(data));
        auto fit = wfl_run({"--json", "forecast", "fit", "--kind", "ar", "--order", "2", "--data", (d / "w.csv").string(), "--out",
                            (d / "m.bin").string()});
        REQUIRE(fit.code == 0);
        forecast::ForecasterSpec spec{forecast::ForecasterKind::AutoRegressive};
        spec.order = 2;
        const auto parsed = forecast::impute_missing(forecast::parse_weather_csv(forecast::to_weather_csv(data)));
        const auto expected = forecast::encode_model(forecast::fit_forecaster(spec, parsed));
        CHECK(read_file(d / "m.bin") == expected);
        CHECK(Json::parse(fit.out)["cid"] == cas::Cid::of(expected).str());

        auto eval = wfl_run({"forecast", "eval", "--model", (d / "m.bin").string(), "--data", (d / "w.csv").string(), "--json",
                             "--horizon", "3"});
        REQUIRE(eval.code == 0);
        const auto j = Json::parse(eval.out);
        const auto m = forecast::evaluate_rolling(forecast::decode_model(expected), parsed, 320, 3);
        CHECK(j["first_origin"] == 320);
        CHECK(j["metrics"]["mae"].get<double>() == doctest::Approx(*m.mae).epsilon(1e-8));
        CHECK(j["skill_bp"].get<int>() > 0);

        CHECK(wfl_run({"forecast", "fit", "--kind", "lstm", "--data", (d / "w.csv").string(), "--out", (d / "x").string()}).code == 1);
    }

    TEST_CASE("the installed binary honors the exit-code contract") {
        TempDir d("wfl-cli");
        write_file_atomic(d / "empty", std::string_view{});
        const std::string bin = WFL_BINARY;
        const std::string quiet = " > " + (d / "out").string() + " 2>&1";
        CHECK(shell(bin + " cas put " + (d / "empty").string() + " --store " + (d / "st").string() + quiet) == 0);
        CHECK(slurp(d / "out") == "sha256-e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855\n");
        CHECK(shell(bin + " simulate --scenario " + (d / "missing.toml").string() + quiet) == 1);
        CHECK(Json::parse(slurp(d / "out"))["error"] == "InvalidConfig");
        CHECK(shell(bin + " simulate --no-such-flag" + quiet) == 2);
    }
}
