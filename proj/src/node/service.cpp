#include "wfl/node/service.hpp"

#include <charconv>
#include <chrono>
#include <mutex>

#include "wfl/common/base64.hpp"
#include "wfl/common/files.hpp"
#include "wfl/forecast/codec.hpp"
#include "wfl/forecast/csv.hpp"
#include "wfl/forecast/error.hpp"
#include "wfl/forecast/preprocess.hpp"
#include "wfl/ledger/codec.hpp"

namespace wfl::node {

namespace {

using ledger::LedgerErrc;
using ledger::ModelId;
using ledger::Role;

enum class Endpoint { AddAdmin, AddClient, SubmitModel, CastScore, GetModel, GetPrimary, Forecast, AdminLogs };

struct Matched {
    Endpoint endpoint;
    Role min_role;
    std::optional<ModelId> model_id;
};

constexpr std::size_t kMaxHorizon = 24 * 30;

std::optional<std::uint64_t> parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    if (s.empty() || s.size() > 20) return std::nullopt;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<Matched> match(const std::string& method, const std::string& path) {
    if (method == "POST" && path == "/accounts/admins") return Matched{Endpoint::AddAdmin, Role::Owner, {}};
    if (method == "POST" && path == "/accounts/clients") return Matched{Endpoint::AddClient, Role::Admin, {}};
    if (method == "POST" && path == "/models") return Matched{Endpoint::SubmitModel, Role::Client, {}};
    if (method == "GET" && path == "/primary") return Matched{Endpoint::GetPrimary, Role::User, {}};
    if (method == "POST" && path == "/forecast") return Matched{Endpoint::Forecast, Role::User, {}};
    if (method == "GET" && path == "/admin/logs") return Matched{Endpoint::AdminLogs, Role::Admin, {}};

    constexpr std::string_view prefix = "/models/";
    if (path.rfind(prefix, 0) != 0) return std::nullopt;
    std::string_view rest = std::string_view(path).substr(prefix.size());
    constexpr std::string_view score_suffix = "/score";
    if (method == "POST" && rest.size() > score_suffix.size() &&
        rest.substr(rest.size() - score_suffix.size()) == score_suffix) {
        if (auto id = parse_u64(rest.substr(0, rest.size() - score_suffix.size())))
            return Matched{Endpoint::CastScore, Role::Client, *id};
        return std::nullopt;
    }
    if (method == "GET") {
        if (auto id = parse_u64(rest)) return Matched{Endpoint::GetModel, Role::User, *id};
    }
    return std::nullopt;
}

Response error(int status, std::string_view code, std::string_view text) {
    return {status, canonical_dump(Json{{"error", code}, {"detail", text}})};
}

Response ok(int status, const Json& body) { return {status, canonical_dump(body)}; }

int status_for(LedgerErrc code) {
    switch (code) {
        case LedgerErrc::Unauthorized:
        case LedgerErrc::SelfVote: return 403;
        case LedgerErrc::DuplicateAccount:
        case LedgerErrc::DuplicateCid:
        case LedgerErrc::AlreadyVoted:
        case LedgerErrc::VotingClosed:
        case LedgerErrc::Reentrant: return 409;
        case LedgerErrc::UnknownModel: return 404;
        case LedgerErrc::InvalidScore:
        case LedgerErrc::InvalidParams: return 400;
        default: return 500;
    }
}

std::optional<std::string_view> bearer(const std::optional<std::string>& header) {
    if (!header) return std::nullopt;
    std::string_view h = *header;
    constexpr std::string_view scheme = "bearer ";
    if (h.size() <= scheme.size()) return std::nullopt;
    for (std::size_t i = 0; i < scheme.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(h[i])) != scheme[i]) return std::nullopt;
    }
    h.remove_prefix(scheme.size());
    while (!h.empty() && h.front() == ' ') h.remove_prefix(1);
    while (!h.empty() && h.back() == ' ') h.remove_suffix(1);
    if (h.empty()) return std::nullopt;
    return h;
}

struct BadRequest {
    std::string code;
    std::string detail;
};

Json parse_body(const std::string& body) {
    Json j = Json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw BadRequest{"MalformedBody", "body must be a JSON object"};
    return j;
}

ledger::AccountId account_from(const Json& body) {
    try {
        if (body.contains("account") && body["account"].is_string())
            return ledger::AccountId::parse(body["account"].get<std::string>());
        if (body.contains("label") && body["label"].is_string())
            return ledger::AccountId::from_label(body["label"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw BadRequest{"MalformedBody", e.what()};
    }
    throw BadRequest{"MalformedBody", "expected \"account\" (64 hex digits) or \"label\""};
}

forecast::Dataset rows_to_dataset(const Json& rows) {
    namespace col = forecast::columns;
    if (!rows.is_array() || rows.empty()) throw BadRequest{"MalformedBody", "\"rows\" must be a non-empty array"};
    forecast::Dataset d;
    const char* numeric[] = {col::kTemperature, col::kHumidity, col::kWindSpeed, col::kVisibility, col::kPressure};
    for (const char* name : numeric) {
        bool present = false;
        for (const auto& r : rows) present = present || (r.is_object() && r.contains(name));
        if (present || std::string_view(name) == col::kTemperature) d.numeric.push_back({name, {}});
    }
    bool has_summary = false;
    for (const auto& r : rows) has_summary = has_summary || (r.is_object() && r.contains(col::kSummary));
    if (has_summary) d.categorical.push_back({col::kSummary, {}});

    for (const auto& r : rows) {
        if (!r.is_object()) throw BadRequest{"MalformedBody", "rows must be objects"};
        if (!r.contains(col::kTimestamp) || !r[col::kTimestamp].is_string())
            throw BadRequest{"MalformedBody", "every row needs a Timestamp string"};
        d.timestamps.push_back(forecast::parse_iso8601_hours(r[col::kTimestamp].get<std::string>()));
        for (auto& c : d.numeric) {
            const auto it = r.find(c.name);
            if (it == r.end() || it->is_null()) {
                c.values.push_back(forecast::kMissing);
            } else if (it->is_number()) {
                c.values.push_back(it->get<double>());
            } else {
                throw BadRequest{"MalformedBody", c.name + " must be a number or null"};
            }
        }
        for (auto& c : d.categorical) {
            const auto it = r.find(c.name);
            if (it == r.end() || it->is_null()) {
                c.values.push_back(std::nullopt);
            } else if (it->is_string()) {
                c.values.push_back(it->get<std::string>());
            } else {
                throw BadRequest{"MalformedBody", c.name + " must be a string or null"};
            }
        }
        for (const auto& [key, _] : r.items()) {
            if (key != col::kTimestamp && !d.find_numeric(key) && !d.find_categorical(key))
                throw BadRequest{"MalformedBody", "unknown column " + key};
        }
    }
    return d;
}

}  // namespace

double system_clock_seconds() {
    using namespace std::chrono;
    return duration<double>(system_clock::now().time_since_epoch()).count();
}

NodeService::NodeService(ledger::Ledger ledger, cas::BlobStore& store, TokenTable tokens, RateLimit limit, Clock clock)
    : ledger_(std::move(ledger)), store_(store), tokens_(std::move(tokens)), limiter_(limit), clock_(std::move(clock)) {}

Digest NodeService::digest() const {
    std::shared_lock lock(ledger_mu_);
    return ledger_.digest();
}

ledger::LedgerState NodeService::state() const {
    std::shared_lock lock(ledger_mu_);
    return ledger_.state();
}

void NodeService::save_locked() const {
    if (state_path_) write_file_atomic(*state_path_, ledger::encode_state(ledger_.state()));
}

Response NodeService::handle(const Request& request) {
    const double now = clock_();
    AuditRecord record;
    record.timestamp = now;
    record.endpoint = request.method + " " + request.path;

    Response response;
    std::string detail;
    const auto token = bearer(request.authorization);
    const ApiToken* caller = token ? tokens_.find(*token) : nullptr;
    if (!caller) {
        detail = token ? "unknown token" : "missing bearer token";
        response = error(401, "UnknownToken", detail);
    } else {
        record.account = caller->account;
        auto route = match(request.method, request.path);
        if (!limiter_.try_acquire(caller->token, now)) {
            detail = "rate limit exceeded";
            response = error(429, "RateLimited", detail);
        } else if (!route) {
            detail = "no such endpoint";
            response = error(404, "NotFound", detail);
        } else if (caller->role < route->min_role) {
            detail = std::string("requires role ") + ledger::to_string(route->min_role) + ", token has " +
                     ledger::to_string(caller->role);
            response = error(403, "Forbidden", detail);
        } else {
            try {
                response = dispatch(request, *caller, detail);
            } catch (const BadRequest& e) {
                detail = e.detail;
                response = error(400, e.code, e.detail);
            } catch (const forecast::ForecastError& e) {
                detail = e.what();
                response = error(400, forecast::to_string(e.code()), e.what());
            } catch (const cas::CasError& e) {
                detail = e.what();
                response = error(500, cas::to_string(e.code()), e.what());
            } catch (const std::exception& e) {
                detail = e.what();
                response = error(500, "Internal", e.what());
            }
        }
    }

    record.status = response.status;
    record.decision = response.status == 401   ? Decision::Unauthenticated401
                      : response.status == 403 ? Decision::Denied403
                      : response.status == 429 ? Decision::Limited429
                                               : Decision::Allowed;
    record.detail = std::move(detail);
    audit_.append(std::move(record));
    return response;
}

Response NodeService::mutate(const ledger::Transaction& tx, int success_status, std::string& detail) {
    std::unique_lock lock(ledger_mu_);
    auto result = ledger_.apply(tx);
    if (!result.accepted) {
        detail = result.events.empty() ? ledger::to_string(*result.error) : result.events.front().reason;
        return error(status_for(*result.error), ledger::to_string(*result.error), detail);
    }
    save_locked();
    Json events = Json::array();
    for (const auto& e : result.events) events.push_back(ledger::event_to_json(e));
    Json body{{"events", std::move(events)}};
    if (result.model_id) {
        const auto& m = *ledger_.state().find_model(*result.model_id);
        body["model_id"] = m.model_id;
        body["cid"] = m.cid.str();
        body["status"] = ledger::to_string(m.status);
        body["final_score_bp"] = m.final_score_bp ? Json(*m.final_score_bp) : Json(nullptr);
    }
    return ok(success_status, body);
}

Response NodeService::dispatch(const Request& req, const ApiToken& caller, std::string& detail) {
    auto route = *match(req.method, req.path);
    switch (route.endpoint) {
        case Endpoint::AddAdmin: {
            const auto id = account_from(parse_body(req.body));
            auto r = mutate(ledger::AddAdmin{caller.account, id}, 201, detail);
            return r;
        }
        case Endpoint::AddClient: {
            const auto id = account_from(parse_body(req.body));
            return mutate(ledger::AddClient{caller.account, id}, 201, detail);
        }
        case Endpoint::SubmitModel: {
            const Json body = parse_body(req.body);
            if (!body.contains("model") || !body["model"].is_string())
                throw BadRequest{"MalformedBody", "expected base64 \"model\""};
            auto bytes = base64_decode(body["model"].get<std::string>());
            if (!bytes) throw BadRequest{"MalformedBody", "\"model\" is not valid base64"};
            const auto model = forecast::decode_model(*bytes);
            ledger::ModelKind kind = model.ledger_kind();
            if (body.contains("kind")) {
                auto k = body["kind"].is_string() ? ledger::parse_model_kind(body["kind"].get<std::string>()) : std::nullopt;
                if (!k) throw BadRequest{"MalformedBody", "\"kind\" must be regression or classification"};
                if (*k != kind) throw BadRequest{"KindMismatch", "model bytes encode a " + std::string(ledger::to_string(kind)) + " model"};
            }
            const cas::Cid cid = store_.put(*bytes);
            return mutate(ledger::SubmitModel{caller.account, cid, kind}, 201, detail);
        }
        case Endpoint::CastScore: {
            const Json body = parse_body(req.body);
            if (!body.contains("score_bp") || !body["score_bp"].is_number_unsigned() ||
                body["score_bp"].get<std::uint64_t>() > std::numeric_limits<ledger::ScoreBp>::max())
                throw BadRequest{"MalformedBody", "expected integer \"score_bp\""};
            const auto score = body["score_bp"].get<ledger::ScoreBp>();
            return mutate(ledger::CastScore{caller.account, *route.model_id, score}, 200, detail);
        }
        case Endpoint::GetModel: {
            std::shared_lock lock(ledger_mu_);
            const auto* m = ledger_.state().find_model(*route.model_id);
            if (!m) {
                detail = "unknown model";
                return error(404, "UnknownModel", detail);
            }
            return ok(200, ledger::model_to_json(*m));
        }
        case Endpoint::GetPrimary: {
            ledger::ModelKind kind = ledger::ModelKind::Regression;
            if (auto it = req.query.find("kind"); it != req.query.end()) {
                auto k = ledger::parse_model_kind(it->second);
                if (!k) throw BadRequest{"MalformedQuery", "kind must be regression or classification"};
                kind = *k;
            }
            std::shared_lock lock(ledger_mu_);
            const auto id = ledger_.state().primary_of(kind);
            if (!id) {
                detail = "no primary model";
                return error(404, "NoPrimary", detail);
            }
            return ok(200, ledger::model_to_json(*ledger_.state().find_model(*id)));
        }
        case Endpoint::Forecast: {
            std::size_t horizon = 1;
            forecast::Dataset data;
            const bool csv = req.content_type.find("text/csv") != std::string::npos;
            if (auto it = req.query.find("horizon"); it != req.query.end()) {
                auto h = parse_u64(it->second);
                if (!h) throw BadRequest{"MalformedQuery", "horizon must be a positive integer"};
                horizon = *h;
            }
            if (csv) {
                data = forecast::parse_weather_csv(req.body);
            } else {
                const Json body = parse_body(req.body);
                if (body.contains("horizon")) {
                    if (!body["horizon"].is_number_unsigned()) throw BadRequest{"MalformedBody", "horizon must be a positive integer"};
                    horizon = body["horizon"].get<std::size_t>();
                }
                if (body.contains("csv") && body["csv"].is_string()) {
                    data = forecast::parse_weather_csv(body["csv"].get<std::string>());
                } else if (body.contains("rows")) {
                    data = rows_to_dataset(body["rows"]);
                } else {
                    throw BadRequest{"MalformedBody", "expected \"rows\" or \"csv\""};
                }
            }
            if (horizon == 0 || horizon > kMaxHorizon) throw BadRequest{"MalformedBody", "horizon must be in 1..720"};
            data.validate();

            std::optional<ModelId> id;
            cas::Cid cid;
            {
                std::shared_lock lock(ledger_mu_);
                id = ledger_.state().primary_of(ledger::ModelKind::Regression);
                if (id) cid = ledger_.state().find_model(*id)->cid;
            }
            if (!id) {
                detail = "no primary model";
                return error(404, "NoPrimary", detail);
            }
            const auto model = forecast::decode_model(store_.get(cid));
            const auto prediction = forecast::predict(model, forecast::impute_missing(data), horizon);
            return ok(200, Json{{"model_id", *id},
                                {"cid", cid.str()},
                                {"horizon", horizon},
                                {"temperature_forecast", std::get<std::vector<double>>(prediction)}});
        }
        case Endpoint::AdminLogs: {
            Json records = Json::array();
            for (const auto& r : audit_.snapshot()) records.push_back(audit_to_json(r));
            return ok(200, Json{{"records", std::move(records)}});
        }
    }
    return error(404, "NotFound", "no such endpoint");
}

}  // namespace wfl::node
