#include "wfl/node/server.hpp"

#include <csignal>
#include <iostream>
#include <limits>
#include <pthread.h>
#include <set>

#include "httplib.h"
#include "toml.hpp"
#include "wfl/common/files.hpp"
#include "wfl/ledger/codec.hpp"

namespace wfl::node {

namespace {

[[noreturn]] void invalid(const std::string& detail) { throw NodeError(NodeErrc::InvalidConfig, detail); }

constexpr std::size_t kMaxBodyBytes = 16 * 1024 * 1024;

class Keys {
public:
    Keys(const toml::table& table, std::string where) : table_(table), where_(std::move(where)) {}

    template <typename UInt>
    void uint(const char* key, UInt& out) {
        const toml::node* node = take(key);
        if (!node) return;
        auto v = node->value_exact<std::int64_t>();
        if (!v || *v < 0 || static_cast<std::uint64_t>(*v) > std::numeric_limits<UInt>::max())
            invalid(name(key) + " must be a non-negative integer in range");
        out = static_cast<UInt>(*v);
    }

    void real(const char* key, double& out) {
        const toml::node* node = take(key);
        if (!node) return;
        auto v = node->value<double>();
        if (!v || !node->is_number()) invalid(name(key) + " must be a number");
        out = *v;
    }

    std::optional<std::string> text(const char* key) {
        const toml::node* node = take(key);
        if (!node) return std::nullopt;
        auto v = node->value_exact<std::string>();
        if (!v) invalid(name(key) + " must be a string");
        return *v;
    }

    const toml::table* table(const char* key) {
        const toml::node* node = take(key);
        if (!node) return nullptr;
        if (!node->is_table()) invalid(name(key) + " must be a table");
        return node->as_table();
    }

    void finish() const {
        for (const auto& [k, v] : table_) {
            if (!seen_.count(std::string(k.str()))) invalid("unknown key " + name(std::string(k.str())));
        }
    }

private:
    const toml::node* take(const char* key) {
        seen_.insert(key);
        return table_.get(key);
    }
    std::string name(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

    const toml::table& table_;
    std::string where_;
    std::set<std::string> seen_;
};

Request to_request(const httplib::Request& r) {
    Request out;
    out.method = r.method;
    out.path = r.path;
    for (const auto& [k, v] : r.params) out.query.emplace(k, v);
    if (r.has_header("Authorization")) out.authorization = r.get_header_value("Authorization");
    out.content_type = r.get_header_value("Content-Type");
    out.body = r.body;
    return out;
}

}  // namespace

NodeConfig load_node_config(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) invalid("config file not found: " + path.string());
    toml::table root;
    try {
        root = toml::parse_file(path.string());
    } catch (const toml::parse_error& e) {
        invalid(std::string("TOML: ") + std::string(e.description()));
    }
    const auto base = path.parent_path();
    const auto resolve = [&](const std::string& p) { return std::filesystem::path(p).is_absolute() ? std::filesystem::path(p) : base / p; };

    NodeConfig c;
    Keys k(root, "");
    if (auto v = k.text("bind")) c.bind = *v;
    k.uint("port", c.port);
    auto tokens = k.text("tokens");
    if (!tokens) invalid("tokens is required");
    c.tokens = resolve(*tokens);
    if (auto v = k.text("store")) c.store = *v;
    c.store = resolve(c.store.string());
    if (auto v = k.text("state")) c.state = resolve(*v);
    if (const auto* t = k.table("rate_limit")) {
        Keys r(*t, "rate_limit");
        r.uint("capacity", c.rate_limit.capacity);
        r.real("refill_per_second", c.rate_limit.refill_per_second);
        r.finish();
        if (c.rate_limit.capacity == 0) invalid("rate_limit.capacity must be positive");
        if (!(c.rate_limit.refill_per_second > 0)) invalid("rate_limit.refill_per_second must be positive");
    }
    if (const auto* t = k.table("ledger")) {
        Keys l(*t, "ledger");
        auto& p = c.ledger;
        l.uint("vote_eligibility_min", p.vote_eligibility_min);
        l.uint("quorum_reputation", p.quorum_reputation);
        l.uint("reject_threshold_bp", p.reject_threshold_bp);
        l.uint("promotion_bonus", p.promotion_bonus);
        l.uint("participation_bonus", p.participation_bonus);
        l.uint("rejection_penalty", p.rejection_penalty);
        l.uint("admin_initial_reputation", p.admin_initial_reputation);
        l.finish();
    }
    k.finish();
    return c;
}

HttpServer::HttpServer(NodeService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    const auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        const Response out = service_.handle(to_request(req));
        res.status = out.status;
        res.set_content(out.body, "application/json");
    };
    server_->set_payload_max_length(kMaxBodyBytes);
    // SO_REUSEADDR only: the library default adds SO_REUSEPORT, which lets two nodes share a port.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    server_->Get(".*", handler);
    server_->Post(".*", handler);
    server_->Put(".*", handler);
    server_->Patch(".*", handler);
    server_->Delete(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

std::uint16_t HttpServer::start(const std::string& host, std::uint16_t port) {
    int bound = port;
    if (port == 0) {
        bound = server_->bind_to_any_port(host);
        if (bound <= 0) throw NodeError(NodeErrc::BindFailure, "cannot bind " + host);
    } else if (!server_->bind_to_port(host, port)) {
        throw NodeError(NodeErrc::BindFailure, "cannot bind " + host + ":" + std::to_string(port));
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return static_cast<std::uint16_t>(bound);
}

void HttpServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

void HttpServer::wait() {
    if (thread_.joinable()) thread_.join();
}

void serve(const NodeConfig& config) {
    TokenTable tokens = load_tokens(config.tokens);
    cas::BlobStore store(config.store);

    std::optional<ledger::Ledger> ledger;
    std::error_code ec;
    if (config.state && std::filesystem::exists(*config.state, ec)) {
        ledger.emplace(ledger::decode_state(read_file(*config.state)));
    } else {
        const auto owner = tokens.owner();
        if (!owner) invalid("a fresh ledger needs an owner token");
        ledger.emplace(ledger::Ledger::genesis(*owner, config.ledger));
        if (config.state) write_file_atomic(*config.state, ledger::encode_state(ledger->state()));
    }

    NodeService service(std::move(*ledger), store, std::move(tokens), config.rate_limit);
    if (config.state) service.persist_to(*config.state);

    // Worker threads inherit the mask, so only sigwait below sees these.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    HttpServer server(service);
    const auto port = server.start(config.bind, config.port);
    std::cerr << "wfl node listening on " << config.bind << ":" << port << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
}

}  // namespace wfl::node
