#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "wfl/ledger/types.hpp"
#include "wfl/node/service.hpp"

namespace httplib {
class Server;
}

namespace wfl::node {

// TOML, paths relative to the config file:
//   bind = "127.0.0.1"   port = 8080
//   tokens = "tokens.json"   store = "store"   state = "ledger.bin" (optional)
//   [rate_limit] capacity, refill_per_second     [ledger] LedgerParams fields
struct NodeConfig {
    std::string bind = "127.0.0.1";
    std::uint16_t port = 8080;
    std::filesystem::path tokens;
    std::filesystem::path store = "store";
    std::optional<std::filesystem::path> state;
    RateLimit rate_limit;
    ledger::LedgerParams ledger;
};

/// Throws NodeError{InvalidConfig}.
NodeConfig load_node_config(const std::filesystem::path& path);

/// Serves a NodeService over HTTP on a background thread.
class HttpServer {
public:
    explicit HttpServer(NodeService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds (port 0 picks a free port) and starts serving. Throws NodeError{BindFailure}.
    std::uint16_t start(const std::string& host, std::uint16_t port);
    void stop();
    /// Blocks until stop() is called from another thread or a signal handler.
    void wait();

private:
    NodeService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

/// Builds the service described by `config` (loading or creating the ledger
/// state; a fresh ledger's owner is the Owner token's account) and runs it
/// until the process is stopped.
void serve(const NodeConfig& config);

}  // namespace wfl::node
