// Copyright 2026 The Kaya Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace kaya::server {

using Clock = std::chrono::system_clock;

struct ServerOptions {
    /// Sessions are mirrored here as <id>.json and reloaded on start.
    std::optional<std::filesystem::path> state_dir;
    std::chrono::seconds ttl = std::chrono::hours{24};
    /// Injected for expiry tests; system_clock::now when empty.
    std::function<Clock::time_point()> now;
};

/// HTTP/JSON facade over the shared app core:
///   POST /sessions, POST /sessions/:id/contracts, PUT /sessions/:id/case,
///   POST /sessions/:id/run, GET /sessions/:id/report, GET /health.
class ApiServer {
public:
    explicit ApiServer(ServerOptions options = {});
    ~ApiServer();
    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Port 0 picks a free port. Returns false when the address is taken.
    bool bind(const std::string& host, int port);
    int port() const noexcept;
    /// Blocks until stop(); requires a successful bind.
    bool listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace kaya::server
