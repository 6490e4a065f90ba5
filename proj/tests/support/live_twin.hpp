// Copyright 2026 The morris-twin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// A real orchestrator on loopback ports plus TCP cell clients, all in-process.

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <thread>

#include "twin/net/cell_client.hpp"
#include "twin/net/line_client.hpp"
#include "twin/net/server.hpp"

namespace twin::test {

inline bool wait_until(const std::function<bool()>& pred, std::chrono::milliseconds limit,
                       std::chrono::milliseconds step = std::chrono::milliseconds(5)) {
  const auto until = std::chrono::steady_clock::now() + limit;
  while (std::chrono::steady_clock::now() < until) {
    if (pred()) return true;
    std::this_thread::sleep_for(step);
  }
  return pred();
}

class LiveTwin {
 public:
  explicit LiveTwin(orch::OrchestratorConfig cfg = quick_config())
      : server_(std::make_unique<net::OrchestratorServer>(std::move(cfg))),
        thread_([this] { server_->run(); }) {}

  ~LiveTwin() {
    for (auto& [id, c] : cells_) c->stop();
    server_->stop();
    thread_.join();
  }

  static orch::OrchestratorConfig quick_config() {
    orch::OrchestratorConfig cfg;
    cfg.it_port = 0;
    cfg.ot_port = 0;
    cfg.timeout_ms = 400;
    cfg.heartbeat_ms = 200;
    return cfg;
  }

  net::Endpoint it() const { return {"127.0.0.1", server_->it_port()}; }
  net::Endpoint ot() const { return {"127.0.0.1", server_->ot_port()}; }

  net::CellClient& add_cell(const std::string& id, const std::string& platform,
                            double time_scale = 0.0) {
    cell::CellConfig cfg;
    cfg.cell_id = id;
    cfg.platform = cell::PlatformModel::by_tag(platform);
    cfg.time_scale = time_scale;
    auto client = std::make_unique<net::CellClient>(cfg, ot());
    client->start();
    auto& ref = *client;
    cells_[id] = std::move(client);
    return ref;
  }

  net::CellClient& cell(const std::string& id) { return *cells_.at(id); }
  std::map<std::string, std::unique_ptr<net::CellClient>>& cells() { return cells_; }

  template <typename F>
  auto read(F fn) {
    using R = decltype(fn(std::declval<const orch::Orchestrator&>()));
    R out{};
    server_->inspect([&](const orch::Orchestrator& o) { out = fn(o); });
    return out;
  }

  std::string digest() {
    return read([](const orch::Orchestrator& o) { return o.digest(); });
  }

  bool quiescent() {
    return read([](const orch::Orchestrator& o) { return o.quiescent(); });
  }

  /// Every cell online with the authoritative digest, nothing in flight.
  bool settle(std::chrono::milliseconds limit) {
    return wait_until(
        [&] {
          if (!quiescent()) return false;
          const auto views = read([](const orch::Orchestrator& o) { return o.cells(); });
          if (views.size() != cells_.size()) return false;
          for (const auto& [id, v] : views) {
            if (!v.online) return false;
          }
          const auto d = digest();
          for (auto& [id, c] : cells_) {
            if (c->sim().digest() != d) return false;
          }
          return true;
        },
        limit);
  }

 private:
  std::unique_ptr<net::OrchestratorServer> server_;
  std::map<std::string, std::unique_ptr<net::CellClient>> cells_;
  std::thread thread_;
};

/// Hello + JoinGame over a fresh IT connection; returns the client and the seat.
inline std::pair<std::unique_ptr<net::LineClient>, proto::JoinAck> join(
    const net::Endpoint& ep, const std::string& client_id, const std::string& color,
    const std::string& role = "player") {
  auto c = std::make_unique<net::LineClient>(ep);
  c->send(proto::Hello{client_id, role});
  if (!c->expect<proto::HelloAck>(std::chrono::seconds(5))) throw std::runtime_error("no HelloAck");
  c->send(proto::JoinGame{color, std::nullopt});
  auto ack = c->expect<proto::JoinAck>(std::chrono::seconds(5));
  if (!ack) throw std::runtime_error("no JoinAck");
  return {std::move(c), *ack};
}

}  // namespace twin::test
