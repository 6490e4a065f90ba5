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

#include <cstdint>
#include <functional>
#include <future>
#include <memory>
#include <string_view>

#include "twin/info/address_space.hpp"
#include "twin/orch/orchestrator.hpp"

namespace twin::net {

/// Wall clock in integer milliseconds since the Unix epoch.
orch::Millis wall_clock_ms();

/// TCP front end of the orchestrator: one listener per side, one event loop
/// thread owning the Orchestrator.
class OrchestratorServer {
 public:
  using Logger = std::function<void(std::string_view)>;

  /// Binds both ports (0 picks a free one) and boots the orchestrator. Throws
  /// std::system_error when a port cannot be bound and std::runtime_error on
  /// a bad log file.
  OrchestratorServer(orch::OrchestratorConfig config, Logger log = {});
  ~OrchestratorServer();
  OrchestratorServer(const OrchestratorServer&) = delete;
  OrchestratorServer& operator=(const OrchestratorServer&) = delete;

  /// Serves until stop(). Call from exactly one thread.
  void run();
  /// Thread-safe; run() returns once open connections are closed.
  void stop();

  std::uint16_t it_port() const;
  std::uint16_t ot_port() const;
  info::AddressSpace& space();

  /// Runs `fn` on the event loop thread and waits for it. For tests and
  /// diagnostics; the loop must be running.
  void inspect(std::function<void(const orch::Orchestrator&)> fn);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace twin::net
