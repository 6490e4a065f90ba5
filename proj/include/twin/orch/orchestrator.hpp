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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twin/info/address_space.hpp"
#include "twin/morris/game.hpp"
#include "twin/orch/process.hpp"
#include "twin/proto/envelope.hpp"
#include "twin/util/kv_config.hpp"

namespace twin::orch {

using ConnId = std::uint64_t;

/// Which listener a connection arrived on.
enum class Side : std::uint8_t { IT, OT };

struct OrchestratorConfig {
  std::uint16_t it_port = 4840;
  std::uint16_t ot_port = 4841;
  Millis timeout_ms = 10000;
  Millis heartbeat_ms = 2000;
  int missed_pongs_offline = 3;
  // A pending cell that diverges more often than this fails the process.
  int divergence_limit = 3;
  std::string log_file;  // empty: nothing persisted

  /// Reads it_port, ot_port, timeout_ms, heartbeat_ms, missed_pongs,
  /// divergence_limit and log_file. Unknown keys are ignored.
  void apply(const KeyValueConfig& cfg);
};

/// One frame to send, or a request to close the connection after
/// everything queued before it has been written.
struct Outbound {
  ConnId conn = 0;
  std::optional<proto::Envelope> envelope;
  bool close = false;
};

/// Authoritative state changes, in order.
struct AuditEntry {
  Pid pid = 0;
  std::string cause;  // move | reset | recovery
  std::string before;
  std::string after;
};

struct CellView {
  std::string platform;
  std::string status;  // registered | executing | synced | diverged | offline
  std::optional<std::string> last_report_digest;
  bool online = false;
};

namespace detail {
struct Context;
class GameServer;
class MoveProvider;
class MoveExecutor;
class DataAggregator;
}  // namespace detail

/// The twin. All methods must be called from one thread (or strand); the
/// transport feeds frames in and drains `take_outbox()` after each call.
class Orchestrator {
 public:
  using Clock = std::function<Millis()>;
  using Logger = std::function<void(std::string_view)>;

  /// Replays `config.log_file` when it exists. Throws std::runtime_error
  /// when the log is inconsistent.
  Orchestrator(OrchestratorConfig config, info::AddressSpace& space, Clock clock,
               Logger log = {});
  ~Orchestrator();
  Orchestrator(const Orchestrator&) = delete;
  Orchestrator& operator=(const Orchestrator&) = delete;

  void on_connect(ConnId conn, Side side);
  void on_disconnect(ConnId conn);
  /// Decodes one line and handles it; codec failures are answered with Error.
  void on_frame(ConnId conn, std::string_view line);
  void handle(ConnId conn, const proto::Envelope& env);
  /// Fires expired timeouts and due heartbeats.
  void tick();
  /// Earliest time at which tick() has work to do.
  Millis next_deadline() const;
  std::vector<Outbound> take_outbox();

  const morris::GameState& state() const;
  std::string digest() const;
  const Process* process(Pid pid) const;
  std::vector<Pid> pids() const;
  std::optional<Pid> in_flight() const;
  std::map<std::string, CellView> cells() const;
  const std::vector<AuditEntry>& audit() const;
  /// (state, event) pairs that the process machine dropped.
  std::size_t ignored_events() const;
  /// No process in flight and every online cell synced.
  bool quiescent() const;
  proto::StateSnapshot snapshot() const;

 private:
  std::unique_ptr<detail::Context> ctx_;
  std::unique_ptr<detail::GameServer> server_;
  std::unique_ptr<detail::MoveProvider> provider_;
  std::unique_ptr<detail::MoveExecutor> executor_;
  std::unique_ptr<detail::DataAggregator> aggregator_;
};

}  // namespace twin::orch
