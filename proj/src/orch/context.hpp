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

// Shared state of the four orchestrator components. Private to src/orch.

#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "twin/orch/event_log.hpp"
#include "twin/orch/orchestrator.hpp"
#include "twin/proto/codec.hpp"

namespace twin::orch::detail {

struct Session {
  Side side = Side::IT;
  proto::MsgIdGuard guard;
  std::uint64_t next_out_id = 0;
  std::string client_id;
  std::string role = "player";
  std::optional<std::string> cell_id;  // OT sessions after RegisterCell
};

struct Cell {
  std::string platform;
  std::string status = "offline";  // until the first RegisterCell
  std::optional<ConnId> conn;  // unset while offline
  std::optional<std::string> last_report_digest;
  int missed_pongs = 0;
  int resyncs = 0;  // resyncs sent since the last matching report
};

struct Seat {
  std::string holder;  // client id; empty while open
  std::string token;
  std::optional<ConnId> conn;
};

struct Context {
  Context(OrchestratorConfig cfg, info::AddressSpace& sp, Orchestrator::Clock clk,
          Orchestrator::Logger lg);

  OrchestratorConfig config;
  info::AddressSpace& space;
  Orchestrator::Clock clock;
  Orchestrator::Logger logger;
  EventLog log;

  morris::GameState state;
  std::string digest;
  std::optional<std::string> last_move;

  std::map<Pid, Process> processes;
  Pid next_pid = 1;
  std::optional<Pid> in_flight;

  std::map<ConnId, Session> sessions;
  std::map<std::string, Cell> cells;
  std::array<Seat, 2> seats;

  std::vector<Outbound> outbox;
  std::vector<AuditEntry> audit;
  std::size_t ignored = 0;
  Millis next_heartbeat = 0;
  std::mt19937_64 rng;

  Millis now() const { return clock(); }
  void note(std::string_view msg) const;

  void send(ConnId conn, proto::Body body, std::optional<std::uint64_t> re = std::nullopt);
  void broadcast_it(const proto::Body& body);
  void error(ConnId conn, std::string_view code, std::string message,
             std::optional<std::uint64_t> re = std::nullopt);
  void close(ConnId conn);

  proto::StateSnapshot snapshot() const;
  proto::ProcessUpdate process_update(const Process& p) const;

  Process& spawn(Purpose purpose, std::string initiator);
  /// Feeds one event to the process machine, publishes the outcome and
  /// returns the step taken.
  Step fire(Process& p, ProcEvent e);

  /// The only place the authoritative state changes.
  void commit(Pid pid, std::string cause, morris::GameState next,
              std::optional<std::string> last);
  void publish_game();
  void set_cell_status(const std::string& id, Cell& cell, std::string status);
  void publish_seat(int color);
};

class MoveExecutor {
 public:
  explicit MoveExecutor(Context& ctx) : ctx_(ctx) {}

  /// Fans `command` out to every online cell and arms the timeout.
  void dispatch(Process& p, proto::CommandType command);
  void resync_cell(const std::string& id, Pid pid);
  void cell_lost(const std::string& id);
  void check_timeouts();
  Millis next_timeout() const;

 private:
  Context& ctx_;
};

class MoveProvider {
 public:
  MoveProvider(Context& ctx, MoveExecutor& executor) : ctx_(ctx), executor_(executor) {}

  void submit(ConnId conn, const proto::SubmitMove& body, std::uint64_t re);
  void reset(ConnId conn, std::uint64_t re);

 private:
  Context& ctx_;
  MoveExecutor& executor_;
};

class DataAggregator {
 public:
  DataAggregator(Context& ctx, MoveExecutor& executor) : ctx_(ctx), executor_(executor) {}

  void register_cell(ConnId conn, const proto::RegisterCell& body, std::uint64_t re);
  void on_report(ConnId conn, const proto::CellStateReport& report, std::uint64_t re);

 private:
  Context& ctx_;
  MoveExecutor& executor_;
};

class GameServer {
 public:
  GameServer(Context& ctx, MoveProvider& provider, MoveExecutor& executor,
             DataAggregator& aggregator)
      : ctx_(ctx), provider_(provider), executor_(executor), aggregator_(aggregator) {}

  void on_connect(ConnId conn, Side side);
  void on_disconnect(ConnId conn);
  void on_frame(ConnId conn, std::string_view line);
  void handle(ConnId conn, const proto::Envelope& env);
  void heartbeat();

 private:
  void hello(ConnId conn, Session& s, const proto::Hello& body, std::uint64_t re);
  void join(ConnId conn, Session& s, const proto::JoinGame& body, std::uint64_t re);

  Context& ctx_;
  MoveProvider& provider_;
  MoveExecutor& executor_;
  DataAggregator& aggregator_;
};

}  // namespace twin::orch::detail
