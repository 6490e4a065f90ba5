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

// Deterministic in-process network: one orchestrator, scripted IT clients and
// simulated cells, all driven by a virtual clock.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "twin/cell/cell.hpp"
#include "twin/info/address_space.hpp"
#include "twin/orch/orchestrator.hpp"
#include "twin/proto/codec.hpp"

namespace twin::test {

class SimNetwork {
 public:
  using ConnId = orch::ConnId;
  using Millis = orch::Millis;

  struct Peer {
    orch::Side side = orch::Side::IT;
    std::uint64_t next_id = 0;
    std::deque<proto::Envelope> inbox;
    std::string cell_id;  // OT peers
  };

  struct SimCell {
    std::string id;
    std::string platform;
    std::unique_ptr<cell::CellSim> sim;
    std::optional<ConnId> conn;
    bool answer_pings = true;
    bool reconnect = true;
    std::size_t registrations = 0;
    Millis busy_until = 0;  // the executor is FIFO
  };

  explicit SimNetwork(orch::OrchestratorConfig cfg = {}) : config_(std::move(cfg)) { boot(); }

  orch::Orchestrator& orch() { return *orch_; }
  info::AddressSpace& space() { return *space_; }
  Millis now() const { return now_; }
  std::vector<std::string>& log_lines() { return log_; }

  ConnId connect_it() {
    const ConnId c = ++next_conn_;
    peers_[c] = Peer{orch::Side::IT, 0, {}, {}};
    orch_->on_connect(c, orch::Side::IT);
    pump();
    return c;
  }

  /// Sends through the real codec; returns the message id used.
  std::uint64_t send(ConnId conn, proto::Body body) {
    Peer& p = peers_.at(conn);
    proto::Envelope env;
    env.id = ++p.next_id;
    env.body = std::move(body);
    orch_->on_frame(conn, proto::encode(env));
    pump();
    return env.id;
  }

  void send_raw(ConnId conn, const std::string& line) {
    orch_->on_frame(conn, line);
    pump();
  }

  std::vector<proto::Envelope> take(ConnId conn) {
    auto& q = peers_.at(conn).inbox;
    std::vector<proto::Envelope> out(q.begin(), q.end());
    q.clear();
    return out;
  }

  template <typename T>
  std::vector<T> take_kind(ConnId conn) {
    std::vector<T> out;
    for (const auto& e : take(conn)) {
      if (const T* b = e.as<T>()) out.push_back(*b);
    }
    return out;
  }

  /// Hello + JoinGame; returns the JoinAck.
  proto::JoinAck join(ConnId conn, std::string client, std::string color = "any",
                      std::string role = "player") {
    send(conn, proto::Hello{std::move(client), std::move(role)});
    send(conn, proto::JoinGame{std::move(color), std::nullopt});
    auto acks = take_kind<proto::JoinAck>(conn);
    if (acks.empty()) throw std::runtime_error("no JoinAck");
    return acks.back();
  }

  SimCell& add_cell(const std::string& id, const std::string& platform) {
    cell::CellConfig cfg;
    cfg.cell_id = id;
    cfg.platform = cell::PlatformModel::by_tag(platform);
    auto& c = cells_[id];
    c.id = id;
    c.platform = platform;
    c.sim = std::make_unique<cell::CellSim>(cfg);
    connect_cell(c);
    return c;
  }

  SimCell& cell(const std::string& id) { return cells_.at(id); }
  std::map<std::string, SimCell>& cells() { return cells_; }

  void disconnect(ConnId conn) {
    auto it = peers_.find(conn);
    if (it == peers_.end()) return;
    const std::string cell_id = it->second.cell_id;
    peers_.erase(it);
    orch_->on_disconnect(conn);
    if (!cell_id.empty()) {
      auto& c = cells_.at(cell_id);
      if (c.conn == conn) {
        c.conn.reset();
        if (c.reconnect) at(now_ + kReconnectMs, [this, cell_id] { connect_cell(cells_.at(cell_id)); });
      }
    }
    pump();
  }

  /// Runs the clock forward, firing orchestrator deadlines and scheduled
  /// deliveries in time order.
  void advance(Millis ms) {
    const Millis target = now_ + ms;
    for (;;) {
      Millis next = orch_->next_deadline();
      if (!events_.empty()) next = std::min(next, events_.top().when);
      if (next > target) break;
      now_ = std::max(now_, next);
      orch_->tick();
      pump();
    }
    now_ = target;
    orch_->tick();
    pump();
  }

  /// Advances in small steps until the orchestrator is quiescent and every
  /// cell is online. False when `limit_ms` passes first.
  bool settle(Millis limit_ms) {
    const Millis end = now_ + limit_ms;
    while (now_ < end) {
      if (orch_->quiescent() && all_cells_online()) return true;
      advance(10);
    }
    return orch_->quiescent() && all_cells_online();
  }

  bool all_cells_online() const {
    for (const auto& [id, c] : cells_) {
      if (!c.conn) return false;
    }
    return true;
  }

  /// Drops the orchestrator without a goodbye and boots a fresh one from the
  /// same configuration (and log file). Cells reconnect on their own.
  void crash_and_restart() {
    std::vector<std::string> cell_ids;
    for (auto& [id, c] : cells_) {
      if (c.conn) cell_ids.push_back(id);
      c.conn.reset();
    }
    peers_.clear();
    while (!events_.empty()) events_.pop();
    orch_.reset();
    boot();
    for (const auto& id : cell_ids) {
      at(now_ + kReconnectMs, [this, id] { connect_cell(cells_.at(id)); });
    }
  }

  static constexpr Millis kReconnectMs = 50;

 private:
  struct Event {
    Millis when;
    std::uint64_t seq;
    std::function<void()> fn;
    bool operator>(const Event& o) const { return when != o.when ? when > o.when : seq > o.seq; }
  };

  void boot() {
    space_ = std::make_unique<info::AddressSpace>();
    orch_ = std::make_unique<orch::Orchestrator>(
        config_, *space_, [this] { return now_; },
        [this](std::string_view line) { log_.emplace_back(line); });
  }

  void at(Millis when, std::function<void()> fn) {
    events_.push(Event{when, ++seq_, std::move(fn)});
  }

  void connect_cell(SimCell& c) {
    const ConnId conn = ++next_conn_;
    peers_[conn] = Peer{orch::Side::OT, 0, {}, c.id};
    c.conn = conn;
    ++c.registrations;
    orch_->on_connect(conn, orch::Side::OT);
    send(conn, proto::RegisterCell{c.id, c.platform});
  }

  void cell_send(SimCell& c, proto::Body body) {
    if (!c.conn) return;
    send(*c.conn, std::move(body));
  }

  void deliver_to_cell(SimCell& c, const proto::Envelope& env) {
    if (env.as<proto::Ping>()) {
      if (c.answer_pings) at(now_, [this, id = c.id] { cell_send(cells_.at(id), proto::Pong{}); });
      return;
    }
    const auto* cmd = env.as<proto::CellCommand>();
    if (!cmd) return;
    const cell::Admission adm = c.sim->admit(*cmd);
    if (adm.dropped) {
      if (adm.disconnect_ms > 0) {
        const ConnId conn = *c.conn;
        const bool reconnect = c.reconnect;
        c.reconnect = false;
        at(now_, [this, conn] { disconnect(conn); });
        at(now_ + adm.disconnect_ms, [this, id = c.id, reconnect] {
          auto& cc = cells_.at(id);
          cc.reconnect = reconnect;
          connect_cell(cc);
        });
      }
      return;
    }
    const ConnId conn = *c.conn;
    at(now_, [this, id = c.id, conn, pid = cmd->pid, type = cmd->command] {
      auto& cc = cells_.at(id);
      if (cc.conn == conn) cell_send(cc, proto::CellAck{pid, type});
    });
    c.busy_until = std::max(c.busy_until, now_) + static_cast<Millis>(adm.delay_ms);
    at(c.busy_until, [this, id = c.id, conn, command = *cmd] {
      auto& cc = cells_.at(id);
      auto report = cc.sim->execute(command);
      if (cc.conn == conn) cell_send(cc, report);
    });
  }

  // Re-entrant calls return at once; the outermost loop drains everything.
  void pump() {
    if (pumping_) return;
    pumping_ = true;
    struct Reset {
      bool& flag;
      ~Reset() { flag = false; }
    } reset{pumping_};
    for (int guard = 0; guard < 1000000; ++guard) {
      auto out = orch_->take_outbox();
      bool due = !events_.empty() && events_.top().when <= now_;
      if (out.empty() && !due) return;
      for (auto& o : out) {
        auto it = peers_.find(o.conn);
        if (it == peers_.end()) continue;
        if (o.close) {
          at(now_, [this, conn = o.conn] { disconnect(conn); });
          continue;
        }
        // Round-trip through the codec like a real socket would.
        auto decoded = proto::decode_frame(proto::encode(*o.envelope));
        if (!decoded) throw std::logic_error("orchestrator sent an undecodable frame");
        if (it->second.side == orch::Side::OT) {
          deliver_to_cell(cells_.at(it->second.cell_id), *decoded);
        } else {
          it->second.inbox.push_back(*decoded);
        }
      }
      while (!events_.empty() && events_.top().when <= now_) {
        auto fn = events_.top().fn;
        events_.pop();
        fn();
      }
    }
    throw std::logic_error("message storm");
  }

  orch::OrchestratorConfig config_;
  std::unique_ptr<info::AddressSpace> space_;
  std::unique_ptr<orch::Orchestrator> orch_;
  Millis now_ = 1'000'000;
  ConnId next_conn_ = 0;
  std::map<ConnId, Peer> peers_;
  std::map<std::string, SimCell> cells_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t seq_ = 0;
  std::vector<std::string> log_;
  bool pumping_ = false;
};

}  // namespace twin::test
