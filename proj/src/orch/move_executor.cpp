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

#include <limits>

#include "context.hpp"
#include "twin/morris/notation.hpp"

namespace twin::orch::detail {

void MoveExecutor::dispatch(Process& p, proto::CommandType command) {
  ctx_.fire(p, ProcEvent::StartDispatch);
  for (auto& [id, cell] : ctx_.cells) {
    if (!cell.conn) continue;
    proto::CellCommand cmd;
    cmd.command = command;
    cmd.pid = p.pid;
    if (p.move) cmd.move = morris::encode_move(*p.move);
    cmd.expected_digest = ctx_.digest;
    ctx_.send(*cell.conn, cmd);
    cell.resyncs = 0;
    ctx_.set_cell_status(id, cell, "executing");
    p.pending.insert(id);
  }
  if (p.pending.empty()) {
    p.no_cells = true;
    ctx_.fire(p, ProcEvent::NoCells);
    return;
  }
  p.deadline = ctx_.now() + ctx_.config.timeout_ms;
  ctx_.fire(p, ProcEvent::CommandsSent);
}

void MoveExecutor::resync_cell(const std::string& id, Pid pid) {
  auto it = ctx_.cells.find(id);
  if (it == ctx_.cells.end() || !it->second.conn) return;
  ++it->second.resyncs;
  proto::CellCommand cmd;
  cmd.command = proto::CommandType::ResyncState;
  cmd.pid = pid;
  cmd.expected_digest = ctx_.digest;
  cmd.state = morris::encode_state(ctx_.state);
  ctx_.send(*it->second.conn, cmd);
}

void MoveExecutor::cell_lost(const std::string& id) {
  auto it = ctx_.cells.find(id);
  if (it == ctx_.cells.end()) return;
  Cell& cell = it->second;
  if (cell.conn) {
    if (auto s = ctx_.sessions.find(*cell.conn); s != ctx_.sessions.end()) s->second.cell_id.reset();
  }
  cell.conn.reset();
  cell.missed_pongs = 0;
  ctx_.set_cell_status(id, cell, "offline");
  if (!ctx_.in_flight) return;
  Process& p = ctx_.processes.at(*ctx_.in_flight);
  if (p.pending.erase(id) == 0) return;
  ctx_.fire(p, p.pending.empty() ? ProcEvent::CellLostLast : ProcEvent::CellLost);
}

void MoveExecutor::check_timeouts() {
  if (!ctx_.in_flight) return;
  Process& p = ctx_.processes.at(*ctx_.in_flight);
  if (p.state != ProcState::AwaitingConfirmations || ctx_.now() < p.deadline) return;
  p.timed_out = p.pending;
  std::string detail = "timed-out:";
  bool first = true;
  for (const auto& id : p.timed_out) {
    if (!first) detail += ',';
    detail += id;
    first = false;
  }
  p.reason = detail;
  ctx_.fire(p, ProcEvent::Timeout);
  // The game has moved on; bring the silent cells back in line.
  for (const auto& id : p.timed_out) {
    auto it = ctx_.cells.find(id);
    if (it == ctx_.cells.end() || !it->second.conn) continue;
    ctx_.set_cell_status(id, it->second, "diverged");
    resync_cell(id, 0);
  }
}

Millis MoveExecutor::next_timeout() const {
  if (!ctx_.in_flight) return std::numeric_limits<Millis>::max();
  const Process& p = ctx_.processes.at(*ctx_.in_flight);
  if (p.state != ProcState::AwaitingConfirmations) return std::numeric_limits<Millis>::max();
  return p.deadline;
}

}  // namespace twin::orch::detail
