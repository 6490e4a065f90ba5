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

#include "context.hpp"

#include <stdexcept>

#include "twin/info/schema.hpp"
#include "twin/morris/notation.hpp"

namespace twin::orch::detail {

namespace schema = info::schema;
using info::NodePath;

Context::Context(OrchestratorConfig cfg, info::AddressSpace& sp, Orchestrator::Clock clk,
                 Orchestrator::Logger lg)
    : config(std::move(cfg)),
      space(sp),
      clock(std::move(clk)),
      logger(std::move(lg)),
      state(morris::initial_state()),
      digest(morris::digest_hex(morris::state_digest(state))),
      rng(std::random_device{}()) {}

void Context::note(std::string_view msg) const {
  if (logger) logger(msg);
}

void Context::send(ConnId conn, proto::Body body, std::optional<std::uint64_t> re) {
  auto it = sessions.find(conn);
  if (it == sessions.end()) return;
  proto::Envelope env;
  env.id = ++it->second.next_out_id;
  env.re = re;
  env.body = std::move(body);
  outbox.push_back(Outbound{conn, std::move(env), false});
}

void Context::broadcast_it(const proto::Body& body) {
  for (auto& [conn, s] : sessions) {
    if (s.side == Side::IT) send(conn, body);
  }
}

void Context::error(ConnId conn, std::string_view code, std::string message,
                    std::optional<std::uint64_t> re) {
  note("conn " + std::to_string(conn) + ": " + std::string(code) + ": " + message);
  send(conn, proto::ErrorBody{std::string(code), std::move(message)}, re);
}

void Context::close(ConnId conn) { outbox.push_back(Outbound{conn, std::nullopt, true}); }

proto::StateSnapshot Context::snapshot() const {
  proto::StateSnapshot s;
  s.state = morris::encode_state(state);
  s.status = morris::to_string(morris::game_status(state));
  s.to_move = std::string(morris::to_string(state.to_move));
  s.ply = state.ply;
  s.last_move = last_move;
  for (const auto& [id, cell] : cells) s.cells[id] = cell.status;
  return s;
}

proto::ProcessUpdate Context::process_update(const Process& p) const {
  proto::ProcessUpdate u;
  u.pid = p.pid;
  u.state = std::string(to_string(p.state));
  u.purpose = std::string(to_string(p.purpose));
  if (p.move) u.move = morris::encode_move(*p.move);
  u.reason = p.reason;
  u.pending.assign(p.pending.begin(), p.pending.end());
  u.no_cells = p.no_cells;
  u.resulting_state = p.resulting_state;
  return u;
}

Process& Context::spawn(Purpose purpose, std::string initiator) {
  const Pid pid = purpose == Purpose::Boot ? 0 : next_pid++;
  Process p;
  p.pid = pid;
  p.purpose = purpose;
  p.initiator = std::move(initiator);
  p.created_at = p.updated_at = now();
  auto [it, inserted] = processes.emplace(pid, std::move(p));
  if (!inserted) throw std::logic_error("duplicate pid " + std::to_string(pid));
  schema::define_process_nodes(space, pid, it->second.describe(), it->second.created_at);
  broadcast_it(process_update(it->second));
  return it->second;
}

Step Context::fire(Process& p, ProcEvent e) {
  const Step st = step(p.state, e);
  switch (st.kind) {
    case Step::Kind::Ignore:
      ++ignored;
      note("pid " + std::to_string(p.pid) + ": ignored " + std::string(to_string(e)) + " in " +
           std::string(to_string(p.state)));
      return st;
    case Step::Kind::Undefined:
      throw std::logic_error("undefined transition from " + std::string(to_string(p.state)));
    case Step::Kind::Advance:
      if (!is_legal_edge(p.state, st.next)) {
        throw std::logic_error("illegal edge " + std::string(to_string(p.state)) + " -> " +
                               std::string(to_string(st.next)));
      }
      p.state = st.next;
      p.trace.push_back(st.next);
      break;
    case Step::Kind::Stay:
      break;
  }
  p.updated_at = now();
  space.write_if_changed(schema::process_state(p.pid), p.describe());
  space.write_node(schema::process_updated_at(p.pid), info::Timestamp{p.updated_at});
  broadcast_it(process_update(p));
  if (st.kind == Step::Kind::Advance && is_terminal(p.state)) {
    if (in_flight == p.pid) in_flight.reset();
    if (p.purpose != Purpose::Boot) {
      std::optional<std::string> move;
      if (p.move) move = morris::encode_move(*p.move);
      log.append(ProcessRecord{p.pid, std::string(to_string(p.purpose)), p.describe(), move});
    }
    note("pid " + std::to_string(p.pid) + ": " + p.describe());
  }
  return st;
}

void Context::commit(Pid pid, std::string cause, morris::GameState next,
                     std::optional<std::string> last) {
  AuditEntry entry{pid, std::move(cause), digest, {}};
  state = std::move(next);
  digest = morris::digest_hex(morris::state_digest(state));
  last_move = std::move(last);
  entry.after = digest;
  audit.push_back(std::move(entry));
  publish_game();
}

void Context::publish_game() {
  space.write_node(NodePath::of(schema::kBoard), info::StateBlob{morris::encode_state(state)});
  space.write_node(NodePath::of(schema::kStatus), morris::to_string(morris::game_status(state)));
  space.write_node(NodePath::of(schema::kToMove), std::string(morris::to_string(state.to_move)));
  space.write_node(NodePath::of(schema::kLastMove), info::MoveBlob{last_move.value_or("")});
  space.write_node(NodePath::of(schema::kPly), static_cast<std::int64_t>(state.ply));
}

void Context::set_cell_status(const std::string& id, Cell& cell, std::string status) {
  if (cell.status == status) return;
  note("cell " + id + ": " + cell.status + " -> " + status);
  cell.status = std::move(status);
  space.write_if_changed(schema::cell_status(id), cell.status);
  broadcast_it(proto::StateUpdate{snapshot()});
}

void Context::publish_seat(int color) {
  const auto path = color == 0 ? schema::kPlayerWhite : schema::kPlayerBlack;
  const std::string& holder = seats[color].holder;
  space.write_if_changed(NodePath::of(path), holder.empty() ? std::string("open") : holder);
}

}  // namespace twin::orch::detail
