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

#include "twin/orch/orchestrator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "context.hpp"
#include "twin/info/schema.hpp"
#include "twin/morris/notation.hpp"

namespace twin::orch {

namespace schema = info::schema;

void OrchestratorConfig::apply(const KeyValueConfig& cfg) {
  auto port = [&](const char* key, std::uint16_t& out) {
    if (auto v = cfg.get_int(key)) {
      if (*v < 0 || *v > 65535) throw std::runtime_error(std::string(key) + " out of range");
      out = static_cast<std::uint16_t>(*v);
    }
  };
  auto positive = [&](const char* key, auto& out) {
    if (auto v = cfg.get_int(key)) {
      if (*v <= 0) throw std::runtime_error(std::string(key) + " must be positive");
      out = static_cast<std::remove_reference_t<decltype(out)>>(*v);
    }
  };
  port("it_port", it_port);
  port("ot_port", ot_port);
  positive("timeout_ms", timeout_ms);
  positive("heartbeat_ms", heartbeat_ms);
  positive("missed_pongs", missed_pongs_offline);
  positive("divergence_limit", divergence_limit);
  if (auto v = cfg.get("log_file")) log_file = *v;
}

namespace {

std::optional<ProcState> parse_state(std::string_view name) {
  for (std::size_t i = 0; i < kProcStateCount; ++i) {
    const auto s = static_cast<ProcState>(i);
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

Purpose parse_purpose(std::string_view name) {
  if (name == "reset") return Purpose::Reset;
  if (name == "boot") return Purpose::Boot;
  return Purpose::Move;
}

// Rebuilds game state, seats and finished processes from the log, then
// closes out processes the crash interrupted.
void recover(detail::Context& ctx) {
  Replay replay = replay_log(ctx.config.log_file);
  if (replay.truncated_tail) ctx.note("log: ignoring torn final record");
  ctx.log = EventLog(ctx.config.log_file);

  std::map<Pid, Process> open;
  std::optional<std::string> last_move;
  for (const auto& rec : replay.records) {
    if (const auto* m = std::get_if<MoveRecord>(&rec)) {
      Process p;
      p.pid = m->pid;
      p.purpose = Purpose::Move;
      p.move = *morris::decode_move(m->move);
      p.resulting_digest = m->digest;
      open[m->pid] = std::move(p);
      last_move = m->move;
    } else if (const auto* r = std::get_if<ResetRecord>(&rec)) {
      Process p;
      p.pid = r->pid;
      p.purpose = Purpose::Reset;
      p.resulting_digest = r->digest;
      open[r->pid] = std::move(p);
      last_move.reset();
    } else if (const auto* pr = std::get_if<ProcessRecord>(&rec)) {
      open.erase(pr->pid);
      Process p;
      p.pid = pr->pid;
      p.purpose = parse_purpose(pr->purpose);
      if (pr->move) {
        if (auto mv = morris::decode_move(*pr->move)) p.move = *mv;
      }
      const std::string_view text = pr->state;
      const auto colon = text.find(':');
      p.state = parse_state(text.substr(0, colon)).value_or(ProcState::Failed);
      if (colon != std::string_view::npos) {
        std::string detail(text.substr(colon + 1));
        if (detail == "no-cells") {
          p.no_cells = true;
        } else {
          p.reason = detail;
        }
      }
      p.trace = {p.state};
      ctx.processes[p.pid] = std::move(p);
    } else if (const auto* s = std::get_if<SeatRecord>(&rec)) {
      const int c = s->color == "black" ? 1 : 0;
      ctx.seats[c].holder = s->holder;
      ctx.seats[c].token = s->token;
    }
  }

  for (auto& [pid, p] : open) {
    p.state = ProcState::Failed;
    p.reason = "interrupted";
    p.trace = {ProcState::Failed};
    ctx.log.append(ProcessRecord{pid, std::string(to_string(p.purpose)), p.describe(),
                                 p.move ? std::optional(morris::encode_move(*p.move))
                                        : std::nullopt});
    ctx.processes[pid] = std::move(p);
  }
  const Millis now = ctx.now();
  for (auto& [pid, p] : ctx.processes) {
    p.created_at = p.updated_at = now;
    schema::define_process_nodes(ctx.space, pid, p.describe(), now);
  }

  ctx.next_pid = replay.max_pid + 1;
  if (morris::state_digest(replay.state) != morris::state_digest(ctx.state)) {
    ctx.commit(0, "recovery", std::move(replay.state), last_move);
  } else {
    ctx.last_move = last_move;
    ctx.publish_game();
  }
  ctx.note("recovered " + std::to_string(replay.records.size()) + " records, digest " +
           ctx.digest);
}

}  // namespace

Orchestrator::Orchestrator(OrchestratorConfig config, info::AddressSpace& space, Clock clock,
                           Logger log)
    : ctx_(std::make_unique<detail::Context>(std::move(config), space, std::move(clock),
                                             std::move(log))) {
  executor_ = std::make_unique<detail::MoveExecutor>(*ctx_);
  provider_ = std::make_unique<detail::MoveProvider>(*ctx_, *executor_);
  aggregator_ = std::make_unique<detail::DataAggregator>(*ctx_, *executor_);
  server_ = std::make_unique<detail::GameServer>(*ctx_, *provider_, *executor_, *aggregator_);

  detail::Context& ctx = *ctx_;
  schema::define_game_nodes(space, morris::encode_state(ctx.state),
                            morris::to_string(morris::game_status(ctx.state)),
                            std::string(morris::to_string(ctx.state.to_move)), ctx.state.ply);
  if (!ctx.config.log_file.empty()) recover(ctx);
  for (int c = 0; c < 2; ++c) ctx.publish_seat(c);

  // The boot process owns maintenance traffic (pid 0).
  Process& boot = ctx.spawn(Purpose::Boot, "orchestrator");
  ctx.fire(boot, ProcEvent::Accept);
  ctx.fire(boot, ProcEvent::StartDispatch);
  boot.no_cells = true;
  ctx.fire(boot, ProcEvent::NoCells);
  boot.resulting_state = morris::encode_state(ctx.state);
  boot.resulting_digest = ctx.digest;

  ctx.next_heartbeat = ctx.now() + ctx.config.heartbeat_ms;
  ctx.outbox.clear();
}

Orchestrator::~Orchestrator() = default;

void Orchestrator::on_connect(ConnId conn, Side side) { server_->on_connect(conn, side); }
void Orchestrator::on_disconnect(ConnId conn) { server_->on_disconnect(conn); }
void Orchestrator::on_frame(ConnId conn, std::string_view line) { server_->on_frame(conn, line); }
void Orchestrator::handle(ConnId conn, const proto::Envelope& env) { server_->handle(conn, env); }

void Orchestrator::tick() {
  executor_->check_timeouts();
  if (ctx_->now() >= ctx_->next_heartbeat) {
    server_->heartbeat();
    ctx_->next_heartbeat = ctx_->now() + ctx_->config.heartbeat_ms;
  }
}

Millis Orchestrator::next_deadline() const {
  return std::min(executor_->next_timeout(), ctx_->next_heartbeat);
}

std::vector<Outbound> Orchestrator::take_outbox() {
  std::vector<Outbound> out;
  out.swap(ctx_->outbox);
  return out;
}

const morris::GameState& Orchestrator::state() const { return ctx_->state; }
std::string Orchestrator::digest() const { return ctx_->digest; }

const Process* Orchestrator::process(Pid pid) const {
  auto it = ctx_->processes.find(pid);
  return it == ctx_->processes.end() ? nullptr : &it->second;
}

std::vector<Pid> Orchestrator::pids() const {
  std::vector<Pid> out;
  for (const auto& [pid, p] : ctx_->processes) out.push_back(pid);
  return out;
}

std::optional<Pid> Orchestrator::in_flight() const { return ctx_->in_flight; }

std::map<std::string, CellView> Orchestrator::cells() const {
  std::map<std::string, CellView> out;
  for (const auto& [id, c] : ctx_->cells) {
    out[id] = CellView{c.platform, c.status, c.last_report_digest, c.conn.has_value()};
  }
  return out;
}

const std::vector<AuditEntry>& Orchestrator::audit() const { return ctx_->audit; }
std::size_t Orchestrator::ignored_events() const { return ctx_->ignored; }

bool Orchestrator::quiescent() const {
  if (ctx_->in_flight) return false;
  return std::all_of(ctx_->cells.begin(), ctx_->cells.end(), [&](const auto& kv) {
    return !kv.second.conn || (kv.second.status == "synced" &&
                               kv.second.last_report_digest == ctx_->digest);
  });
}

proto::StateSnapshot Orchestrator::snapshot() const { return ctx_->snapshot(); }

}  // namespace twin::orch
