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

#include "twin/cell/cell.hpp"

#include <charconv>
#include <chrono>
#include <stdexcept>
#include <thread>

#include "twin/morris/notation.hpp"

namespace twin::cell {

using proto::CommandType;

Result<std::vector<FaultSpec>> FaultSpec::parse_list(std::string_view text) {
  std::vector<FaultSpec> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    std::string_view name = item.substr(0, item.find(':'));
    std::optional<std::int64_t> arg;
    if (auto colon = item.find(':'); colon != std::string_view::npos) {
      std::string_view digits = item.substr(colon + 1);
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || v < 0) {
        return ParseError{start + colon + 1, "expected a non-negative integer"};
      }
      arg = v;
    }
    FaultSpec f;
    bool needs_arg = true;
    if (name == "drop-next") {
      f.kind = Kind::DropNext;
      needs_arg = false;
    } else if (name == "drop-every") {
      f.kind = Kind::DropEvery;
    } else if (name == "delay") {
      f.kind = Kind::Delay;
    } else if (name == "corrupt-next") {
      f.kind = Kind::CorruptNext;
      needs_arg = false;
    } else if (name == "corrupt-every") {
      f.kind = Kind::CorruptEvery;
    } else if (name == "disconnect") {
      f.kind = Kind::Disconnect;
    } else {
      return ParseError{start, "unknown fault '" + std::string(name) + "'"};
    }
    if (needs_arg != arg.has_value()) {
      return ParseError{start, needs_arg ? "fault needs ':<number>'" : "fault takes no argument"};
    }
    if ((f.kind == Kind::DropEvery || f.kind == Kind::CorruptEvery) && *arg == 0) {
      return ParseError{start, "period must be positive"};
    }
    f.value = arg.value_or(0);
    out.push_back(f);
    start = end + 1;
  }
  return out;
}

std::string FaultSpec::str() const {
  switch (kind) {
    case Kind::DropNext: return "drop-next";
    case Kind::DropEvery: return "drop-every:" + std::to_string(value);
    case Kind::Delay: return "delay:" + std::to_string(value);
    case Kind::CorruptNext: return "corrupt-next";
    case Kind::CorruptEvery: return "corrupt-every:" + std::to_string(value);
    case Kind::Disconnect: return "disconnect:" + std::to_string(value);
  }
  return "?";
}

CellSim::CellSim(CellConfig config)
    : config_(std::move(config)),
      mirror_(morris::initial_state()),
      physical_(mirror_) {}

void CellSim::inject_fault(const FaultSpec& f) {
  std::lock_guard lock(mu_);
  switch (f.kind) {
    case FaultSpec::Kind::DropNext: ++pending_drops_; break;
    case FaultSpec::Kind::CorruptNext: ++pending_corrupts_; break;
    case FaultSpec::Kind::Delay: pending_delay_ms_ += static_cast<double>(f.value); break;
    case FaultSpec::Kind::Disconnect: pending_disconnect_ms_ = f.value; break;
    case FaultSpec::Kind::DropEvery:
    case FaultSpec::Kind::CorruptEvery: faults_.push_back(f); break;
  }
}

void CellSim::clear_faults() {
  std::lock_guard lock(mu_);
  faults_.clear();
  pending_drops_ = pending_corrupts_ = 0;
  pending_delay_ms_ = 0.0;
  pending_disconnect_ms_ = 0;
}

Admission CellSim::admit(const proto::CellCommand&) {
  std::lock_guard lock(mu_);
  ++admitted_;
  Admission a;
  if (pending_disconnect_ms_ > 0) {
    // The connection drops while the command is in flight.
    a.dropped = true;
    a.disconnect_ms = pending_disconnect_ms_;
    pending_disconnect_ms_ = 0;
    return a;
  }
  if (pending_drops_ > 0) {
    --pending_drops_;
    a.dropped = true;
    return a;
  }
  for (const auto& f : faults_) {
    if (f.kind == FaultSpec::Kind::DropEvery && admitted_ % static_cast<std::uint64_t>(f.value) == 0) {
      a.dropped = true;
      return a;
    }
  }
  a.delay_ms = pending_delay_ms_;
  pending_delay_ms_ = 0.0;
  return a;
}

proto::CellStateReport CellSim::execute(const proto::CellCommand& cmd) {
  std::optional<MotionPlan> plan;
  morris::GameState next;
  std::string outcome;
  {
    std::lock_guard lock(mu_);
    switch (cmd.command) {
      case CommandType::ApplyMove: {
        auto move = morris::decode_move(cmd.move.value_or(""));
        if (!move) {
          outcome = "illegal-local";
          break;
        }
        auto planned = plan_motion(mirror_, *move, config_.geometry, config_.platform);
        if (!planned) {
          outcome = "illegal-local";
          break;
        }
        plan = std::move(planned).value();
        next = morris::apply_legal_move(mirror_, *move);
        outcome = "applied";
        break;
      }
      case CommandType::ResyncState: {
        auto state = morris::decode_state(cmd.state.value_or(""));
        if (!state) {
          outcome = "illegal-local";
          break;
        }
        next = std::move(state).value();
        outcome = "resynced";
        break;
      }
      case CommandType::ResetBoard:
        next = morris::initial_state();
        outcome = "reset";
        break;
    }
  }

  const double duration = plan ? plan->total_ms : 0.0;
  if (config_.time_scale > 0.0 && duration > 0.0) {
    std::this_thread::sleep_for(
        std::chrono::duration<double, std::milli>(duration * config_.time_scale));
  }

  std::lock_guard lock(mu_);
  ++executed_;
  if (outcome == "applied") {
    physical_.execute(*plan);
    mirror_ = std::move(next);
    sim_clock_ms_ += duration;
    if (physical_.tokens(morris::Player::White) != mirror_.tokens[0] ||
        physical_.tokens(morris::Player::Black) != mirror_.tokens[1]) {
      throw std::logic_error("motion plan and move disagree on the board");
    }
  } else if (outcome == "resynced" || outcome == "reset") {
    // Tokens are rearranged by hand; the physical model follows the mirror.
    mirror_ = std::move(next);
    physical_ = PhysicalBoard(mirror_);
  }

  bool corrupt = false;
  if (outcome == "applied" && pending_corrupts_ > 0) {
    --pending_corrupts_;
    corrupt = true;
  }
  for (const auto& f : faults_) {
    if (f.kind == FaultSpec::Kind::CorruptEvery &&
        executed_ % static_cast<std::uint64_t>(f.value) == 0) {
      corrupt = true;
    }
  }
  if (corrupt) corrupt_mirror();

  proto::CellStateReport r;
  r.cell_id = config_.cell_id;
  r.pid = cmd.pid;
  r.digest = morris::digest_hex(morris::state_digest(mirror_));
  r.state = morris::encode_state(mirror_);
  r.duration_ms = duration;
  r.outcome = std::move(outcome);
  return r;
}

// Moves the first token in canonical order onto the first free point. Token
// counts and all GameState invariants survive; the digest does not.
void CellSim::corrupt_mirror() {
  for (int i = 0; i < morris::kPointCount; ++i) {
    const morris::PointMask bit = morris::PointMask{1} << i;
    for (int side = 0; side < 2; ++side) {
      if (!(mirror_.tokens[side] & bit)) continue;
      const morris::PointMask empty = mirror_.empty();
      const morris::PointMask to = empty & (~empty + 1);
      mirror_.tokens[side] = (mirror_.tokens[side] & ~bit) | to;
      mirror_.history.assign(1, morris::position_key(mirror_));
      physical_ = PhysicalBoard(mirror_);
      return;
    }
  }
}

morris::GameState CellSim::mirror() const {
  std::lock_guard lock(mu_);
  return mirror_;
}

std::string CellSim::digest() const {
  std::lock_guard lock(mu_);
  return morris::digest_hex(morris::state_digest(mirror_));
}

double CellSim::sim_clock_ms() const {
  std::lock_guard lock(mu_);
  return sim_clock_ms_;
}

std::uint64_t CellSim::commands_executed() const {
  std::lock_guard lock(mu_);
  return executed_;
}

proto::CellStateReport CellSim::report(std::uint64_t pid, double duration_ms,
                                       std::string outcome) const {
  std::lock_guard lock(mu_);
  proto::CellStateReport r;
  r.cell_id = config_.cell_id;
  r.pid = pid;
  r.digest = morris::digest_hex(morris::state_digest(mirror_));
  r.state = morris::encode_state(mirror_);
  r.duration_ms = duration_ms;
  r.outcome = std::move(outcome);
  return r;
}

}  // namespace twin::cell
