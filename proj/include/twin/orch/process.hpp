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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "twin/morris/game.hpp"

namespace twin::orch {

using Millis = std::int64_t;
using Pid = std::uint64_t;

enum class ProcState : std::uint8_t {
  Received,
  Validated,
  Rejected,
  Dispatching,
  AwaitingConfirmations,
  Completed,
  Failed,
};
inline constexpr std::size_t kProcStateCount = 7;

enum class ProcEvent : std::uint8_t {
  Accept,        // validation passed
  Reject,        // validation failed
  StartDispatch,
  CommandsSent,  // at least one cell addressed
  NoCells,       // nobody online: degenerate fan-out
  Confirm,       // a pending cell reported the expected digest, others remain
  ConfirmLast,   // ... and it was the last pending cell
  Diverge,       // a pending cell reported a different digest; resync issued
  CellLost,      // a pending cell went offline, others remain
  CellLostLast,  // ... and it was the last pending cell
  Timeout,
  CellFault,     // a pending cell kept diverging after repeated resyncs
};
inline constexpr std::size_t kProcEventCount = 12;

std::string_view to_string(ProcState s) noexcept;
std::string_view to_string(ProcEvent e) noexcept;
bool is_terminal(ProcState s) noexcept;

/// Result of feeding one event to the machine.
struct Step {
  enum class Kind : std::uint8_t {
    Advance,   // move to `next`
    Stay,      // event handled, state unchanged
    Ignore,    // event does not apply here; logged and dropped
    Undefined  // never produced by the table; exists so tests can look for it
  };
  Kind kind = Kind::Undefined;
  ProcState next = ProcState::Received;
};

/// Total transition function over every (state, event) pair.
Step step(ProcState s, ProcEvent e) noexcept;

/// The edges allowed by the lifecycle, independent of the table above.
bool is_legal_edge(ProcState from, ProcState to) noexcept;

enum class Purpose : std::uint8_t { Move, Reset, Boot };
std::string_view to_string(Purpose p) noexcept;

/// One orchestration process per interaction.
struct Process {
  Pid pid = 0;
  Purpose purpose = Purpose::Move;
  std::optional<morris::Move> move;
  std::string initiator;
  ProcState state = ProcState::Received;
  std::optional<std::string> reason;  // rejection code or failure detail
  std::set<std::string> pending;
  std::set<std::string> confirmed;
  std::set<std::string> timed_out;
  std::map<std::string, int> divergences;
  bool no_cells = false;
  Millis created_at = 0;
  Millis updated_at = 0;
  Millis deadline = 0;
  std::optional<std::string> resulting_state;
  std::string resulting_digest;
  std::vector<ProcState> trace{ProcState::Received};

  /// State name plus detail, e.g. `rejected:not-your-turn`, `failed:timed-out:arm-1`.
  std::string describe() const;
};

}  // namespace twin::orch
