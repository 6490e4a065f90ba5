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

#include "twin/orch/process.hpp"

namespace twin::orch {

std::string_view to_string(ProcState s) noexcept {
  switch (s) {
    case ProcState::Received: return "received";
    case ProcState::Validated: return "validated";
    case ProcState::Rejected: return "rejected";
    case ProcState::Dispatching: return "dispatching";
    case ProcState::AwaitingConfirmations: return "awaiting";
    case ProcState::Completed: return "completed";
    case ProcState::Failed: return "failed";
  }
  return "?";
}

std::string_view to_string(ProcEvent e) noexcept {
  switch (e) {
    case ProcEvent::Accept: return "accept";
    case ProcEvent::Reject: return "reject";
    case ProcEvent::StartDispatch: return "start-dispatch";
    case ProcEvent::CommandsSent: return "commands-sent";
    case ProcEvent::NoCells: return "no-cells";
    case ProcEvent::Confirm: return "confirm";
    case ProcEvent::ConfirmLast: return "confirm-last";
    case ProcEvent::Diverge: return "diverge";
    case ProcEvent::CellLost: return "cell-lost";
    case ProcEvent::CellLostLast: return "cell-lost-last";
    case ProcEvent::Timeout: return "timeout";
    case ProcEvent::CellFault: return "cell-fault";
  }
  return "?";
}

std::string_view to_string(Purpose p) noexcept {
  switch (p) {
    case Purpose::Move: return "move";
    case Purpose::Reset: return "reset";
    case Purpose::Boot: return "boot";
  }
  return "?";
}

bool is_terminal(ProcState s) noexcept {
  return s == ProcState::Rejected || s == ProcState::Completed || s == ProcState::Failed;
}

bool is_legal_edge(ProcState from, ProcState to) noexcept {
  using S = ProcState;
  switch (from) {
    case S::Received: return to == S::Validated || to == S::Rejected;
    case S::Validated: return to == S::Dispatching;
    case S::Dispatching:
      // Empty fan-out completes without waiting.
      return to == S::AwaitingConfirmations || to == S::Completed;
    case S::AwaitingConfirmations: return to == S::Completed || to == S::Failed;
    case S::Rejected:
    case S::Completed:
    case S::Failed: return false;
  }
  return false;
}

Step step(ProcState s, ProcEvent e) noexcept {
  using S = ProcState;
  using E = ProcEvent;
  const Step ignore{Step::Kind::Ignore, s};
  const Step stay{Step::Kind::Stay, s};
  auto advance = [](S next) { return Step{Step::Kind::Advance, next}; };

  switch (s) {
    case S::Received:
      switch (e) {
        case E::Accept: return advance(S::Validated);
        case E::Reject: return advance(S::Rejected);
        case E::StartDispatch:
        case E::CommandsSent:
        case E::NoCells:
        case E::Confirm:
        case E::ConfirmLast:
        case E::Diverge:
        case E::CellLost:
        case E::CellLostLast:
        case E::Timeout:
        case E::CellFault: return ignore;
      }
      break;
    case S::Validated:
      switch (e) {
        case E::StartDispatch: return advance(S::Dispatching);
        case E::Accept:
        case E::Reject:
        case E::CommandsSent:
        case E::NoCells:
        case E::Confirm:
        case E::ConfirmLast:
        case E::Diverge:
        case E::CellLost:
        case E::CellLostLast:
        case E::Timeout:
        case E::CellFault: return ignore;
      }
      break;
    case S::Dispatching:
      switch (e) {
        case E::CommandsSent: return advance(S::AwaitingConfirmations);
        case E::NoCells: return advance(S::Completed);
        case E::Accept:
        case E::Reject:
        case E::StartDispatch:
        case E::Confirm:
        case E::ConfirmLast:
        case E::Diverge:
        case E::CellLost:
        case E::CellLostLast:
        case E::Timeout:
        case E::CellFault: return ignore;
      }
      break;
    case S::AwaitingConfirmations:
      switch (e) {
        case E::Confirm:
        case E::Diverge:
        case E::CellLost: return stay;
        case E::ConfirmLast:
        case E::CellLostLast: return advance(S::Completed);
        case E::Timeout:
        case E::CellFault: return advance(S::Failed);
        case E::Accept:
        case E::Reject:
        case E::StartDispatch:
        case E::CommandsSent:
        case E::NoCells: return ignore;
      }
      break;
    case S::Rejected:
    case S::Completed:
    case S::Failed:
      return ignore;
  }
  return Step{};
}

std::string Process::describe() const {
  std::string out(to_string(state));
  if (state == ProcState::Rejected && reason) {
    out += ':';
    out += *reason;
  } else if (state == ProcState::Failed && reason) {
    out += ':';
    out += *reason;
  } else if (state == ProcState::Completed && no_cells) {
    out += ":no-cells";
  }
  return out;
}

}  // namespace twin::orch
