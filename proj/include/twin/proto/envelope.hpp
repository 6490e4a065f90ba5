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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace twin::proto {

/// Wire kinds. The enumerator order matches the Body alternative order.
enum class MessageKind : std::uint8_t {
  Hello,
  HelloAck,
  JoinGame,
  JoinAck,
  SubmitMove,
  MoveAccepted,
  MoveRejected,
  StateUpdate,
  ProcessUpdate,
  RegisterCell,
  RegisterAck,
  CellCommand,
  CellAck,
  CellStateReport,
  Error,
  Ping,
  Pong,
  ResetGame,
};

inline constexpr std::size_t kMessageKindCount = 18;

std::string_view to_string(MessageKind k) noexcept;
std::optional<MessageKind> parse_message_kind(std::string_view name) noexcept;

/// Board snapshot pushed to IT clients (also embedded in HelloAck).
struct StateSnapshot {
  std::string state;    // canonical state text
  std::string status;   // "ongoing", "won:white:below-three", ...
  std::string to_move;  // "white" | "black"
  std::int64_t ply = 0;
  std::optional<std::string> last_move;
  std::map<std::string, std::string> cells;  // cell id -> status
  friend bool operator==(const StateSnapshot&, const StateSnapshot&) = default;
};

struct Hello {
  std::string client_id;
  std::string role = "player";  // player | spectator | admin
  friend bool operator==(const Hello&, const Hello&) = default;
};

struct HelloAck {
  std::string session;
  StateSnapshot snapshot;
  friend bool operator==(const HelloAck&, const HelloAck&) = default;
};

struct JoinGame {
  std::string color = "any";  // white | black | any
  std::optional<std::string> token;
  friend bool operator==(const JoinGame&, const JoinGame&) = default;
};

struct JoinAck {
  std::string color;
  std::string token;
  friend bool operator==(const JoinAck&, const JoinAck&) = default;
};

struct SubmitMove {
  std::string move;
  friend bool operator==(const SubmitMove&, const SubmitMove&) = default;
};

struct MoveAccepted {
  std::uint64_t pid = 0;
  std::string move;
  std::string state;
  std::int64_t ply = 0;
  friend bool operator==(const MoveAccepted&, const MoveAccepted&) = default;
};

struct MoveRejected {
  std::uint64_t pid = 0;
  std::string reason;
  friend bool operator==(const MoveRejected&, const MoveRejected&) = default;
};

struct StateUpdate {
  StateSnapshot snapshot;
  friend bool operator==(const StateUpdate&, const StateUpdate&) = default;
};

struct ProcessUpdate {
  std::uint64_t pid = 0;
  std::string state;  // received, validated, rejected, dispatching, awaiting, completed, failed
  std::string purpose = "move";  // move | reset | boot
  std::optional<std::string> move;
  std::optional<std::string> reason;
  std::vector<std::string> pending;
  bool no_cells = false;
  std::optional<std::string> resulting_state;
  friend bool operator==(const ProcessUpdate&, const ProcessUpdate&) = default;
};

struct RegisterCell {
  std::string cell_id;
  std::string platform;
  friend bool operator==(const RegisterCell&, const RegisterCell&) = default;
};

struct RegisterAck {
  std::string cell_id;
  friend bool operator==(const RegisterAck&, const RegisterAck&) = default;
};

enum class CommandType : std::uint8_t { ApplyMove, ResyncState, ResetBoard };

std::string_view to_string(CommandType c) noexcept;
std::optional<CommandType> parse_command_type(std::string_view name) noexcept;

struct CellCommand {
  CommandType command = CommandType::ApplyMove;
  std::uint64_t pid = 0;
  std::optional<std::string> move;             // ApplyMove
  std::optional<std::string> expected_digest;  // digest after the command
  std::optional<std::string> state;            // ResyncState
  friend bool operator==(const CellCommand&, const CellCommand&) = default;
};

struct CellAck {
  std::uint64_t pid = 0;
  CommandType command = CommandType::ApplyMove;
  friend bool operator==(const CellAck&, const CellAck&) = default;
};

struct CellStateReport {
  std::string cell_id;
  std::uint64_t pid = 0;
  std::string digest;
  std::string state;
  double duration_ms = 0.0;
  std::string outcome;  // applied | illegal-local | resynced | reset
  friend bool operator==(const CellStateReport&, const CellStateReport&) = default;
};

struct ErrorBody {
  std::string code;
  std::string message;
  friend bool operator==(const ErrorBody&, const ErrorBody&) = default;
};

struct Ping {
  friend bool operator==(const Ping&, const Ping&) = default;
};
struct Pong {
  friend bool operator==(const Pong&, const Pong&) = default;
};
struct ResetGame {
  friend bool operator==(const ResetGame&, const ResetGame&) = default;
};

using Body = std::variant<Hello, HelloAck, JoinGame, JoinAck, SubmitMove, MoveAccepted,
                          MoveRejected, StateUpdate, ProcessUpdate, RegisterCell, RegisterAck,
                          CellCommand, CellAck, CellStateReport, ErrorBody, Ping, Pong,
                          ResetGame>;

static_assert(std::variant_size_v<Body> == kMessageKindCount);

struct Envelope {
  std::uint64_t id = 0;
  std::optional<std::uint64_t> re;  // msg id this answers
  Body body;

  MessageKind kind() const noexcept { return static_cast<MessageKind>(body.index()); }

  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(&body);
  }

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

/// Error codes carried in ErrorBody::code.
namespace error_code {
inline constexpr std::string_view kUnknownKind = "unknown-kind";
inline constexpr std::string_view kBadFrame = "bad-frame";
inline constexpr std::string_view kBadMsgId = "bad-msg-id";
inline constexpr std::string_view kUnknownProcess = "unknown-process";
inline constexpr std::string_view kUnknownCell = "unknown-cell";
inline constexpr std::string_view kNotAllowed = "not-allowed";
inline constexpr std::string_view kBadRequest = "bad-request";
}  // namespace error_code

}  // namespace twin::proto
