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

#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twin/morris/game.hpp"
#include "twin/orch/process.hpp"
#include "twin/util/result.hpp"

namespace twin::orch {

/// An accepted move, written before the move is acknowledged.
struct MoveRecord {
  Pid pid = 0;
  std::int64_t ply = 0;  // ply after the move
  std::string move;
  std::string digest;  // authoritative digest after the move
  friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

struct ResetRecord {
  Pid pid = 0;
  std::string digest;
  friend bool operator==(const ResetRecord&, const ResetRecord&) = default;
};

/// Terminal outcome of a process.
struct ProcessRecord {
  Pid pid = 0;
  std::string purpose;
  std::string state;  // Process::describe()
  std::optional<std::string> move;
  friend bool operator==(const ProcessRecord&, const ProcessRecord&) = default;
};

struct SeatRecord {
  std::string color;
  std::string holder;
  std::string token;
  friend bool operator==(const SeatRecord&, const SeatRecord&) = default;
};

using LogRecord = std::variant<MoveRecord, ResetRecord, ProcessRecord, SeatRecord>;

std::string encode_record(const LogRecord& r);
Result<LogRecord> decode_record(std::string_view line);

/// Everything recovered from a log file.
struct Replay {
  morris::GameState state;
  std::vector<LogRecord> records;
  Pid max_pid = 0;
  bool truncated_tail = false;  // a final line without its newline was skipped
};

/// Rebuilds the authoritative state by re-validating and re-applying every
/// logged move. Throws std::runtime_error on a corrupt or inconsistent log.
Replay replay_log(const std::string& path);

/// Append-only, line-per-record writer. Each append is flushed before returning.
class EventLog {
 public:
  EventLog() = default;  // in-memory only: nothing persisted
  explicit EventLog(const std::string& path);

  void append(const LogRecord& r);
  bool persistent() const noexcept { return out_.is_open(); }
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace twin::orch
