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

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twin/cell/kinematics.hpp"
#include "twin/cell/motion.hpp"
#include "twin/morris/game.hpp"
#include "twin/proto/envelope.hpp"
#include "twin/util/result.hpp"

namespace twin::cell {

/// Injectable misbehaviour. Text forms (comma separated in --fault):
/// `drop-next`, `drop-every:N`, `delay:MS`, `corrupt-next`, `corrupt-every:N`,
/// `disconnect:MS`.
struct FaultSpec {
  enum class Kind { DropNext, DropEvery, Delay, CorruptNext, CorruptEvery, Disconnect };
  Kind kind = Kind::DropNext;
  std::int64_t value = 0;  // N or milliseconds

  static Result<std::vector<FaultSpec>> parse_list(std::string_view text);
  std::string str() const;
};

struct CellConfig {
  std::string cell_id;
  PlatformModel platform = PlatformModel::delta_plc();
  BoardGeometry geometry;
  double time_scale = 0.0;  // wall-clock seconds per simulated second
};

/// What the cell decided about an incoming command before executing it.
struct Admission {
  bool dropped = false;
  double delay_ms = 0.0;         // extra latency before execution
  std::int64_t disconnect_ms = 0;  // transport should go away for this long
};

/// Transport-independent robot cell: a mirrored board, a physical token model
/// and a platform timing model. One command executes at a time; callers own
/// the FIFO.
class CellSim {
 public:
  explicit CellSim(CellConfig config);

  const CellConfig& config() const noexcept { return config_; }

  /// Applies drop/delay/disconnect faults. A dropped command gets no ack and
  /// no report.
  Admission admit(const proto::CellCommand& cmd);

  /// Runs the command to completion (sleeping total_ms * time_scale) and
  /// returns the state report.
  proto::CellStateReport execute(const proto::CellCommand& cmd);

  void inject_fault(const FaultSpec& f);
  void clear_faults();

  morris::GameState mirror() const;
  std::string digest() const;
  double sim_clock_ms() const;
  std::uint64_t commands_executed() const;

  proto::CellStateReport report(std::uint64_t pid, double duration_ms,
                                std::string outcome) const;

 private:
  void corrupt_mirror();

  CellConfig config_;
  mutable std::mutex mu_;
  morris::GameState mirror_;
  PhysicalBoard physical_;
  double sim_clock_ms_ = 0.0;
  std::uint64_t admitted_ = 0;
  std::uint64_t executed_ = 0;
  std::vector<FaultSpec> faults_;
  int pending_drops_ = 0;
  int pending_corrupts_ = 0;
  double pending_delay_ms_ = 0.0;
  std::int64_t pending_disconnect_ms_ = 0;
};

}  // namespace twin::cell
