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
#include <optional>
#include <string>
#include <vector>

#include "twin/cell/kinematics.hpp"
#include "twin/morris/game.hpp"
#include "twin/util/result.hpp"

namespace twin::cell {

/// Where the end effector can go.
struct Location {
  enum class Kind { BoardPoint, Store, Bin, Home };

  Kind kind = Kind::Home;
  morris::Point point;                          // BoardPoint
  morris::Player owner = morris::Player::White;  // Store
  int slot = 0;                                  // Store

  static Location board(morris::Point p) { return {Kind::BoardPoint, p, {}, 0}; }
  static Location store(morris::Player owner, int slot) { return {Kind::Store, {}, owner, slot}; }
  static Location bin() { return {Kind::Bin, {}, {}, 0}; }
  static Location home() { return {Kind::Home, {}, {}, 0}; }

  Vec2 position(const BoardGeometry& g) const;
  std::string label() const;

  friend bool operator==(const Location&, const Location&) = default;
};

enum class Action { MoveTo, Pick, Place };

struct MotionStep {
  Action action = Action::MoveTo;
  Location where;
  double ms = 0.0;
};

/// Ordered primitives, starting and ending at home; every Pick is followed by
/// a Place before the next Pick.
struct MotionPlan {
  std::vector<MotionStep> steps;
  double total_ms = 0.0;
};

/// The move is not legal against the cell's own mirror.
struct IllegalLocal {
  morris::RejectReason reason = morris::RejectReason::MalformedMove;
};

Result<MotionPlan, IllegalLocal> plan_motion(const morris::GameState& local,
                                             const morris::Move& m,
                                             const BoardGeometry& geometry,
                                             const PlatformModel& platform);

/// Token-level model of the physical cell: board points, both store rows, the
/// bin and the gripper. Executing a plan moves tokens around it.
class PhysicalBoard {
 public:
  /// Board from the state; store slots 0..hand-1 filled for each player.
  explicit PhysicalBoard(const morris::GameState& s);

  /// Throws std::logic_error when a step is physically impossible (picking
  /// from an empty location, placing onto an occupied one, double pick).
  void execute(const MotionPlan& plan);

  morris::PointMask tokens(morris::Player p) const;
  int store_count(morris::Player p) const;
  int bin_count() const { return bin_; }

 private:
  using Slot = std::optional<morris::Player>;
  Slot& at(const Location& l);

  std::array<Slot, morris::kPointCount> board_{};
  std::array<std::array<Slot, morris::kTokensPerPlayer>, 2> stores_{};
  int bin_ = 0;
  Slot bin_slot_;  // scratch target for Place at the bin
  Slot gripper_;
  Slot home_slot_;
};

}  // namespace twin::cell
