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

#include <string>
#include <string_view>

#include "twin/morris/board.hpp"
#include "twin/util/kv_config.hpp"

namespace twin::cell {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b);

/// Planar layout (mm, origin at board centre) of the 24 points on a 450 mm
/// board, the two off-board token stores and the removed-token bin.
struct BoardGeometry {
  double outer_mm = 200.0;
  double middle_mm = 130.0;
  double inner_mm = 60.0;
  double store_row_mm = 260.0;  // white store at -y, black store at +y
  double store_pitch_mm = 50.0;
  Vec2 bin{300.0, 0.0};
  Vec2 home{0.0, 0.0};

  Vec2 point(morris::Point p) const;
  /// Slot 0..8 of a player's store row.
  Vec2 store_slot(morris::Player owner, int slot) const;

  /// Keys: geometry.outer_mm, geometry.middle_mm, geometry.inner_mm,
  /// geometry.store_row_mm, geometry.store_pitch_mm, geometry.bin_x, geometry.bin_y,
  /// geometry.home_x, geometry.home_y.
  void apply(const KeyValueConfig& cfg);
  /// Empty when the layout is consistent, otherwise the first problem found.
  std::string validate() const;
};

enum class PathStyle { Straight, Rectilinear };

/// Kinematic and timing model of one robot platform.
struct PlatformModel {
  std::string tag;
  double vmax_mm_s = 0.0;
  double accel_mm_s2 = 0.0;
  double pick_ms = 0.0;
  double place_ms = 0.0;
  PathStyle style = PathStyle::Straight;
  double safe_height_mm = 0.0;  // lift before rectilinear travel

  static PlatformModel delta_plc();
  static PlatformModel usb_arm();
  /// `delta-plc`, `usb-arm` or `virtual` (delta timing); throws std::invalid_argument otherwise.
  static PlatformModel by_tag(std::string_view tag);

  /// Keys: platform.vmax, platform.accel, platform.pick_ms, platform.place_ms,
  /// platform.safe_height_mm. Throws std::invalid_argument on non-positive kinematics.
  void apply(const KeyValueConfig& cfg);

  /// Duration of a rest-to-rest move between two positions.
  double travel_ms(Vec2 from, Vec2 to) const;
};

/// Rest-to-rest time for one straight segment: trapezoidal velocity profile,
/// triangular when the segment is too short to reach `vmax`.
double profile_ms(double distance_mm, double vmax_mm_s, double accel_mm_s2);

}  // namespace twin::cell
