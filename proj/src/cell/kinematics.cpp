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

#include "twin/cell/kinematics.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace twin::cell {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Vec2 BoardGeometry::point(morris::Point p) const {
  const std::string_view name = p.name();
  const double offsets[7] = {-outer_mm, -middle_mm, -inner_mm, 0.0, inner_mm, middle_mm, outer_mm};
  return Vec2{offsets[name[0] - 'a'], offsets[name[1] - '1']};
}

Vec2 BoardGeometry::store_slot(morris::Player owner, int slot) const {
  const double x = (slot - 4) * store_pitch_mm;
  const double y = owner == morris::Player::White ? -store_row_mm : store_row_mm;
  return Vec2{x, y};
}

void BoardGeometry::apply(const KeyValueConfig& cfg) {
  auto set = [&](const char* key, double& field) {
    if (auto v = cfg.get_double(key)) field = *v;
  };
  set("geometry.outer_mm", outer_mm);
  set("geometry.middle_mm", middle_mm);
  set("geometry.inner_mm", inner_mm);
  set("geometry.store_row_mm", store_row_mm);
  set("geometry.store_pitch_mm", store_pitch_mm);
  set("geometry.bin_x", bin.x);
  set("geometry.bin_y", bin.y);
  set("geometry.home_x", home.x);
  set("geometry.home_y", home.y);
}

std::string BoardGeometry::validate() const {
  if (!(inner_mm > 0 && inner_mm < middle_mm && middle_mm < outer_mm)) {
    return "rings must satisfy 0 < inner < middle < outer";
  }
  if (outer_mm > 225.0) return "outer ring does not fit a 450 mm board";
  if (store_row_mm <= 225.0) return "token stores must lie off the board";
  if (store_pitch_mm <= 0) return "store pitch must be positive";
  std::set<std::pair<double, double>> seen;
  for (int i = 0; i < morris::kPointCount; ++i) {
    Vec2 v = point(*morris::Point::from_index(i));
    if (!seen.emplace(v.x, v.y).second) return "board points coincide";
  }
  return {};
}

PlatformModel PlatformModel::delta_plc() {
  return PlatformModel{"delta-plc", 1500.0, 10000.0, 150.0, 150.0, PathStyle::Straight, 0.0};
}

PlatformModel PlatformModel::usb_arm() {
  return PlatformModel{"usb-arm", 300.0, 800.0, 500.0, 500.0, PathStyle::Rectilinear, 50.0};
}

PlatformModel PlatformModel::by_tag(std::string_view tag) {
  if (tag == "delta-plc") return delta_plc();
  if (tag == "usb-arm") return usb_arm();
  if (tag == "virtual") {
    PlatformModel p = delta_plc();
    p.tag = "virtual";
    return p;
  }
  throw std::invalid_argument("unknown platform '" + std::string(tag) + "'");
}

void PlatformModel::apply(const KeyValueConfig& cfg) {
  if (auto v = cfg.get_double("platform.vmax")) vmax_mm_s = *v;
  if (auto v = cfg.get_double("platform.accel")) accel_mm_s2 = *v;
  if (auto v = cfg.get_double("platform.pick_ms")) pick_ms = *v;
  if (auto v = cfg.get_double("platform.place_ms")) place_ms = *v;
  if (auto v = cfg.get_double("platform.safe_height_mm")) safe_height_mm = *v;
  if (!(vmax_mm_s > 0) || !(accel_mm_s2 > 0)) {
    throw std::invalid_argument("platform vmax and accel must be positive");
  }
  if (pick_ms < 0 || place_ms < 0 || safe_height_mm < 0) {
    throw std::invalid_argument("platform times and safe height must be non-negative");
  }
}

double profile_ms(double d, double vmax, double accel) {
  if (d <= 0.0) return 0.0;
  // Distance needed to reach vmax and brake again.
  const double ramp = vmax * vmax / accel;
  const double seconds = d <= ramp ? 2.0 * std::sqrt(d / accel) : d / vmax + vmax / accel;
  return seconds * 1000.0;
}

double PlatformModel::travel_ms(Vec2 from, Vec2 to) const {
  if (style == PathStyle::Straight) {
    return profile_ms(distance(from, to), vmax_mm_s, accel_mm_s2);
  }
  if (from == to) return 0.0;
  // Lift to safe height, travel along x, then y, lower again; each leg stops.
  return 2.0 * profile_ms(safe_height_mm, vmax_mm_s, accel_mm_s2) +
         profile_ms(std::abs(to.x - from.x), vmax_mm_s, accel_mm_s2) +
         profile_ms(std::abs(to.y - from.y), vmax_mm_s, accel_mm_s2);
}

}  // namespace twin::cell
