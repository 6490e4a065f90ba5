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

#include "twin/cell/motion.hpp"

#include <stdexcept>

namespace twin::cell {

using morris::Player;

Vec2 Location::position(const BoardGeometry& g) const {
  switch (kind) {
    case Kind::BoardPoint: return g.point(point);
    case Kind::Store: return g.store_slot(owner, slot);
    case Kind::Bin: return g.bin;
    case Kind::Home: return g.home;
  }
  return g.home;
}

std::string Location::label() const {
  switch (kind) {
    case Kind::BoardPoint: return std::string(point.name());
    case Kind::Store:
      return std::string(owner == Player::White ? "store-w" : "store-b") + "[" +
             std::to_string(slot) + "]";
    case Kind::Bin: return "bin";
    case Kind::Home: return "home";
  }
  return "?";
}

Result<MotionPlan, IllegalLocal> plan_motion(const morris::GameState& local,
                                             const morris::Move& m,
                                             const BoardGeometry& geometry,
                                             const PlatformModel& platform) {
  if (auto v = morris::validate_move(local, m); !v.ok()) return IllegalLocal{*v.reason};

  MotionPlan plan;
  Vec2 at = geometry.home;
  auto move_to = [&](const Location& where) {
    Vec2 target = where.position(geometry);
    plan.steps.push_back({Action::MoveTo, where, platform.travel_ms(at, target)});
    at = target;
  };
  auto transfer = [&](const Location& src, const Location& dst) {
    move_to(src);
    plan.steps.push_back({Action::Pick, src, platform.pick_ms});
    move_to(dst);
    plan.steps.push_back({Action::Place, dst, platform.place_ms});
  };

  const Player mover = local.to_move;
  const Location source = m.kind == morris::MoveKind::Place
                              ? Location::store(mover, local.hand_of(mover) - 1)
                              : Location::board(*m.from);
  transfer(source, Location::board(m.to));
  if (m.remove) transfer(Location::board(*m.remove), Location::bin());
  move_to(Location::home());

  for (const auto& step : plan.steps) plan.total_ms += step.ms;
  return plan;
}

PhysicalBoard::PhysicalBoard(const morris::GameState& s) {
  for (int i = 0; i < morris::kPointCount; ++i) {
    switch (s.at(*morris::Point::from_index(i))) {
      case morris::Occupant::White: board_[i] = Player::White; break;
      case morris::Occupant::Black: board_[i] = Player::Black; break;
      case morris::Occupant::Empty: break;
    }
  }
  for (Player p : {Player::White, Player::Black}) {
    for (int k = 0; k < s.hand_of(p); ++k) stores_[static_cast<int>(p)][k] = p;
  }
}

PhysicalBoard::Slot& PhysicalBoard::at(const Location& l) {
  switch (l.kind) {
    case Location::Kind::BoardPoint: return board_[l.point.index()];
    case Location::Kind::Store:
      if (l.slot < 0 || l.slot >= morris::kTokensPerPlayer) {
        throw std::logic_error("store slot out of range");
      }
      return stores_[static_cast<int>(l.owner)][l.slot];
    case Location::Kind::Bin: return bin_slot_;
    case Location::Kind::Home: return home_slot_;
  }
  return home_slot_;
}

void PhysicalBoard::execute(const MotionPlan& plan) {
  for (const auto& step : plan.steps) {
    switch (step.action) {
      case Action::MoveTo:
        break;
      case Action::Pick: {
        if (gripper_) throw std::logic_error("pick with a loaded gripper");
        if (step.where.kind == Location::Kind::Bin || step.where.kind == Location::Kind::Home) {
          throw std::logic_error("cannot pick at " + step.where.label());
        }
        Slot& s = at(step.where);
        if (!s) throw std::logic_error("pick from empty " + step.where.label());
        gripper_ = s;
        s.reset();
        break;
      }
      case Action::Place: {
        if (!gripper_) throw std::logic_error("place with an empty gripper");
        if (step.where.kind == Location::Kind::Bin) {
          ++bin_;
        } else {
          Slot& s = at(step.where);
          if (s) throw std::logic_error("place onto occupied " + step.where.label());
          s = gripper_;
        }
        gripper_.reset();
        break;
      }
    }
  }
  if (gripper_) throw std::logic_error("plan ended holding a token");
}

morris::PointMask PhysicalBoard::tokens(Player p) const {
  morris::PointMask m = 0;
  for (int i = 0; i < morris::kPointCount; ++i) {
    if (board_[i] == p) m |= morris::PointMask{1} << i;
  }
  return m;
}

int PhysicalBoard::store_count(Player p) const {
  int n = 0;
  for (const Slot& s : stores_[static_cast<int>(p)]) n += s.has_value();
  return n;
}

}  // namespace twin::cell
