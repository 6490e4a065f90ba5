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
#include <bit>
#include <cstdint>
#include <optional>
#include <string_view>

namespace twin::morris {

enum class Player : std::uint8_t { White = 0, Black = 1 };

constexpr Player opponent(Player p) noexcept {
  return p == Player::White ? Player::Black : Player::White;
}

constexpr std::string_view to_string(Player p) noexcept {
  return p == Player::White ? "white" : "black";
}

inline constexpr int kPointCount = 24;
inline constexpr int kTokensPerPlayer = 9;

/// Set of board points, bit i = point with index i.
using PointMask = std::uint32_t;
inline constexpr PointMask kAllPoints = (PointMask{1} << kPointCount) - 1;

/// One of the 24 board coordinates. Index order is the canonical board-string
/// order: a1 d1 g1 b2 d2 f2 c3 d3 e3 a4 b4 c4 e4 f4 g4 c5 d5 e5 b6 d6 f6 a7 d7 g7.
class Point {
 public:
  constexpr Point() = default;

  static constexpr std::optional<Point> from_index(int index) noexcept {
    if (index < 0 || index >= kPointCount) return std::nullopt;
    return Point(static_cast<std::uint8_t>(index));
  }
  static std::optional<Point> parse(std::string_view name) noexcept;

  constexpr int index() const noexcept { return index_; }
  constexpr PointMask mask() const noexcept { return PointMask{1} << index_; }
  std::string_view name() const noexcept;

  friend constexpr bool operator==(Point, Point) = default;
  friend constexpr auto operator<=>(Point, Point) = default;

 private:
  constexpr explicit Point(std::uint8_t index) : index_(index) {}
  std::uint8_t index_ = 0;
};

/// Canonical names in index order.
inline constexpr std::array<std::string_view, kPointCount> kPointNames = {
    "a1", "d1", "g1", "b2", "d2", "f2", "c3", "d3", "e3", "a4", "b4", "c4",
    "e4", "f4", "g4", "c5", "d5", "e5", "b6", "d6", "f6", "a7", "d7", "g7"};

/// Point indices sorted by name; iterating in this order yields moves in
/// canonical text order.
extern const std::array<std::uint8_t, kPointCount> kNameOrder;

/// Neighbour mask per point.
extern const std::array<PointMask, kPointCount> kAdjacency;

inline constexpr int kMillCount = 16;
extern const std::array<PointMask, kMillCount> kMills;

/// The two mill lines through each point.
extern const std::array<std::array<PointMask, 2>, kPointCount> kMillsThrough;

inline int popcount(PointMask m) noexcept { return std::popcount(m); }

/// True when `p` lies on a line fully covered by `own`.
bool in_mill(PointMask own, Point p) noexcept;

/// Number of complete mill lines covered by `own`.
int count_mills(PointMask own) noexcept;

template <typename Fn>
void for_each_point(PointMask m, Fn&& fn) {
  while (m != 0) {
    int i = std::countr_zero(m);
    fn(*Point::from_index(i));
    m &= m - 1;
  }
}

}  // namespace twin::morris
