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

#include "twin/morris/board.hpp"

#include <algorithm>

namespace twin::morris {
namespace {

constexpr PointMask bit(int i) { return PointMask{1} << i; }

// Index aliases, canonical order.
enum : int {
  A1, D1, G1, B2, D2, F2, C3, D3, E3, A4, B4, C4,
  E4, F4, G4, C5, D5, E5, B6, D6, F6, A7, D7, G7
};

constexpr std::array<std::array<int, 3>, kMillCount> kMillTriples = {{
    {A1, D1, G1}, {B2, D2, F2}, {C3, D3, E3}, {A4, B4, C4},
    {E4, F4, G4}, {C5, D5, E5}, {B6, D6, F6}, {A7, D7, G7},
    {A1, A4, A7}, {B2, B4, B6}, {C3, C4, C5}, {D1, D2, D3},
    {D5, D6, D7}, {E3, E4, E5}, {F2, F4, F6}, {G1, G4, G7},
}};

std::array<PointMask, kPointCount> make_adjacency() {
  // Consecutive points on a mill line are adjacent; nothing else is.
  std::array<PointMask, kPointCount> adj{};
  for (const auto& line : kMillTriples) {
    for (int k = 0; k < 2; ++k) {
      adj[line[k]] |= bit(line[k + 1]);
      adj[line[k + 1]] |= bit(line[k]);
    }
  }
  return adj;
}

std::array<PointMask, kMillCount> make_mills() {
  std::array<PointMask, kMillCount> out{};
  for (int i = 0; i < kMillCount; ++i) {
    for (int p : kMillTriples[i]) out[i] |= bit(p);
  }
  return out;
}

std::array<std::array<PointMask, 2>, kPointCount> make_mills_through() {
  std::array<std::array<PointMask, 2>, kPointCount> out{};
  std::array<int, kPointCount> filled{};
  for (const auto& line : kMillTriples) {
    PointMask m = bit(line[0]) | bit(line[1]) | bit(line[2]);
    for (int p : line) out[p][filled[p]++] = m;
  }
  return out;
}

std::array<std::uint8_t, kPointCount> make_name_order() {
  std::array<std::uint8_t, kPointCount> order{};
  for (int i = 0; i < kPointCount; ++i) order[i] = static_cast<std::uint8_t>(i);
  std::sort(order.begin(), order.end(), [](std::uint8_t a, std::uint8_t b) {
    return kPointNames[a] < kPointNames[b];
  });
  return order;
}

}  // namespace

const std::array<std::uint8_t, kPointCount> kNameOrder = make_name_order();
const std::array<PointMask, kPointCount> kAdjacency = make_adjacency();
const std::array<PointMask, kMillCount> kMills = make_mills();
const std::array<std::array<PointMask, 2>, kPointCount> kMillsThrough =
    make_mills_through();

std::optional<Point> Point::parse(std::string_view name) noexcept {
  for (int i = 0; i < kPointCount; ++i) {
    if (kPointNames[i] == name) return Point(static_cast<std::uint8_t>(i));
  }
  return std::nullopt;
}

std::string_view Point::name() const noexcept { return kPointNames[index_]; }

bool in_mill(PointMask own, Point p) noexcept {
  for (PointMask line : kMillsThrough[p.index()]) {
    if ((own & line) == line) return true;
  }
  return false;
}

int count_mills(PointMask own) noexcept {
  int n = 0;
  for (PointMask line : kMills) n += (own & line) == line ? 1 : 0;
  return n;
}

}  // namespace twin::morris
