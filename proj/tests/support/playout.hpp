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

#include <random>
#include <vector>

#include "twin/morris/game.hpp"

namespace testsupport {

/// States visited by one uniformly random legal playout (initial included).
inline std::vector<twin::morris::GameState> random_playout(std::mt19937_64& rng,
                                                           int max_plies = 400) {
  using namespace twin::morris;
  std::vector<GameState> out{initial_state()};
  for (int i = 0; i < max_plies; ++i) {
    auto moves = legal_moves(out.back());
    if (moves.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    out.push_back(apply_legal_move(out.back(), moves[pick(rng)]));
  }
  return out;
}

}  // namespace testsupport
