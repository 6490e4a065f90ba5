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
#include <random>

#include "twin/morris/game.hpp"
#include "twin/util/kv_config.hpp"

namespace twin::agents {

inline constexpr int kWinScore = 1'000'000;

struct EvalWeights {
  int material = 100;  // per token, on board plus in hand
  int mobility = 10;   // per legal move
  int mills = 50;      // per closed mill

  /// Keys: eval.material, eval.mobility, eval.mills.
  void apply(const KeyValueConfig& cfg);
};

/// Score of `s` from `perspective`, in centitokens. A won position scores
/// kWinScore - plies, `plies` being the distance from the search root; draws
/// score 0.
int evaluate(const morris::GameState& s, morris::Player perspective, const EvalWeights& w,
             int plies = 0);

struct SearchResult {
  morris::Move move;
  int score = 0;  // from the side to move
  std::uint64_t nodes = 0;
};

/// Depth-limited negamax with alpha-beta pruning. Moves are tried in
/// canonical order and only a strictly better score replaces the incumbent,
/// so ties go to the canonically first move. Throws std::invalid_argument
/// when the game is over or depth < 1.
SearchResult choose_move(const morris::GameState& s, int depth, const EvalWeights& w = {});

/// Uniform choice among the legal moves.
morris::Move random_move(const morris::GameState& s, std::mt19937_64& rng);

}  // namespace twin::agents
