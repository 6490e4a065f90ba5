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

#include "twin/agents/search.hpp"

#include <limits>
#include <stdexcept>

namespace twin::agents {

using morris::GameState;
using morris::Player;

void EvalWeights::apply(const KeyValueConfig& cfg) {
  if (auto v = cfg.get_int("eval.material")) material = static_cast<int>(*v);
  if (auto v = cfg.get_int("eval.mobility")) mobility = static_cast<int>(*v);
  if (auto v = cfg.get_int("eval.mills")) mills = static_cast<int>(*v);
}

int evaluate(const GameState& s, Player perspective, const EvalWeights& w, int plies) {
  const auto status = morris::game_status(s);
  if (status.kind == morris::GameStatus::Kind::Won) {
    return status.winner == perspective ? kWinScore - plies : -(kWinScore - plies);
  }
  if (status.kind == morris::GameStatus::Kind::Draw) return 0;

  const Player me = perspective;
  const Player them = morris::opponent(me);
  const int material = (s.on_board(me) + s.hand_of(me)) - (s.on_board(them) + s.hand_of(them));
  const int mobility = morris::count_moves_for(s, me) - morris::count_moves_for(s, them);
  const int mills = morris::count_mills(s.own(me)) - morris::count_mills(s.own(them));
  return w.material * material + w.mobility * mobility + w.mills * mills;
}

namespace {

struct Searcher {
  const EvalWeights& w;
  std::uint64_t nodes = 0;

  int negamax(const GameState& s, int depth, int alpha, int beta, int plies) {
    ++nodes;
    if (depth == 0 || !morris::game_status(s).ongoing()) {
      return evaluate(s, s.to_move, w, plies);
    }
    int best = std::numeric_limits<int>::min();
    for (const auto& m : morris::legal_moves(s)) {
      const int score = -negamax(morris::apply_legal_move(s, m), depth - 1, -beta, -alpha, plies + 1);
      if (score > best) best = score;
      if (best > alpha) alpha = best;
      if (alpha >= beta) break;
    }
    return best;
  }
};

}  // namespace

SearchResult choose_move(const GameState& s, int depth, const EvalWeights& w) {
  if (depth < 1) throw std::invalid_argument("search depth must be at least 1");
  if (!morris::game_status(s).ongoing()) throw std::invalid_argument("game is over");
  Searcher searcher{w};
  const auto moves = morris::legal_moves(s);
  SearchResult result;
  result.score = std::numeric_limits<int>::min();
  int alpha = -std::numeric_limits<int>::max();
  const int beta = std::numeric_limits<int>::max();
  for (const auto& m : moves) {
    const int score =
        -searcher.negamax(morris::apply_legal_move(s, m), depth - 1, -beta, -alpha, 1);
    if (score > result.score) {
      result.score = score;
      result.move = m;
    }
    if (result.score > alpha) alpha = result.score;
  }
  result.nodes = searcher.nodes;
  return result;
}

morris::Move random_move(const GameState& s, std::mt19937_64& rng) {
  const auto moves = morris::legal_moves(s);
  if (moves.empty()) throw std::invalid_argument("no legal move");
  std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
  return moves[pick(rng)];
}

}  // namespace twin::agents
