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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twin/morris/board.hpp"

namespace twin::morris {

enum class Phase : std::uint8_t { Placing, Moving, Flying };

enum class Occupant : std::uint8_t { Empty, White, Black };

/// Authoritative game position. Hands are tied to ply while placing and
/// to_move always follows ply parity; check_invariants() enforces both.
struct GameState {
  std::array<PointMask, 2> tokens{0, 0};  // indexed by Player
  std::array<int, 2> hand{kTokensPerPlayer, kTokensPerPlayer};
  Player to_move = Player::White;
  int ply = 0;
  int halfmoves_since_mill_or_removal = 0;
  // Position keys since the last irreversible move, current position last.
  std::vector<std::uint64_t> history;

  PointMask own(Player p) const noexcept { return tokens[static_cast<int>(p)]; }
  PointMask occupied() const noexcept { return tokens[0] | tokens[1]; }
  PointMask empty() const noexcept { return kAllPoints & ~occupied(); }
  int hand_of(Player p) const noexcept { return hand[static_cast<int>(p)]; }
  int on_board(Player p) const noexcept { return popcount(own(p)); }
  Occupant at(Point p) const noexcept;
  Phase phase(Player p) const noexcept;

  /// Board, hands, turn and counters; the repetition history is ignored.
  bool same_position(const GameState& other) const noexcept;
};

enum class MoveKind : std::uint8_t { Place, Slide, Fly };

struct Move {
  MoveKind kind = MoveKind::Place;
  std::optional<Point> from;
  Point to;
  std::optional<Point> remove;

  static Move place(Point to, std::optional<Point> remove = std::nullopt) {
    return Move{MoveKind::Place, std::nullopt, to, remove};
  }
  static Move slide(Point from, Point to, std::optional<Point> remove = std::nullopt) {
    return Move{MoveKind::Slide, from, to, remove};
  }
  static Move fly(Point from, Point to, std::optional<Point> remove = std::nullopt) {
    return Move{MoveKind::Fly, from, to, remove};
  }

  friend bool operator==(const Move&, const Move&) = default;
};

enum class WinReason : std::uint8_t { OpponentBelowThree, OpponentNoMoves };
enum class DrawReason : std::uint8_t { FiftyMoveRule, ThreefoldRepetition };

struct GameStatus {
  enum class Kind : std::uint8_t { Ongoing, Won, Draw };
  Kind kind = Kind::Ongoing;
  Player winner = Player::White;  // meaningful when Won
  WinReason win_reason = WinReason::OpponentBelowThree;
  DrawReason draw_reason = DrawReason::FiftyMoveRule;

  bool ongoing() const noexcept { return kind == Kind::Ongoing; }
  static GameStatus won(Player p, WinReason r) { return {Kind::Won, p, r, {}}; }
  static GameStatus draw(DrawReason r) { return {Kind::Draw, {}, {}, r}; }

  friend bool operator==(const GameStatus& a, const GameStatus& b) noexcept;
};

/// "ongoing", "won:white:below-three", "draw:fifty-move", ...
std::string to_string(const GameStatus& s);

enum class RejectReason : std::uint8_t {
  MalformedMove,
  WrongPhase,
  SourceNotOwn,
  DestinationOccupied,
  NotAdjacent,
  RemovalRequired,
  RemovalForbidden,
  RemovalTargetInvalid,
  GameOver,
};

std::string_view to_string(RejectReason r) noexcept;
std::optional<RejectReason> parse_reject_reason(std::string_view text) noexcept;

/// Ok when `reason` is empty.
struct ValidationResult {
  std::optional<RejectReason> reason;

  bool ok() const noexcept { return !reason.has_value(); }
  static ValidationResult accept() { return {}; }
  static ValidationResult reject(RejectReason r) { return {r}; }
};

GameState initial_state();

GameStatus game_status(const GameState& s);

/// Every legal move in canonical text order; empty when the game is over.
std::vector<Move> legal_moves(const GameState& s);

/// Number of legal moves `who` would have if it were their turn, ignoring
/// game status. Used for mobility terms and the no-moves loss rule.
int count_moves_for(const GameState& s, Player who);

ValidationResult validate_move(const GameState& s, const Move& m);

/// Successor state. Throws std::logic_error when `m` is not legal.
GameState apply_move(const GameState& s, const Move& m);

/// Same as apply_move but skips validation; `m` must come from legal_moves.
GameState apply_legal_move(const GameState& s, const Move& m);

/// Victim tokens outside mills, or all victim tokens when every one is in a mill.
PointMask removable_mask(const GameState& s, Player victim) noexcept;
std::vector<Point> removable_tokens(const GameState& s, Player victim);

/// Leaf count of the legal move tree; perft(s, 0) == 1.
std::uint64_t perft(const GameState& s, int depth);

/// Hash of board, hands and side to move (repetition key).
std::uint64_t position_key(const GameState& s) noexcept;

/// Empty string when all invariants hold, otherwise a description.
std::string check_invariants(const GameState& s);

}  // namespace twin::morris
