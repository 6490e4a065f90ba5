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

#include "twin/morris/game.hpp"

#include <algorithm>
#include <stdexcept>

namespace twin::morris {
namespace {

constexpr int idx(Player p) { return static_cast<int>(p); }

PointMask mill_members(PointMask own) noexcept {
  PointMask out = 0;
  for (PointMask line : kMills) {
    if ((own & line) == line) out |= line;
  }
  return out;
}

PointMask bit_of(int i) { return PointMask{1} << i; }

// Enumerates legal moves for `me` in canonical order, ignoring game status.
// The sink returns false to stop early.
template <typename Sink>
void generate(const GameState& s, Player me, Sink&& sink) {
  const PointMask own = s.own(me);
  const PointMask empty = s.empty();
  const PointMask removable = removable_mask(s, opponent(me));
  const Phase ph = s.phase(me);

  auto emit = [&](MoveKind kind, std::optional<Point> from, Point to,
                  PointMask own_after) -> bool {
    if (removable != 0 && in_mill(own_after, to)) {
      for (std::uint8_t r : kNameOrder) {
        if (removable & bit_of(r)) {
          if (!sink(Move{kind, from, to, Point::from_index(r)})) return false;
        }
      }
      return true;
    }
    return sink(Move{kind, from, to, std::nullopt});
  };

  if (ph == Phase::Placing) {
    for (std::uint8_t t : kNameOrder) {
      if (!(empty & bit_of(t))) continue;
      Point to = *Point::from_index(t);
      if (!emit(MoveKind::Place, std::nullopt, to, own | to.mask())) return;
    }
    return;
  }
  const MoveKind kind = ph == Phase::Flying ? MoveKind::Fly : MoveKind::Slide;
  for (std::uint8_t f : kNameOrder) {
    if (!(own & bit_of(f))) continue;
    Point from = *Point::from_index(f);
    PointMask targets = kind == MoveKind::Fly ? empty : (kAdjacency[f] & empty);
    if (targets == 0) continue;
    for (std::uint8_t t : kNameOrder) {
      if (!(targets & bit_of(t))) continue;
      Point to = *Point::from_index(t);
      if (!emit(kind, from, to, (own & ~from.mask()) | to.mask())) return;
    }
  }
}

bool has_any_move(const GameState& s, Player who) {
  bool any = false;
  generate(s, who, [&](const Move&) {
    any = true;
    return false;
  });
  return any;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Occupant GameState::at(Point p) const noexcept {
  if (tokens[0] & p.mask()) return Occupant::White;
  if (tokens[1] & p.mask()) return Occupant::Black;
  return Occupant::Empty;
}

Phase GameState::phase(Player p) const noexcept {
  if (hand_of(p) > 0) return Phase::Placing;
  if (on_board(p) == 3) return Phase::Flying;
  return Phase::Moving;
}

bool GameState::same_position(const GameState& o) const noexcept {
  return tokens == o.tokens && hand == o.hand && to_move == o.to_move &&
         ply == o.ply &&
         halfmoves_since_mill_or_removal == o.halfmoves_since_mill_or_removal;
}

bool operator==(const GameStatus& a, const GameStatus& b) noexcept {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case GameStatus::Kind::Ongoing:
      return true;
    case GameStatus::Kind::Won:
      return a.winner == b.winner && a.win_reason == b.win_reason;
    case GameStatus::Kind::Draw:
      return a.draw_reason == b.draw_reason;
  }
  return false;
}

std::string to_string(const GameStatus& s) {
  switch (s.kind) {
    case GameStatus::Kind::Ongoing:
      return "ongoing";
    case GameStatus::Kind::Won:
      return std::string("won:") + std::string(to_string(s.winner)) +
             (s.win_reason == WinReason::OpponentBelowThree ? ":below-three"
                                                            : ":no-moves");
    case GameStatus::Kind::Draw:
      return s.draw_reason == DrawReason::FiftyMoveRule ? "draw:fifty-move"
                                                        : "draw:threefold";
  }
  return "ongoing";
}

namespace {
constexpr std::array<std::string_view, 9> kReasonNames = {
    "malformed-move",     "wrong-phase",       "source-not-own",
    "destination-occupied", "not-adjacent",    "removal-required",
    "removal-forbidden",  "removal-target-invalid", "game-over"};
}

std::string_view to_string(RejectReason r) noexcept {
  return kReasonNames[static_cast<std::size_t>(r)];
}

std::optional<RejectReason> parse_reject_reason(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kReasonNames.size(); ++i) {
    if (kReasonNames[i] == text) return static_cast<RejectReason>(i);
  }
  return std::nullopt;
}

std::uint64_t position_key(const GameState& s) noexcept {
  std::uint64_t packed = std::uint64_t{s.tokens[0]} |
                         (std::uint64_t{s.tokens[1]} << 24) |
                         (std::uint64_t{s.to_move == Player::Black} << 48) |
                         (std::uint64_t(s.hand[0]) << 50) |
                         (std::uint64_t(s.hand[1]) << 55);
  return mix64(packed);
}

GameState initial_state() {
  GameState s;
  s.history.push_back(position_key(s));
  return s;
}

PointMask removable_mask(const GameState& s, Player victim) noexcept {
  const PointMask own = s.own(victim);
  const PointMask free = own & ~mill_members(own);
  return free != 0 ? free : own;
}

std::vector<Point> removable_tokens(const GameState& s, Player victim) {
  std::vector<Point> out;
  PointMask m = removable_mask(s, victim);
  for (std::uint8_t i : kNameOrder) {
    if (m & bit_of(i)) out.push_back(*Point::from_index(i));
  }
  return out;
}

GameStatus game_status(const GameState& s) {
  for (Player p : {Player::White, Player::Black}) {
    if (s.hand_of(p) == 0 && s.on_board(p) < 3) {
      return GameStatus::won(opponent(p), WinReason::OpponentBelowThree);
    }
  }
  if (!has_any_move(s, s.to_move)) {
    return GameStatus::won(opponent(s.to_move), WinReason::OpponentNoMoves);
  }
  const std::uint64_t key = position_key(s);
  if (std::count(s.history.begin(), s.history.end(), key) >= 3) {
    return GameStatus::draw(DrawReason::ThreefoldRepetition);
  }
  if (s.halfmoves_since_mill_or_removal >= 100) {
    return GameStatus::draw(DrawReason::FiftyMoveRule);
  }
  return {};
}

std::vector<Move> legal_moves(const GameState& s) {
  std::vector<Move> out;
  if (!game_status(s).ongoing()) return out;
  generate(s, s.to_move, [&](const Move& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

int count_moves_for(const GameState& s, Player who) {
  int n = 0;
  generate(s, who, [&](const Move&) {
    ++n;
    return true;
  });
  return n;
}

ValidationResult validate_move(const GameState& s, const Move& m) {
  using V = ValidationResult;
  if (!game_status(s).ongoing()) return V::reject(RejectReason::GameOver);

  const Player me = s.to_move;
  const bool needs_source = m.kind != MoveKind::Place;
  if (m.from.has_value() != needs_source) {
    return V::reject(RejectReason::MalformedMove);
  }

  const Phase ph = s.phase(me);
  const MoveKind expected = ph == Phase::Placing  ? MoveKind::Place
                            : ph == Phase::Flying ? MoveKind::Fly
                                                  : MoveKind::Slide;
  if (m.kind != expected) return V::reject(RejectReason::WrongPhase);

  PointMask own = s.own(me);
  if (m.from) {
    if (!(own & m.from->mask())) return V::reject(RejectReason::SourceNotOwn);
  }
  if (s.occupied() & m.to.mask()) {
    return V::reject(RejectReason::DestinationOccupied);
  }
  if (m.kind == MoveKind::Slide && !(kAdjacency[m.from->index()] & m.to.mask())) {
    return V::reject(RejectReason::NotAdjacent);
  }

  if (m.from) own &= ~m.from->mask();
  own |= m.to.mask();
  const PointMask removable = removable_mask(s, opponent(me));
  const bool grants_removal = in_mill(own, m.to) && removable != 0;
  if (grants_removal) {
    if (!m.remove) return V::reject(RejectReason::RemovalRequired);
    if (!(removable & m.remove->mask())) {
      return V::reject(RejectReason::RemovalTargetInvalid);
    }
  } else if (m.remove) {
    return V::reject(RejectReason::RemovalForbidden);
  }
  return V::accept();
}

GameState apply_legal_move(const GameState& s, const Move& m) {
  GameState next = s;
  const int me = idx(s.to_move);
  const int them = 1 - me;

  if (m.kind == MoveKind::Place) {
    --next.hand[me];
  } else {
    next.tokens[me] &= ~m.from->mask();
  }
  next.tokens[me] |= m.to.mask();
  const bool mill = in_mill(next.tokens[me], m.to);
  if (m.remove) next.tokens[them] &= ~m.remove->mask();

  next.to_move = opponent(s.to_move);
  ++next.ply;

  const std::uint64_t key = position_key(next);
  if (m.kind == MoveKind::Place || mill || m.remove) {
    next.halfmoves_since_mill_or_removal = 0;
    next.history.assign(1, key);
  } else {
    ++next.halfmoves_since_mill_or_removal;
    next.history.push_back(key);
  }
  return next;
}

GameState apply_move(const GameState& s, const Move& m) {
  ValidationResult v = validate_move(s, m);
  if (!v.ok()) {
    throw std::logic_error("apply_move: illegal move (" +
                           std::string(to_string(*v.reason)) + ")");
  }
  return apply_legal_move(s, m);
}

std::uint64_t perft(const GameState& s, int depth) {
  if (depth <= 0) return 1;
  std::vector<Move> moves = legal_moves(s);
  if (depth == 1) return moves.size();
  std::uint64_t total = 0;
  for (const Move& m : moves) total += perft(apply_legal_move(s, m), depth - 1);
  return total;
}

std::string check_invariants(const GameState& s) {
  if (s.tokens[0] & s.tokens[1]) return "point occupied by both players";
  if ((s.tokens[0] | s.tokens[1]) & ~kAllPoints) return "token outside board";
  if (s.ply < 0) return "negative ply";
  for (Player p : {Player::White, Player::Black}) {
    const int h = s.hand_of(p);
    if (h < 0 || h > kTokensPerPlayer) return "hand out of range";
    if (h + s.on_board(p) > kTokensPerPlayer) return "more than nine tokens";
    // White places on even plies, Black on odd plies.
    const int placed = p == Player::White ? (s.ply + 1) / 2 : s.ply / 2;
    if (h != std::max(0, kTokensPerPlayer - placed)) {
      return "hand inconsistent with ply";
    }
  }
  if ((s.ply % 2 == 0) != (s.to_move == Player::White)) {
    return "side to move inconsistent with ply";
  }
  if (s.halfmoves_since_mill_or_removal < 0 ||
      s.halfmoves_since_mill_or_removal > s.ply) {
    return "halfmove counter out of range";
  }
  if ((s.hand[0] > 0 || s.hand[1] > 0) && s.halfmoves_since_mill_or_removal != 0) {
    return "halfmove counter running during placement";
  }
  if (s.history.empty() || s.history.back() != position_key(s)) {
    return "history does not end at current position";
  }
  return {};
}

}  // namespace twin::morris
