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

#include "twin/morris/notation.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace twin::morris {
namespace {

char kind_letter(MoveKind k) {
  switch (k) {
    case MoveKind::Place: return 'P';
    case MoveKind::Slide: return 'S';
    case MoveKind::Fly: return 'F';
  }
  return '?';
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ >= text_.size(); }

  bool expect(char c) {
    if (done() || text_[pos_] != c) return false;
    ++pos_;
    return true;
  }

  std::optional<Point> point() {
    if (pos_ + 2 > text_.size()) return std::nullopt;
    auto p = Point::parse(text_.substr(pos_, 2));
    if (p) pos_ += 2;
    return p;
  }

  std::optional<int> number(int max_digits) {
    std::size_t start = pos_;
    while (!done() && text_[pos_] >= '0' && text_[pos_] <= '9' &&
           pos_ - start < static_cast<std::size_t>(max_digits)) {
      ++pos_;
    }
    if (pos_ == start) return std::nullopt;
    int value = 0;
    std::from_chars(text_.data() + start, text_.data() + pos_, value);
    return value;
  }

  char peek() const { return done() ? '\0' : text_[pos_]; }
  void advance() { ++pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

ParseError fail(std::size_t offset, std::string reason) {
  return ParseError{offset, std::move(reason)};
}

}  // namespace

std::string encode_move(const Move& m) {
  std::string out;
  out.reserve(10);
  out += kind_letter(m.kind);
  out += '-';
  if (m.from) {
    out += m.from->name();
    out += '-';
  }
  out += m.to.name();
  if (m.remove) {
    out += 'x';
    out += m.remove->name();
  }
  return out;
}

Result<Move> decode_move(std::string_view text) {
  Cursor c(text);
  Move m;
  switch (c.peek()) {
    case 'P': m.kind = MoveKind::Place; break;
    case 'S': m.kind = MoveKind::Slide; break;
    case 'F': m.kind = MoveKind::Fly; break;
    default: return fail(0, "expected move kind P, S or F");
  }
  c.advance();
  if (!c.expect('-')) return fail(c.pos(), "expected '-'");
  if (m.kind != MoveKind::Place) {
    m.from = c.point();
    if (!m.from) return fail(c.pos(), "expected source point");
    if (!c.expect('-')) return fail(c.pos(), "expected '-'");
  }
  auto to = c.point();
  if (!to) return fail(c.pos(), "expected destination point");
  m.to = *to;
  if (c.expect('x')) {
    m.remove = c.point();
    if (!m.remove) return fail(c.pos(), "expected removal point");
  }
  if (!c.done()) return fail(c.pos(), "trailing characters");
  return m;
}

std::string encode_state(const GameState& s) {
  std::string out;
  out.reserve(40);
  for (int i = 0; i < kPointCount; ++i) {
    switch (s.at(*Point::from_index(i))) {
      case Occupant::Empty: out += '.'; break;
      case Occupant::White: out += 'W'; break;
      case Occupant::Black: out += 'B'; break;
    }
  }
  out += '|';
  out += std::to_string(s.hand[0]);
  out += ',';
  out += std::to_string(s.hand[1]);
  out += '|';
  out += s.to_move == Player::White ? 'W' : 'B';
  out += '|';
  out += std::to_string(s.ply);
  out += ',';
  out += std::to_string(s.halfmoves_since_mill_or_removal);
  return out;
}

Result<GameState> decode_state(std::string_view text) {
  Cursor c(text);
  GameState s;
  s.tokens = {0, 0};
  for (int i = 0; i < kPointCount; ++i) {
    switch (c.peek()) {
      case '.': break;
      case 'W': s.tokens[0] |= PointMask{1} << i; break;
      case 'B': s.tokens[1] |= PointMask{1} << i; break;
      default: return fail(c.pos(), "expected board character '.', 'W' or 'B'");
    }
    c.advance();
  }
  if (!c.expect('|')) return fail(c.pos(), "expected '|' after board");
  auto hw = c.number(1);
  if (!hw || *hw > kTokensPerPlayer) return fail(c.pos(), "expected white hand 0-9");
  if (!c.expect(',')) return fail(c.pos(), "expected ','");
  auto hb = c.number(1);
  if (!hb || *hb > kTokensPerPlayer) return fail(c.pos(), "expected black hand 0-9");
  s.hand = {*hw, *hb};
  if (!c.expect('|')) return fail(c.pos(), "expected '|' after hands");
  if (c.peek() == 'W') {
    s.to_move = Player::White;
  } else if (c.peek() == 'B') {
    s.to_move = Player::Black;
  } else {
    return fail(c.pos(), "expected side to move 'W' or 'B'");
  }
  c.advance();
  if (!c.expect('|')) return fail(c.pos(), "expected '|' after side to move");
  auto ply = c.number(9);
  if (!ply) return fail(c.pos(), "expected ply");
  if (!c.expect(',')) return fail(c.pos(), "expected ','");
  const std::size_t half_at = c.pos();
  auto half = c.number(9);
  if (!half) return fail(c.pos(), "expected halfmove counter");
  if (!c.done()) return fail(c.pos(), "trailing characters");
  s.ply = *ply;
  s.halfmoves_since_mill_or_removal = *half;
  s.history.assign(1, position_key(s));
  if (std::string why = check_invariants(s); !why.empty()) {
    return fail(half_at, "inconsistent state: " + why);
  }
  return s;
}

std::uint64_t state_digest(const GameState& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : encode_state(s)) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

std::string render_board(const GameState& s) {
  static constexpr std::array<std::string_view, 13> kTemplate = {
      "7 *-----------*-----------*",
      "  |           |           |",
      "6 |   *-------*-------*   |",
      "  |   |       |       |   |",
      "5 |   |   *---*---*   |   |",
      "  |   |   |       |   |   |",
      "4 *---*---*       *---*---*",
      "  |   |   |       |   |   |",
      "3 |   |   *---*---*   |   |",
      "  |   |       |       |   |",
      "2 |   *-------*-------*   |",
      "  |           |           |",
      "1 *-----------*-----------*"};
  // Reading order of the '*' placeholders.
  static constexpr std::array<int, kPointCount> kOrder = {
      21, 22, 23, 18, 19, 20, 15, 16, 17, 9, 10, 11,
      12, 13, 14, 6,  7,  8,  3,  4,  5,  0, 1,  2};
  std::string out;
  std::size_t next = 0;
  for (std::string_view row : kTemplate) {
    for (char ch : row) {
      if (ch == '*') {
        switch (s.at(*Point::from_index(kOrder[next++]))) {
          case Occupant::Empty: out += '.'; break;
          case Occupant::White: out += 'W'; break;
          case Occupant::Black: out += 'B'; break;
        }
      } else {
        out += ch;
      }
    }
    out += '\n';
  }
  out += "  a   b   c   d   e   f   g\n";
  return out;
}

}  // namespace twin::morris
