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
#include <string>
#include <string_view>

#include "twin/morris/game.hpp"
#include "twin/util/result.hpp"

namespace twin::morris {

/// `P-d1`, `S-a1-a4xb2`, `F-c3-g7`.
std::string encode_move(const Move& m);
Result<Move> decode_move(std::string_view text);

/// `<24 board chars>|<white hand>,<black hand>|<W|B>|<ply>,<halfmoves>`,
/// board chars in canonical point order using `.`, `W`, `B`.
std::string encode_state(const GameState& s);

/// Rejects malformed text and states violating GameState invariants. The
/// repetition history of the result starts at the decoded position.
Result<GameState> decode_state(std::string_view text);

/// FNV-1a 64 over the canonical state text.
std::uint64_t state_digest(const GameState& s);
std::string digest_hex(std::uint64_t digest);

/// Multi-line board picture for terminals.
std::string render_board(const GameState& s);

}  // namespace twin::morris
