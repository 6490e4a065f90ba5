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

#include "twin/info/address_space.hpp"

namespace twin::info::schema {

// Game and player nodes defined at boot.
inline constexpr std::string_view kBoard = "/game/state/board";
inline constexpr std::string_view kStatus = "/game/state/status";
inline constexpr std::string_view kToMove = "/game/state/to_move";
inline constexpr std::string_view kLastMove = "/game/last_move";
inline constexpr std::string_view kPly = "/game/ply";
inline constexpr std::string_view kPlayerWhite = "/players/white";
inline constexpr std::string_view kPlayerBlack = "/players/black";

/// Number of nodes each process and each cell contributes.
inline constexpr std::size_t kNodesPerProcess = 2;
inline constexpr std::size_t kNodesPerCell = 3;
inline constexpr std::size_t kGameNodes = 7;

NodePath process_state(std::uint64_t pid);
NodePath process_updated_at(std::uint64_t pid);
NodePath cell_status(std::string_view cell_id);
NodePath cell_platform(std::string_view cell_id);
NodePath cell_last_report(std::string_view cell_id);

/// Cell ids become path segments and must match `[a-z0-9_-]+`.
bool valid_cell_id(std::string_view cell_id);

void define_game_nodes(AddressSpace& space, const std::string& state_text,
                       const std::string& status, const std::string& to_move,
                       std::int64_t ply);
void define_process_nodes(AddressSpace& space, std::uint64_t pid,
                          const std::string& state, std::int64_t now_ms);
void define_cell_nodes(AddressSpace& space, std::string_view cell_id,
                       const std::string& platform, const std::string& state_text);

}  // namespace twin::info::schema
