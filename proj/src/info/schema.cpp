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

#include "twin/info/schema.hpp"

#include <algorithm>

namespace twin::info::schema {

NodePath process_state(std::uint64_t pid) {
  return NodePath::of("/processes/" + std::to_string(pid) + "/state");
}

NodePath process_updated_at(std::uint64_t pid) {
  return NodePath::of("/processes/" + std::to_string(pid) + "/updated_at");
}

NodePath cell_status(std::string_view cell_id) {
  return NodePath::of("/cells/" + std::string(cell_id) + "/status");
}

NodePath cell_platform(std::string_view cell_id) {
  return NodePath::of("/cells/" + std::string(cell_id) + "/platform");
}

NodePath cell_last_report(std::string_view cell_id) {
  return NodePath::of("/cells/" + std::string(cell_id) + "/last_report");
}

bool valid_cell_id(std::string_view cell_id) {
  if (cell_id.empty() || cell_id.size() > 64) return false;
  return std::all_of(cell_id.begin(), cell_id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

void define_game_nodes(AddressSpace& space, const std::string& state_text,
                       const std::string& status, const std::string& to_move,
                       std::int64_t ply) {
  space.define_node(NodePath::of(kBoard), ValueType::StateBlob, StateBlob{state_text});
  space.define_node(NodePath::of(kStatus), ValueType::Text, status);
  space.define_node(NodePath::of(kToMove), ValueType::Text, to_move);
  space.define_node(NodePath::of(kLastMove), ValueType::MoveBlob, MoveBlob{});
  space.define_node(NodePath::of(kPly), ValueType::Integer, ply);
  space.define_node(NodePath::of(kPlayerWhite), ValueType::Text, std::string("open"));
  space.define_node(NodePath::of(kPlayerBlack), ValueType::Text, std::string("open"));
}

void define_process_nodes(AddressSpace& space, std::uint64_t pid,
                          const std::string& state, std::int64_t now_ms) {
  space.define_node(process_state(pid), ValueType::Text, state);
  space.define_node(process_updated_at(pid), ValueType::Timestamp, Timestamp{now_ms});
}

void define_cell_nodes(AddressSpace& space, std::string_view cell_id,
                       const std::string& platform, const std::string& state_text) {
  space.define_node(cell_status(cell_id), ValueType::Text, std::string("registered"));
  space.define_node(cell_platform(cell_id), ValueType::Text, platform);
  space.define_node(cell_last_report(cell_id), ValueType::StateBlob, StateBlob{state_text});
}

}  // namespace twin::info::schema
