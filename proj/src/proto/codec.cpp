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

#include "twin/proto/codec.hpp"

#include <array>
#include <cmath>

#include "json.hpp"

namespace twin::proto {
namespace {

using json = nlohmann::json;

constexpr std::array<std::string_view, kMessageKindCount> kKindNames = {
    "Hello",         "HelloAck",    "JoinGame",    "JoinAck",     "SubmitMove", "MoveAccepted",
    "MoveRejected",  "StateUpdate", "ProcessUpdate", "RegisterCell", "RegisterAck",
    "CellCommand",   "CellAck",     "CellStateReport", "Error",    "Ping",       "Pong",
    "ResetGame"};

constexpr std::array<std::string_view, 3> kCommandNames = {"ApplyMove", "ResyncState",
                                                           "ResetBoard"};

struct SchemaViolation {
  std::string reason;
};

// Typed member access with path-qualified errors.
class Fields {
 public:
  Fields(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) fail("", "must be an object");
  }

  std::string str(const char* key) const {
    const json& v = need(key);
    if (!v.is_string()) fail(key, "must be a string");
    return v.get<std::string>();
  }
  std::optional<std::string> opt_str(const char* key) const {
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) fail(key, "must be a string");
    return it->get<std::string>();
  }
  std::uint64_t u64(const char* key) const {
    const json& v = need(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(key, "must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::int64_t i64(const char* key) const {
    const json& v = need(key);
    if (!v.is_number_integer()) fail(key, "must be an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > INT64_MAX) fail(key, "out of range");
    return v.get<std::int64_t>();
  }
  bool boolean(const char* key) const {
    const json& v = need(key);
    if (!v.is_boolean()) fail(key, "must be a boolean");
    return v.get<bool>();
  }
  double number(const char* key) const {
    const json& v = need(key);
    if (!v.is_number()) fail(key, "must be a number");
    return v.get<double>();
  }
  std::vector<std::string> str_list(const char* key) const {
    const json& v = need(key);
    if (!v.is_array()) fail(key, "must be an array");
    std::vector<std::string> out;
    for (const auto& item : v) {
      if (!item.is_string()) fail(key, "must contain strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }
  std::map<std::string, std::string> str_map(const char* key) const {
    const json& v = need(key);
    if (!v.is_object()) fail(key, "must be an object");
    std::map<std::string, std::string> out;
    for (const auto& [k, item] : v.items()) {
      if (!item.is_string()) fail(key, "must map to strings");
      out.emplace(k, item.get<std::string>());
    }
    return out;
  }
  Fields sub(const char* key) const { return Fields(need(key), where_ + "." + key); }

 private:
  const json& need(const char* key) const {
    auto it = obj_.find(key);
    if (it == obj_.end()) fail(key, "is missing");
    return *it;
  }
  [[noreturn]] void fail(std::string_view key, std::string_view what) const {
    std::string path = where_;
    if (!key.empty()) {
      path += '.';
      path += key;
    }
    throw SchemaViolation{path + " " + std::string(what)};
  }

  const json& obj_;
  std::string where_;
};

// Body <-> JSON

json snapshot_json(const StateSnapshot& s) {
  json j{{"state", s.state}, {"status", s.status}, {"to_move", s.to_move}, {"ply", s.ply},
         {"cells", s.cells}};
  if (s.last_move) j["last_move"] = *s.last_move;
  return j;
}

StateSnapshot snapshot_from(const Fields& f) {
  StateSnapshot s;
  s.state = f.str("state");
  s.status = f.str("status");
  s.to_move = f.str("to_move");
  s.ply = f.i64("ply");
  s.last_move = f.opt_str("last_move");
  s.cells = f.str_map("cells");
  return s;
}

CommandType command_from(const Fields& f, const char* key) {
  auto c = parse_command_type(f.str(key));
  if (!c) throw SchemaViolation{std::string("body.") + key + " is not a known command"};
  return *c;
}

struct ToJson {
  json operator()(const Hello& b) const {
    return {{"client_id", b.client_id}, {"role", b.role}};
  }
  json operator()(const HelloAck& b) const {
    return {{"session", b.session}, {"snapshot", snapshot_json(b.snapshot)}};
  }
  json operator()(const JoinGame& b) const {
    json j{{"color", b.color}};
    if (b.token) j["token"] = *b.token;
    return j;
  }
  json operator()(const JoinAck& b) const { return {{"color", b.color}, {"token", b.token}}; }
  json operator()(const SubmitMove& b) const { return {{"move", b.move}}; }
  json operator()(const MoveAccepted& b) const {
    return {{"pid", b.pid}, {"move", b.move}, {"state", b.state}, {"ply", b.ply}};
  }
  json operator()(const MoveRejected& b) const {
    return {{"pid", b.pid}, {"reason", b.reason}};
  }
  json operator()(const StateUpdate& b) const { return snapshot_json(b.snapshot); }
  json operator()(const ProcessUpdate& b) const {
    json j{{"pid", b.pid},         {"state", b.state},       {"purpose", b.purpose},
           {"pending", b.pending}, {"no_cells", b.no_cells}};
    if (b.move) j["move"] = *b.move;
    if (b.reason) j["reason"] = *b.reason;
    if (b.resulting_state) j["resulting_state"] = *b.resulting_state;
    return j;
  }
  json operator()(const RegisterCell& b) const {
    return {{"cell_id", b.cell_id}, {"platform", b.platform}};
  }
  json operator()(const RegisterAck& b) const { return {{"cell_id", b.cell_id}}; }
  json operator()(const CellCommand& b) const {
    json j{{"command", to_string(b.command)}, {"pid", b.pid}};
    if (b.move) j["move"] = *b.move;
    if (b.expected_digest) j["expected_digest"] = *b.expected_digest;
    if (b.state) j["state"] = *b.state;
    return j;
  }
  json operator()(const CellAck& b) const {
    return {{"pid", b.pid}, {"command", to_string(b.command)}};
  }
  json operator()(const CellStateReport& b) const {
    return {{"cell_id", b.cell_id}, {"pid", b.pid},
            {"digest", b.digest},   {"state", b.state},
            {"duration_ms", b.duration_ms}, {"outcome", b.outcome}};
  }
  json operator()(const ErrorBody& b) const {
    return {{"code", b.code}, {"message", b.message}};
  }
  json operator()(const Ping&) const { return json::object(); }
  json operator()(const Pong&) const { return json::object(); }
  json operator()(const ResetGame&) const { return json::object(); }
};

Body body_from(MessageKind kind, const Fields& f) {
  switch (kind) {
    case MessageKind::Hello:
      return Hello{f.str("client_id"), f.str("role")};
    case MessageKind::HelloAck:
      return HelloAck{f.str("session"), snapshot_from(f.sub("snapshot"))};
    case MessageKind::JoinGame:
      return JoinGame{f.str("color"), f.opt_str("token")};
    case MessageKind::JoinAck:
      return JoinAck{f.str("color"), f.str("token")};
    case MessageKind::SubmitMove:
      return SubmitMove{f.str("move")};
    case MessageKind::MoveAccepted:
      return MoveAccepted{f.u64("pid"), f.str("move"), f.str("state"), f.i64("ply")};
    case MessageKind::MoveRejected:
      return MoveRejected{f.u64("pid"), f.str("reason")};
    case MessageKind::StateUpdate:
      return StateUpdate{snapshot_from(f)};
    case MessageKind::ProcessUpdate: {
      ProcessUpdate b;
      b.pid = f.u64("pid");
      b.state = f.str("state");
      b.purpose = f.str("purpose");
      b.move = f.opt_str("move");
      b.reason = f.opt_str("reason");
      b.pending = f.str_list("pending");
      b.no_cells = f.boolean("no_cells");
      b.resulting_state = f.opt_str("resulting_state");
      return b;
    }
    case MessageKind::RegisterCell:
      return RegisterCell{f.str("cell_id"), f.str("platform")};
    case MessageKind::RegisterAck:
      return RegisterAck{f.str("cell_id")};
    case MessageKind::CellCommand: {
      CellCommand b;
      b.command = command_from(f, "command");
      b.pid = f.u64("pid");
      b.move = f.opt_str("move");
      b.expected_digest = f.opt_str("expected_digest");
      b.state = f.opt_str("state");
      return b;
    }
    case MessageKind::CellAck:
      return CellAck{f.u64("pid"), command_from(f, "command")};
    case MessageKind::CellStateReport: {
      CellStateReport b;
      b.cell_id = f.str("cell_id");
      b.pid = f.u64("pid");
      b.digest = f.str("digest");
      b.state = f.str("state");
      b.duration_ms = f.number("duration_ms");
      b.outcome = f.str("outcome");
      return b;
    }
    case MessageKind::Error:
      return ErrorBody{f.str("code"), f.str("message")};
    case MessageKind::Ping:
      return Ping{};
    case MessageKind::Pong:
      return Pong{};
    case MessageKind::ResetGame:
      return ResetGame{};
  }
  throw SchemaViolation{"kind not handled"};
}

DecodeError error(std::size_t offset, DecodeFailure failure, std::string reason,
                  std::optional<std::uint64_t> id = std::nullopt) {
  return DecodeError{offset, failure, std::move(reason), id};
}

}  // namespace

std::string_view to_string(MessageKind k) noexcept {
  return kKindNames[static_cast<std::size_t>(k)];
}

std::optional<MessageKind> parse_message_kind(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<MessageKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(CommandType c) noexcept {
  return kCommandNames[static_cast<std::size_t>(c)];
}

std::optional<CommandType> parse_command_type(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kCommandNames.size(); ++i) {
    if (kCommandNames[i] == name) return static_cast<CommandType>(i);
  }
  return std::nullopt;
}

std::string encode(const Envelope& e) {
  json j;
  j["id"] = e.id;
  if (e.re) j["re"] = *e.re;
  j["kind"] = to_string(e.kind());
  j["body"] = std::visit(ToJson{}, e.body);
  std::string out = j.dump(-1, ' ', false, json::error_handler_t::replace);
  out += '\n';
  return out;
}

Result<Envelope, DecodeError> decode_frame(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (line.size() > kMaxFrameBytes) {
    return error(kMaxFrameBytes, DecodeFailure::Oversized,
                 "frame exceeds " + std::to_string(kMaxFrameBytes) + " bytes");
  }
  if (line.find('\n') != std::string_view::npos) {
    return error(line.find('\n'), DecodeFailure::Malformed, "interior newline");
  }

  json j;
  try {
    j = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& ex) {
    std::size_t offset = ex.byte > 0 ? ex.byte - 1 : 0;
    return error(std::min(offset, line.size()), DecodeFailure::Malformed, ex.what());
  } catch (const std::exception& ex) {
    return error(0, DecodeFailure::Malformed, ex.what());
  }

  std::optional<std::uint64_t> id;
  try {
    Fields top(j, "frame");
    id = top.u64("id");
    Envelope e;
    e.id = *id;
    if (j.contains("re") && !j["re"].is_null()) e.re = top.u64("re");
    std::string kind_name = top.str("kind");
    auto kind = parse_message_kind(kind_name);
    if (!kind) {
      return error(0, DecodeFailure::UnknownKind, "unknown kind '" + kind_name + "'", id);
    }
    e.body = body_from(*kind, top.sub("body"));
    return e;
  } catch (const SchemaViolation& v) {
    return error(0, DecodeFailure::Schema, v.reason, id);
  } catch (const std::exception& ex) {
    return error(0, DecodeFailure::Schema, ex.what(), id);
  }
}

}  // namespace twin::proto
