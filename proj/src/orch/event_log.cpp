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

#include "twin/orch/event_log.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "twin/morris/notation.hpp"

namespace twin::orch {
namespace {

using json = nlohmann::json;

struct ToJson {
  json operator()(const MoveRecord& r) const {
    return {{"type", "move"}, {"pid", r.pid}, {"ply", r.ply}, {"move", r.move}, {"digest", r.digest}};
  }
  json operator()(const ResetRecord& r) const {
    return {{"type", "reset"}, {"pid", r.pid}, {"digest", r.digest}};
  }
  json operator()(const ProcessRecord& r) const {
    json j{{"type", "process"}, {"pid", r.pid}, {"purpose", r.purpose}, {"state", r.state}};
    if (r.move) j["move"] = *r.move;
    return j;
  }
  json operator()(const SeatRecord& r) const {
    return {{"type", "seat"}, {"color", r.color}, {"holder", r.holder}, {"token", r.token}};
  }
};

}  // namespace

std::string encode_record(const LogRecord& r) {
  return std::visit(ToJson{}, r).dump(-1, ' ', false, json::error_handler_t::replace);
}

Result<LogRecord> decode_record(std::string_view line) {
  try {
    json j = json::parse(line.begin(), line.end());
    const std::string type = j.at("type").get<std::string>();
    if (type == "move") {
      return LogRecord{MoveRecord{j.at("pid").get<Pid>(), j.at("ply").get<std::int64_t>(),
                                  j.at("move").get<std::string>(),
                                  j.at("digest").get<std::string>()}};
    }
    if (type == "reset") {
      return LogRecord{ResetRecord{j.at("pid").get<Pid>(), j.at("digest").get<std::string>()}};
    }
    if (type == "process") {
      ProcessRecord r{j.at("pid").get<Pid>(), j.at("purpose").get<std::string>(),
                      j.at("state").get<std::string>(), std::nullopt};
      if (j.contains("move")) r.move = j.at("move").get<std::string>();
      return LogRecord{r};
    }
    if (type == "seat") {
      return LogRecord{SeatRecord{j.at("color").get<std::string>(),
                                  j.at("holder").get<std::string>(),
                                  j.at("token").get<std::string>()}};
    }
    return ParseError{0, "unknown record type '" + type + "'"};
  } catch (const json::parse_error& e) {
    return ParseError{e.byte > 0 ? e.byte - 1 : 0, e.what()};
  } catch (const std::exception& e) {
    return ParseError{0, e.what()};
  }
}

Replay replay_log(const std::string& path) {
  Replay out;
  out.state = morris::initial_state();
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;  // no log yet: fresh game

  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      // Torn final write.
      out.truncated_tail = true;
      break;
    }
    ++line_no;
    std::string_view line(text.data() + start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    auto rec = decode_record(line);
    if (!rec) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + rec.error().reason);
    }
    const std::string where = path + ":" + std::to_string(line_no);
    if (auto* m = std::get_if<MoveRecord>(&*rec)) {
      auto move = morris::decode_move(m->move);
      if (!move) throw std::runtime_error(where + ": bad move " + m->move);
      auto v = morris::validate_move(out.state, *move);
      if (!v.ok()) {
        throw std::runtime_error(where + ": logged move " + m->move + " is illegal (" +
                                 std::string(morris::to_string(*v.reason)) + ")");
      }
      out.state = morris::apply_legal_move(out.state, *move);
      if (morris::digest_hex(morris::state_digest(out.state)) != m->digest ||
          out.state.ply != m->ply) {
        throw std::runtime_error(where + ": digest mismatch after " + m->move);
      }
      out.max_pid = std::max(out.max_pid, m->pid);
    } else if (auto* r = std::get_if<ResetRecord>(&*rec)) {
      out.state = morris::initial_state();
      if (morris::digest_hex(morris::state_digest(out.state)) != r->digest) {
        throw std::runtime_error(where + ": digest mismatch after reset");
      }
      out.max_pid = std::max(out.max_pid, r->pid);
    } else if (auto* p = std::get_if<ProcessRecord>(&*rec)) {
      out.max_pid = std::max(out.max_pid, p->pid);
    }
    out.records.push_back(std::move(rec).value());
  }
  return out;
}

EventLog::EventLog(const std::string& path) : path_(path) {
  // A torn tail from a crash would corrupt the next record; cut it off first.
  std::string keep;
  {
    std::ifstream in(path, std::ios::binary);
    if (in) {
      std::stringstream buf;
      buf << in.rdbuf();
      keep = buf.str();
      if (auto nl = keep.rfind('\n'); nl != std::string::npos) {
        keep.resize(nl + 1);
      } else {
        keep.clear();
      }
      std::ofstream rewrite(path, std::ios::binary | std::ios::trunc);
      rewrite << keep;
    }
  }
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw std::runtime_error("cannot open log file " + path);
}

void EventLog::append(const LogRecord& r) {
  if (!out_.is_open()) return;
  out_ << encode_record(r) << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("write to log file " + path_ + " failed");
}

}  // namespace twin::orch
