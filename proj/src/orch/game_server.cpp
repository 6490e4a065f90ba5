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

#include <iomanip>
#include <sstream>

#include "context.hpp"

namespace twin::orch::detail {

namespace {

std::string_view side_name(Side s) { return s == Side::IT ? "IT" : "OT"; }

std::string color_name(int c) {
  return std::string(morris::to_string(static_cast<morris::Player>(c)));
}

bool allowed_on(Side side, proto::MessageKind k) {
  using K = proto::MessageKind;
  switch (k) {
    case K::Hello:
    case K::JoinGame:
    case K::SubmitMove:
    case K::ResetGame: return side == Side::IT;
    case K::RegisterCell:
    case K::CellAck:
    case K::CellStateReport: return side == Side::OT;
    case K::Ping:
    case K::Pong: return true;
    case K::HelloAck:
    case K::JoinAck:
    case K::MoveAccepted:
    case K::MoveRejected:
    case K::StateUpdate:
    case K::ProcessUpdate:
    case K::RegisterAck:
    case K::CellCommand:
    case K::Error: return false;
  }
  return false;
}

}  // namespace

void GameServer::on_connect(ConnId conn, Side side) {
  Session s;
  s.side = side;
  s.client_id = "conn-" + std::to_string(conn);
  ctx_.sessions[conn] = std::move(s);
  ctx_.note("conn " + std::to_string(conn) + ": connected on " + std::string(side_name(side)));
}

void GameServer::on_disconnect(ConnId conn) {
  auto it = ctx_.sessions.find(conn);
  if (it == ctx_.sessions.end()) return;
  if (it->second.cell_id) executor_.cell_lost(*it->second.cell_id);
  // Seats survive; the holder reclaims them with the token.
  for (auto& seat : ctx_.seats) {
    if (seat.conn == conn) seat.conn.reset();
  }
  ctx_.sessions.erase(it);
  ctx_.note("conn " + std::to_string(conn) + ": disconnected");
}

void GameServer::on_frame(ConnId conn, std::string_view line) {
  if (!ctx_.sessions.count(conn)) return;
  auto env = proto::decode_frame(line);
  if (!env) {
    const auto& e = env.error();
    const auto code = e.failure == proto::DecodeFailure::UnknownKind ? proto::error_code::kUnknownKind
                                                                     : proto::error_code::kBadFrame;
    ctx_.error(conn, code, "offset " + std::to_string(e.offset) + ": " + e.reason, e.id);
    return;
  }
  handle(conn, *env);
}

void GameServer::handle(ConnId conn, const proto::Envelope& env) {
  auto it = ctx_.sessions.find(conn);
  if (it == ctx_.sessions.end()) return;
  Session& s = it->second;
  if (!s.guard.accept(env.id)) {
    ctx_.error(conn, proto::error_code::kBadMsgId,
               "message id " + std::to_string(env.id) + " is not increasing", env.id);
    return;
  }
  if (s.cell_id) {
    if (auto c = ctx_.cells.find(*s.cell_id); c != ctx_.cells.end()) c->second.missed_pongs = 0;
  }
  if (!allowed_on(s.side, env.kind())) {
    ctx_.error(conn, proto::error_code::kNotAllowed,
               std::string(proto::to_string(env.kind())) + " is not accepted on the " +
                   std::string(side_name(s.side)) + " port",
               env.id);
    return;
  }

  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, proto::Hello>) {
          hello(conn, s, body, env.id);
        } else if constexpr (std::is_same_v<T, proto::JoinGame>) {
          join(conn, s, body, env.id);
        } else if constexpr (std::is_same_v<T, proto::SubmitMove>) {
          provider_.submit(conn, body, env.id);
        } else if constexpr (std::is_same_v<T, proto::ResetGame>) {
          if (s.role != "admin") {
            ctx_.error(conn, proto::error_code::kNotAllowed, "reset needs the admin role", env.id);
          } else {
            provider_.reset(conn, env.id);
          }
        } else if constexpr (std::is_same_v<T, proto::RegisterCell>) {
          aggregator_.register_cell(conn, body, env.id);
        } else if constexpr (std::is_same_v<T, proto::CellStateReport>) {
          aggregator_.on_report(conn, body, env.id);
        } else if constexpr (std::is_same_v<T, proto::Ping>) {
          ctx_.send(conn, proto::Pong{}, env.id);
        }
        // CellAck and Pong only refresh liveness.
      },
      env.body);
}

void GameServer::hello(ConnId conn, Session& s, const proto::Hello& body, std::uint64_t re) {
  if (!body.client_id.empty()) s.client_id = body.client_id;
  if (body.role != "player" && body.role != "spectator" && body.role != "admin") {
    ctx_.error(conn, proto::error_code::kBadRequest, "unknown role '" + body.role + "'", re);
    return;
  }
  s.role = body.role;
  ctx_.send(conn, proto::HelloAck{"s" + std::to_string(conn), ctx_.snapshot()}, re);
}

void GameServer::join(ConnId conn, Session& s, const proto::JoinGame& body, std::uint64_t re) {
  auto ack = [&](int color) {
    ctx_.send(conn, proto::JoinAck{color_name(color), ctx_.seats[color].token}, re);
  };
  if (body.color != "white" && body.color != "black" && body.color != "any") {
    ctx_.error(conn, proto::error_code::kBadRequest, "unknown color '" + body.color + "'", re);
    return;
  }
  if (body.token) {
    for (int c = 0; c < 2; ++c) {
      Seat& seat = ctx_.seats[c];
      if (!seat.token.empty() && seat.token == *body.token) {
        seat.conn = conn;
        if (seat.holder != s.client_id) {
          seat.holder = s.client_id;
          ctx_.log.append(SeatRecord{color_name(c), seat.holder, seat.token});
          ctx_.publish_seat(c);
        }
        return ack(c);
      }
    }
    ctx_.error(conn, proto::error_code::kNotAllowed, "unknown seat token", re);
    return;
  }
  for (int c = 0; c < 2; ++c) {
    if (ctx_.seats[c].conn == conn) return ack(c);
  }
  for (int c = 0; c < 2; ++c) {
    const bool wanted = body.color == "any" || body.color == color_name(c);
    Seat& seat = ctx_.seats[c];
    if (!wanted || !seat.holder.empty()) continue;
    std::ostringstream token;
    token << std::hex << std::setw(16) << std::setfill('0') << ctx_.rng();
    seat.holder = s.client_id;
    seat.token = token.str();
    seat.conn = conn;
    ctx_.log.append(SeatRecord{color_name(c), seat.holder, seat.token});
    ctx_.publish_seat(c);
    return ack(c);
  }
  ctx_.send(conn, proto::JoinAck{"spectator", ""}, re);
}

void GameServer::heartbeat() {
  std::vector<std::string> lost;
  for (auto& [id, cell] : ctx_.cells) {
    if (!cell.conn) continue;
    if (cell.missed_pongs >= ctx_.config.missed_pongs_offline) {
      lost.push_back(id);
      continue;
    }
    ++cell.missed_pongs;
    ctx_.send(*cell.conn, proto::Ping{});
  }
  for (const auto& id : lost) {
    const ConnId conn = *ctx_.cells.at(id).conn;
    ctx_.note("cell " + id + ": no pong, declared offline");
    executor_.cell_lost(id);
    ctx_.close(conn);
  }
}

}  // namespace twin::orch::detail
