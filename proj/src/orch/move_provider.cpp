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

#include <stdexcept>

#include "context.hpp"
#include "twin/morris/notation.hpp"

namespace twin::orch::detail {

void MoveProvider::submit(ConnId conn, const proto::SubmitMove& body, std::uint64_t re) {
  const Session& session = ctx_.sessions.at(conn);
  Process& p = ctx_.spawn(Purpose::Move, session.client_id);
  auto reject = [&](std::string reason) {
    p.reason = reason;
    ctx_.fire(p, ProcEvent::Reject);
    ctx_.send(conn, proto::MoveRejected{p.pid, std::move(reason)}, re);
  };

  int seat = -1;
  for (int c = 0; c < 2; ++c) {
    if (ctx_.seats[c].conn == conn) seat = c;
  }
  if (seat < 0) return reject("no-seat");
  if (!morris::game_status(ctx_.state).ongoing()) return reject("game-over");
  if (ctx_.in_flight) return reject("busy");
  if (static_cast<int>(ctx_.state.to_move) != seat) return reject("not-your-turn");
  auto move = morris::decode_move(body.move);
  if (!move) return reject(std::string(morris::to_string(morris::RejectReason::MalformedMove)));
  p.move = *move;
  if (auto v = morris::validate_move(ctx_.state, *move); !v.ok()) {
    return reject(std::string(morris::to_string(*v.reason)));
  }

  ctx_.fire(p, ProcEvent::Accept);
  ctx_.in_flight = p.pid;
  morris::GameState next = morris::apply_legal_move(ctx_.state, *move);
  const std::string text = morris::encode_move(*move);
  const std::string next_digest = morris::digest_hex(morris::state_digest(next));
  // Durable before anyone hears about it.
  ctx_.log.append(MoveRecord{p.pid, next.ply, text, next_digest});
  ctx_.commit(p.pid, "move", std::move(next), text);
  p.resulting_state = morris::encode_state(ctx_.state);
  p.resulting_digest = ctx_.digest;

  ctx_.send(conn, proto::MoveAccepted{p.pid, text, *p.resulting_state, ctx_.state.ply}, re);
  ctx_.broadcast_it(proto::StateUpdate{ctx_.snapshot()});
  executor_.dispatch(p, proto::CommandType::ApplyMove);
}

void MoveProvider::reset(ConnId conn, std::uint64_t re) {
  const Session& session = ctx_.sessions.at(conn);
  Process& p = ctx_.spawn(Purpose::Reset, session.client_id);
  if (ctx_.in_flight) {
    p.reason = "busy";
    ctx_.fire(p, ProcEvent::Reject);
    ctx_.send(conn, ctx_.process_update(p), re);
    return;
  }
  ctx_.fire(p, ProcEvent::Accept);
  ctx_.in_flight = p.pid;
  morris::GameState next = morris::initial_state();
  ctx_.log.append(ResetRecord{p.pid, morris::digest_hex(morris::state_digest(next))});
  ctx_.commit(p.pid, "reset", std::move(next), std::nullopt);
  p.resulting_state = morris::encode_state(ctx_.state);
  p.resulting_digest = ctx_.digest;
  ctx_.send(conn, ctx_.process_update(p), re);
  ctx_.broadcast_it(proto::StateUpdate{ctx_.snapshot()});
  executor_.dispatch(p, proto::CommandType::ResetBoard);
}

}  // namespace twin::orch::detail
