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

#include "twin/agents/session.hpp"

#include "twin/morris/notation.hpp"

namespace twin::agents {

AgentSession::AgentSession(SessionOptions options, Chooser chooser)
    : options_(std::move(options)), chooser_(std::move(chooser)) {}

std::vector<proto::Body> AgentSession::start() {
  return {proto::Hello{options_.client_id, "player"}, proto::JoinGame{options_.color, std::nullopt}};
}

std::vector<proto::Body> AgentSession::on_message(const proto::Envelope& env) {
  if (finished_) return {};
  if (const auto* ack = env.as<proto::HelloAck>()) {
    snapshot_ = ack->snapshot;
    return maybe_move();
  }
  if (const auto* join = env.as<proto::JoinAck>()) {
    if (join->color == "spectator") {
      throw AgentError("no seat available for " + options_.client_id);
    }
    seat_ = join->color;
    return maybe_move();
  }
  if (const auto* up = env.as<proto::StateUpdate>()) {
    snapshot_ = up->snapshot;
    retry_ = false;
    return maybe_move();
  }
  if (env.as<proto::MoveAccepted>()) {
    awaiting_reply_ = false;
    return {};
  }
  if (const auto* rej = env.as<proto::MoveRejected>()) {
    awaiting_reply_ = false;
    if (rej->reason != "busy") {
      throw AgentError("move rejected by the orchestrator: " + rej->reason);
    }
    ++busy_retries_;
    retry_ = true;
    return {};
  }
  if (const auto* pu = env.as<proto::ProcessUpdate>()) {
    if (retry_ && (pu->state == "completed" || pu->state == "failed")) {
      retry_ = false;
      return maybe_move();
    }
    return {};
  }
  if (const auto* err = env.as<proto::ErrorBody>()) {
    throw AgentError("orchestrator error " + err->code + ": " + err->message);
  }
  return {};
}

std::vector<proto::Body> AgentSession::maybe_move() {
  if (!seat_ || !snapshot_ || awaiting_reply_ || retry_) return {};
  if (snapshot_->status != "ongoing") {
    finished_ = true;
    result_ = snapshot_->status;
    return {};
  }
  if (snapshot_->to_move != *seat_) return {};
  auto state = morris::decode_state(snapshot_->state);
  if (!state) throw AgentError("undecodable state from the orchestrator: " + state.error().reason);
  const morris::Move m = chooser_(*state);
  awaiting_reply_ = true;
  ++submitted_;
  return {proto::SubmitMove{morris::encode_move(m)}};
}

void agent_loop(Link& link, AgentSession& session, std::chrono::milliseconds idle) {
  for (const auto& b : session.start()) link.send(b);
  while (!session.finished()) {
    auto env = link.receive(idle);
    if (!env) throw std::runtime_error("no message from the orchestrator");
    for (const auto& b : session.on_message(*env)) link.send(b);
  }
}

}  // namespace twin::agents
