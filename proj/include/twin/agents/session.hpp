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

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twin/morris/game.hpp"
#include "twin/proto/envelope.hpp"

namespace twin::agents {

/// Raised when the orchestrator refuses one of our moves for any reason
/// other than `busy`: that is a bug in the agent or the twin.
class AgentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Chooser = std::function<morris::Move(const morris::GameState&)>;

struct SessionOptions {
  std::string client_id = "agent";
  std::string color = "any";  // white | black | any
};

/// Reactive IT client: feed it every envelope received, send what it
/// returns. Transport-independent.
class AgentSession {
 public:
  AgentSession(SessionOptions options, Chooser chooser);

  /// Hello and JoinGame.
  std::vector<proto::Body> start();
  std::vector<proto::Body> on_message(const proto::Envelope& env);

  bool finished() const noexcept { return finished_; }
  /// Final status text ("won:white:below-three", ...) once finished.
  const std::string& result() const noexcept { return result_; }
  const std::optional<std::string>& seat() const noexcept { return seat_; }
  std::size_t submitted() const noexcept { return submitted_; }
  std::size_t busy_retries() const noexcept { return busy_retries_; }

 private:
  std::vector<proto::Body> maybe_move();

  SessionOptions options_;
  Chooser chooser_;
  std::optional<std::string> seat_;
  std::optional<proto::StateSnapshot> snapshot_;
  bool awaiting_reply_ = false;
  bool retry_ = false;
  bool finished_ = false;
  std::string result_;
  std::size_t submitted_ = 0;
  std::size_t busy_retries_ = 0;
};

/// A bidirectional envelope channel (a TCP connection, or a test double).
class Link {
 public:
  virtual ~Link() = default;
  virtual void send(const proto::Body& body) = 0;
  /// Next envelope, or nothing when `timeout` passes.
  virtual std::optional<proto::Envelope> receive(std::chrono::milliseconds timeout) = 0;
};

/// Drives `session` over `link` until the game ends. Throws AgentError on a
/// fatal rejection and std::runtime_error when nothing arrives for `idle`.
void agent_loop(Link& link, AgentSession& session,
                std::chrono::milliseconds idle = std::chrono::seconds(60));

}  // namespace twin::agents
