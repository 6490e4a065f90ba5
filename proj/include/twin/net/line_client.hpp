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

#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <chrono>
#include <deque>
#include <optional>

#include "twin/agents/session.hpp"
#include "twin/net/line_buffer.hpp"
#include "twin/proto/envelope.hpp"

namespace twin::net {

/// Blocking NDJSON client for one TCP connection. Not thread-safe.
class LineClient : public agents::Link {
 public:
  /// Throws std::system_error when the connection fails.
  explicit LineClient(const Endpoint& endpoint);

  void send(const proto::Body& body) override;
  /// Next decoded envelope; nothing on timeout. Throws std::runtime_error on
  /// a closed connection or an undecodable frame.
  std::optional<proto::Envelope> receive(std::chrono::milliseconds timeout) override;

  /// Receives until a message of type T arrives; the others are discarded.
  template <typename T>
  std::optional<T> expect(std::chrono::milliseconds timeout) {
    const auto until = std::chrono::steady_clock::now() + timeout;
    while (true) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          until - std::chrono::steady_clock::now());
      if (left.count() <= 0) return std::nullopt;
      auto env = receive(left);
      if (!env) return std::nullopt;
      if (const auto* t = env->as<T>()) return *t;
    }
  }

  void send_raw(std::string_view bytes);
  void close();

 private:
  boost::asio::io_context io_;
  boost::asio::ip::tcp::socket socket_;
  LineBuffer lines_;
  std::deque<std::string> ready_;
  std::uint64_t next_id_ = 1;
};

}  // namespace twin::net
