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

#include "twin/net/line_client.hpp"

#include <array>
#include <boost/asio/connect.hpp>
#include <boost/asio/write.hpp>
#include <stdexcept>

#include "twin/proto/codec.hpp"

namespace twin::net {

namespace asio = boost::asio;
using asio::ip::tcp;

LineClient::LineClient(const Endpoint& endpoint) : socket_(io_) {
  tcp::resolver resolver(io_);
  asio::connect(socket_, resolver.resolve(endpoint.host, std::to_string(endpoint.port)));
  socket_.set_option(tcp::no_delay(true));
}

void LineClient::send(const proto::Body& body) {
  send_raw(proto::encode(proto::Envelope{next_id_++, std::nullopt, body}));
}

void LineClient::send_raw(std::string_view bytes) {
  asio::write(socket_, asio::buffer(bytes.data(), bytes.size()));
}

std::optional<proto::Envelope> LineClient::receive(std::chrono::milliseconds timeout) {
  const auto until = std::chrono::steady_clock::now() + timeout;
  while (ready_.empty()) {
    const auto left = until - std::chrono::steady_clock::now();
    if (left <= std::chrono::steady_clock::duration::zero()) return std::nullopt;
    std::array<char, 8192> buf;
    boost::system::error_code error;
    std::size_t got = 0;
    bool done = false;
    socket_.async_read_some(asio::buffer(buf), [&](boost::system::error_code ec, std::size_t n) {
      error = ec;
      got = n;
      done = true;
    });
    io_.restart();
    io_.run_for(left);
    if (!done) {
      socket_.cancel();
      io_.restart();
      io_.run();
    }
    if (error == asio::error::operation_aborted) return std::nullopt;
    if (error) throw std::runtime_error("connection lost: " + error.message());
    for (auto& line : lines_.feed(std::string_view(buf.data(), got))) ready_.push_back(std::move(line));
  }
  const std::string line = std::move(ready_.front());
  ready_.pop_front();
  auto env = proto::decode_frame(line);
  if (!env) throw std::runtime_error("undecodable frame: " + env.error().reason);
  return std::move(env).value();
}

void LineClient::close() {
  boost::system::error_code ignored;
  socket_.shutdown(tcp::socket::shutdown_both, ignored);
  socket_.close(ignored);
}

}  // namespace twin::net
