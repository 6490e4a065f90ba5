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

#include "twin/net/server.hpp"

#include <array>
#include <boost/asio.hpp>
#include <chrono>
#include <deque>
#include <map>
#include <system_error>

#include "twin/net/line_buffer.hpp"
#include "twin/proto/codec.hpp"

namespace twin::net {

namespace asio = boost::asio;
using asio::ip::tcp;

orch::Millis wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

namespace {

struct Connection {
  explicit Connection(tcp::socket s) : socket(std::move(s)) {}
  tcp::socket socket;
  LineBuffer lines;
  std::array<char, 8192> buf{};
  std::deque<std::string> writes;
  bool writing = false;
  bool close_after_writes = false;
};

tcp::acceptor listen(asio::io_context& io, std::uint16_t port) {
  tcp::acceptor acc(io);
  const tcp::endpoint ep(tcp::v4(), port);
  boost::system::error_code ec;
  acc.open(ep.protocol(), ec);
  if (!ec) acc.set_option(tcp::acceptor::reuse_address(true), ec);
  if (!ec) acc.bind(ep, ec);
  if (!ec) acc.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) {
    throw std::system_error(ec.value(), std::system_category(),
                            "cannot listen on port " + std::to_string(port));
  }
  return acc;
}

}  // namespace

struct OrchestratorServer::Impl {
  Impl(orch::OrchestratorConfig cfg, Logger lg)
      : log(std::move(lg)),
        it_acceptor(listen(io, cfg.it_port)),
        ot_acceptor(listen(io, cfg.ot_port)),
        timer(io),
        orchestrator(std::move(cfg), space, wall_clock_ms, log) {}

  Logger log;
  asio::io_context io;
  tcp::acceptor it_acceptor;
  tcp::acceptor ot_acceptor;
  asio::steady_timer timer;
  info::AddressSpace space;
  orch::Orchestrator orchestrator;
  std::map<orch::ConnId, std::shared_ptr<Connection>> conns;
  orch::ConnId next_conn = 0;
  bool stopping = false;

  void accept(tcp::acceptor& acc, orch::Side side) {
    acc.async_accept([this, &acc, side](boost::system::error_code ec, tcp::socket socket) {
      if (stopping) return;
      if (!ec) {
        socket.set_option(tcp::no_delay(true));
        const orch::ConnId id = ++next_conn;
        auto conn = std::make_shared<Connection>(std::move(socket));
        conns[id] = conn;
        orchestrator.on_connect(id, side);
        read(id, conn);
        flush();
      }
      accept(acc, side);
    });
  }

  void read(orch::ConnId id, std::shared_ptr<Connection> conn) {
    conn->socket.async_read_some(
        asio::buffer(conn->buf), [this, id, conn](boost::system::error_code ec, std::size_t n) {
          if (stopping) return;
          if (ec) {
            drop(id);
            return;
          }
          for (const auto& line : conn->lines.feed(std::string_view(conn->buf.data(), n))) {
            orchestrator.on_frame(id, line);
          }
          flush();
          if (conns.count(id)) read(id, conn);
        });
  }

  void drop(orch::ConnId id) {
    auto it = conns.find(id);
    if (it == conns.end()) return;
    boost::system::error_code ignored;
    it->second->socket.close(ignored);
    conns.erase(it);
    orchestrator.on_disconnect(id);
    flush();
  }

  void write(orch::ConnId id, std::shared_ptr<Connection> conn) {
    if (conn->writing) return;
    if (conn->writes.empty()) {
      if (conn->close_after_writes) drop(id);
      return;
    }
    conn->writing = true;
    asio::async_write(conn->socket, asio::buffer(conn->writes.front()),
                      [this, id, conn](boost::system::error_code ec, std::size_t) {
                        conn->writing = false;
                        if (stopping) return;
                        if (ec) {
                          drop(id);
                          return;
                        }
                        conn->writes.pop_front();
                        write(id, conn);
                      });
  }

  void flush() {
    for (auto& out : orchestrator.take_outbox()) {
      auto it = conns.find(out.conn);
      if (it == conns.end()) continue;
      if (out.close) {
        it->second->close_after_writes = true;
      } else {
        it->second->writes.push_back(proto::encode(*out.envelope));
      }
      write(out.conn, it->second);
    }
    arm_timer();
  }

  void arm_timer() {
    const orch::Millis wait = std::max<orch::Millis>(0, orchestrator.next_deadline() - wall_clock_ms());
    timer.expires_after(std::chrono::milliseconds(wait));
    timer.async_wait([this](boost::system::error_code ec) {
      if (ec || stopping) return;
      orchestrator.tick();
      flush();
    });
  }

  void shutdown() {
    stopping = true;
    boost::system::error_code ignored;
    it_acceptor.close(ignored);
    ot_acceptor.close(ignored);
    timer.cancel();
    for (auto& [id, conn] : conns) conn->socket.close(ignored);
    conns.clear();
    io.stop();
  }
};

OrchestratorServer::OrchestratorServer(orch::OrchestratorConfig config, Logger log)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(log))) {}

OrchestratorServer::~OrchestratorServer() = default;

void OrchestratorServer::run() {
  impl_->accept(impl_->it_acceptor, orch::Side::IT);
  impl_->accept(impl_->ot_acceptor, orch::Side::OT);
  impl_->arm_timer();
  impl_->io.run();
}

void OrchestratorServer::stop() {
  asio::post(impl_->io, [this] { impl_->shutdown(); });
}

std::uint16_t OrchestratorServer::it_port() const { return impl_->it_acceptor.local_endpoint().port(); }
std::uint16_t OrchestratorServer::ot_port() const { return impl_->ot_acceptor.local_endpoint().port(); }
info::AddressSpace& OrchestratorServer::space() { return impl_->space; }

void OrchestratorServer::inspect(std::function<void(const orch::Orchestrator&)> fn) {
  std::promise<void> done;
  asio::post(impl_->io, [&] {
    try {
      fn(impl_->orchestrator);
      done.set_value();
    } catch (...) {
      done.set_exception(std::current_exception());
    }
  });
  done.get_future().get();
}

}  // namespace twin::net
