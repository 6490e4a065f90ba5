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

#include "twin/net/cell_client.hpp"

#include <array>
#include <atomic>
#include <boost/asio.hpp>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include "twin/proto/codec.hpp"

namespace twin::net {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {
constexpr auto kRetry = std::chrono::milliseconds(200);
}

struct CellClient::Impl {
  Impl(cell::CellConfig cfg, Endpoint ep, Logger lg)
      : sim(std::move(cfg)), endpoint(std::move(ep)), log(std::move(lg)), socket(io), retry(io) {}

  struct Job {
    std::uint64_t generation;
    proto::CellCommand command;
    double delay_ms;
  };

  cell::CellSim sim;
  Endpoint endpoint;
  Logger log;
  asio::io_context io;
  std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;
  tcp::socket socket;
  asio::steady_timer retry;
  LineBuffer lines;
  std::array<char, 8192> buf{};
  std::deque<std::string> writes;
  bool writing = false;
  std::uint64_t next_id = 1;
  std::uint64_t generation = 0;  // bumps on every new connection
  std::atomic<bool> is_connected{false};
  std::atomic<std::uint64_t> registrations{0};
  std::atomic<std::uint64_t> reports{0};

  std::mutex mu;
  std::condition_variable cv;
  std::deque<Job> jobs;
  bool stopping = false;
  bool stopped = false;

  std::thread io_thread;
  std::thread exec_thread;

  void note(const std::string& text) {
    if (log) log(text);
  }

  void connect() {
    tcp::resolver resolver(io);
    boost::system::error_code ec;
    auto endpoints = resolver.resolve(endpoint.host, std::to_string(endpoint.port), ec);
    if (ec) {
      schedule_connect(kRetry);
      return;
    }
    asio::async_connect(socket, endpoints, [this](boost::system::error_code e, const tcp::endpoint&) {
      if (e) {
        boost::system::error_code ignored;
        socket.close(ignored);
        schedule_connect(kRetry);
        return;
      }
      socket.set_option(tcp::no_delay(true));
      ++generation;
      next_id = 1;
      lines = LineBuffer{};
      writes.clear();
      writing = false;
      is_connected = true;
      ++registrations;
      note("connected to " + endpoint.host + ":" + std::to_string(endpoint.port));
      send(proto::RegisterCell{sim.config().cell_id, sim.config().platform.tag});
      read(generation);
    });
  }

  void schedule_connect(std::chrono::milliseconds after) {
    retry.expires_after(after);
    retry.async_wait([this](boost::system::error_code ec) {
      if (!ec) connect();
    });
  }

  void lose(std::chrono::milliseconds reconnect_after) {
    if (!is_connected) return;
    is_connected = false;
    boost::system::error_code ignored;
    socket.shutdown(tcp::socket::shutdown_both, ignored);
    socket.close(ignored);
    ++generation;
    note("connection closed");
    schedule_connect(reconnect_after);
  }

  void read(std::uint64_t gen) {
    socket.async_read_some(asio::buffer(buf), [this, gen](boost::system::error_code ec, std::size_t n) {
      if (gen != generation) return;
      if (ec) {
        lose(kRetry);
        return;
      }
      for (const auto& line : lines.feed(std::string_view(buf.data(), n))) {
        if (gen != generation) return;
        auto env = proto::decode_frame(line);
        if (!env) {
          note("bad frame from orchestrator: " + env.error().reason);
          continue;
        }
        handle(env.value());
      }
      if (gen == generation) read(gen);
    });
  }

  void handle(const proto::Envelope& env) {
    if (env.as<proto::Ping>()) {
      send(proto::Pong{});
      return;
    }
    const auto* cmd = env.as<proto::CellCommand>();
    if (!cmd) return;
    const cell::Admission adm = sim.admit(*cmd);
    if (adm.dropped) {
      if (adm.disconnect_ms > 0) lose(std::chrono::milliseconds(adm.disconnect_ms));
      return;
    }
    send(proto::CellAck{cmd->pid, cmd->command});
    {
      std::lock_guard lock(mu);
      jobs.push_back({generation, *cmd, adm.delay_ms});
    }
    cv.notify_one();
  }

  void send(proto::Body body) {
    if (!is_connected) return;
    writes.push_back(proto::encode(proto::Envelope{next_id++, std::nullopt, std::move(body)}));
    write(generation);
  }

  void write(std::uint64_t gen) {
    if (writing || writes.empty()) return;
    writing = true;
    asio::async_write(socket, asio::buffer(writes.front()), [this, gen](boost::system::error_code ec, std::size_t) {
      if (gen != generation) return;
      writing = false;
      if (ec) {
        lose(kRetry);
        return;
      }
      writes.pop_front();
      write(gen);
    });
  }

  void execute_loop() {
    while (true) {
      Job job;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [this] { return stopping || !jobs.empty(); });
        if (stopping) return;
        job = std::move(jobs.front());
        jobs.pop_front();
      }
      if (job.delay_ms > 0) {
        std::unique_lock lock(mu);
        if (cv.wait_for(lock, std::chrono::duration<double, std::milli>(job.delay_ms),
                        [this] { return stopping; })) {
          return;
        }
      }
      auto report = sim.execute(job.command);
      asio::post(io, [this, gen = job.generation, report = std::move(report)]() mutable {
        if (gen != generation || !is_connected) return;
        ++reports;
        send(std::move(report));
      });
    }
  }
};

CellClient::CellClient(cell::CellConfig config, Endpoint orchestrator, Logger log)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(orchestrator), std::move(log))) {}

CellClient::~CellClient() { stop(); }

void CellClient::start() {
  impl_->work.emplace(impl_->io.get_executor());
  asio::post(impl_->io, [this] { impl_->connect(); });
  impl_->io_thread = std::thread([this] { impl_->io.run(); });
  impl_->exec_thread = std::thread([this] { impl_->execute_loop(); });
}

void CellClient::stop() {
  {
    std::lock_guard lock(impl_->mu);
    if (impl_->stopped) return;
    impl_->stopping = true;
    impl_->stopped = true;
  }
  impl_->cv.notify_all();
  asio::post(impl_->io, [this] {
    impl_->retry.cancel();
    impl_->is_connected = false;
    ++impl_->generation;
    boost::system::error_code ignored;
    impl_->socket.close(ignored);
    impl_->work.reset();
    impl_->io.stop();
  });
  if (impl_->exec_thread.joinable()) impl_->exec_thread.join();
  if (impl_->io_thread.joinable()) impl_->io_thread.join();
}

cell::CellSim& CellClient::sim() { return impl_->sim; }
bool CellClient::connected() const { return impl_->is_connected; }
std::uint64_t CellClient::registrations() const { return impl_->registrations; }
std::uint64_t CellClient::reports_sent() const { return impl_->reports; }

}  // namespace twin::net
