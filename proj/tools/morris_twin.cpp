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

// morris-twin: orchestrator, robot cell, agent and scripted player in one binary.

#include <CLI11.hpp>

#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <thread>

#include "twin/agents/search.hpp"
#include "twin/agents/session.hpp"
#include "twin/morris/notation.hpp"
#include "twin/net/cell_client.hpp"
#include "twin/net/line_client.hpp"
#include "twin/net/server.hpp"

using namespace twin;
using namespace std::chrono_literals;

namespace {

void log_line(std::string_view text) { std::cerr << text << '\n'; }

void wait_for_signal() {
  boost::asio::io_context io;
  boost::asio::signal_set signals(io, SIGINT, SIGTERM);
  signals.async_wait([](const boost::system::error_code&, int) {});
  io.run();
}

struct OrchestratorArgs {
  std::string config;
  std::optional<int> it_port, ot_port;
  std::optional<long long> timeout_ms, heartbeat_ms;
  std::optional<std::string> log_file;
};

int run_orchestrator(const OrchestratorArgs& a) {
  orch::OrchestratorConfig cfg;
  if (!a.config.empty()) cfg.apply(KeyValueConfig::load(a.config));
  if (a.it_port) cfg.it_port = static_cast<std::uint16_t>(*a.it_port);
  if (a.ot_port) cfg.ot_port = static_cast<std::uint16_t>(*a.ot_port);
  if (a.timeout_ms) cfg.timeout_ms = *a.timeout_ms;
  if (a.heartbeat_ms) cfg.heartbeat_ms = *a.heartbeat_ms;
  if (a.log_file) cfg.log_file = *a.log_file;

  std::unique_ptr<net::OrchestratorServer> server;
  try {
    server = std::make_unique<net::OrchestratorServer>(cfg, log_line);
  } catch (const std::system_error& e) {
    std::cerr << "cannot listen: " << e.what() << '\n';
    return 2;
  }
  std::cout << "orchestrator it=" << server->it_port() << " ot=" << server->ot_port() << std::endl;
  std::thread loop([&] { server->run(); });
  wait_for_signal();
  server->stop();
  loop.join();
  return 0;
}

struct CellArgs {
  std::string config;
  std::optional<std::string> orchestrator, cell_id, platform, fault;
  std::optional<double> time_scale;
};

int run_cell(const CellArgs& a) {
  KeyValueConfig file;
  if (!a.config.empty()) file = KeyValueConfig::load(a.config);
  auto pick = [&](const std::optional<std::string>& flag, const char* key, std::string dflt) {
    if (flag) return *flag;
    return file.get(key).value_or(std::move(dflt));
  };
  cell::CellConfig cfg;
  cfg.cell_id = pick(a.cell_id, "cell_id", "");
  if (cfg.cell_id.empty()) throw std::invalid_argument("--cell-id is required");
  cfg.platform = cell::PlatformModel::by_tag(pick(a.platform, "platform", "virtual"));
  cfg.platform.apply(file);
  cfg.geometry.apply(file);
  if (const auto problem = cfg.geometry.validate(); !problem.empty()) {
    throw std::invalid_argument("geometry: " + problem);
  }
  cfg.time_scale = a.time_scale ? *a.time_scale : file.get_double("time_scale").value_or(0.0);
  const auto endpoint = net::parse_endpoint(pick(a.orchestrator, "orchestrator", "127.0.0.1:4841"));
  const auto fault_text = pick(a.fault, "fault", "");

  net::CellClient client(cfg, endpoint, log_line);
  if (!fault_text.empty()) {
    auto faults = cell::FaultSpec::parse_list(fault_text);
    if (!faults) throw std::invalid_argument("--fault: " + faults.error().reason);
    for (const auto& f : faults.value()) client.sim().inject_fault(f);
  }
  client.start();
  wait_for_signal();
  client.stop();
  return 0;
}

struct AgentArgs {
  std::string endpoint = "127.0.0.1:4840";
  int depth = 3;
  std::string color = "any";
  std::string client_id = "agent";
  std::uint64_t seed = 1;
  std::string config;
};

int run_agent(const AgentArgs& a) {
  agents::EvalWeights weights;
  if (!a.config.empty()) weights.apply(KeyValueConfig::load(a.config));
  std::mt19937_64 rng(a.seed);
  agents::Chooser chooser;
  if (a.depth <= 0) {
    chooser = [&rng](const morris::GameState& s) { return agents::random_move(s, rng); };
  } else {
    chooser = [&a, weights](const morris::GameState& s) {
      return agents::choose_move(s, a.depth, weights).move;
    };
  }
  net::LineClient link(net::parse_endpoint(a.endpoint));
  agents::AgentSession session({a.client_id, a.color}, chooser);
  agents::agent_loop(link, session);
  std::cout << "seat " << session.seat().value_or("none") << " result " << session.result()
            << " moves " << session.submitted() << " busy-retries " << session.busy_retries()
            << '\n';
  return 0;
}

// Hot-seat player: one IT connection per colour, plus an admin link for reset.
class Player {
 public:
  explicit Player(net::Endpoint ep) : ep_(std::move(ep)) {}

  net::LineClient& seat(const std::string& color) {
    auto& slot = links_[color];
    if (!slot) slot = open(color == "admin" ? "admin" : "player", color);
    return *slot;
  }

  void show() const {
    if (!snapshot_) return;
    auto s = morris::decode_state(snapshot_->state);
    if (s) std::cout << morris::render_board(*s);
    std::cout << "status " << snapshot_->status << " ply " << snapshot_->ply << " to move "
              << snapshot_->to_move << '\n';
    for (const auto& [id, st] : snapshot_->cells) std::cout << "cell " << id << ' ' << st << '\n';
  }

  // Returns false when the move was rejected.
  bool submit(const std::string& move) {
    const std::string color = snapshot_ ? snapshot_->to_move : "white";
    auto& link = seat(color);
    link.send(proto::SubmitMove{move});
    while (auto env = next(link)) {
      if (const auto* r = env->as<proto::MoveRejected>()) {
        std::cout << "rejected " << move << ": " << r->reason << '\n';
        return false;
      }
      if (const auto* acc = env->as<proto::MoveAccepted>()) return finish(link, acc->pid);
    }
    throw std::runtime_error("no reply to " + move);
  }

  bool reset() {
    auto& link = seat("admin");
    link.send(proto::ResetGame{});
    while (auto env = next(link)) {
      if (const auto* pu = env->as<proto::ProcessUpdate>(); pu && pu->purpose == "reset") {
        if (pu->state == "rejected") {
          std::cout << "reset rejected: " << pu->reason.value_or("") << '\n';
          return false;
        }
        return finish(link, pu->pid);
      }
    }
    throw std::runtime_error("no reply to reset");
  }

 private:
  std::unique_ptr<net::LineClient> open(const std::string& role, const std::string& color) {
    auto link = std::make_unique<net::LineClient>(ep_);
    link->send(proto::Hello{"play-" + color, role});
    auto ack = link->expect<proto::HelloAck>(5s);
    if (!ack) throw std::runtime_error("no HelloAck");
    snapshot_ = ack->snapshot;
    if (role == "player") {
      link->send(proto::JoinGame{color, std::nullopt});
      auto join = link->expect<proto::JoinAck>(5s);
      if (!join || join->color != color) throw std::runtime_error("seat " + color + " is taken");
    }
    return link;
  }

  std::optional<proto::Envelope> next(net::LineClient& link) {
    auto env = link.receive(30s);
    if (env) {
      if (const auto* su = env->as<proto::StateUpdate>()) snapshot_ = su->snapshot;
      if (const auto* e = env->as<proto::ErrorBody>()) std::cout << "error " << e->code << '\n';
    }
    return env;
  }

  bool finish(net::LineClient& link, std::uint64_t pid) {
    while (auto env = next(link)) {
      const auto* pu = env->as<proto::ProcessUpdate>();
      if (!pu || pu->pid != pid) continue;
      if (pu->state != "completed" && pu->state != "failed") continue;
      std::cout << "process " << pid << ' ' << pu->state;
      if (pu->reason) std::cout << ' ' << *pu->reason;
      if (pu->no_cells) std::cout << " (no cells)";
      std::cout << '\n';
      // Cell status changes trail the process result; every link sees the same broadcasts.
      for (auto& [name, other] : links_) {
        while (auto more = other->receive(50ms)) {
          if (const auto* su = more->as<proto::StateUpdate>()) snapshot_ = su->snapshot;
        }
      }
      return true;
    }
    throw std::runtime_error("process " + std::to_string(pid) + " never finished");
  }

  net::Endpoint ep_;
  std::map<std::string, std::unique_ptr<net::LineClient>> links_;
  std::optional<proto::StateSnapshot> snapshot_;
};

int run_play(const std::string& endpoint, const std::string& script) {
  std::ifstream file;
  if (!script.empty()) {
    file.open(script);
    if (!file) throw std::runtime_error("cannot read " + script);
  }
  std::istream& in = script.empty() ? std::cin : file;
  Player player(net::parse_endpoint(endpoint));
  player.seat("white");
  player.seat("black");
  player.show();
  int rejected = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    line = line.substr(start, line.find_last_not_of(" \t\r") + 1 - start);
    if (line == "show") {
      player.show();
      continue;
    }
    const bool ok = line == "reset" ? player.reset() : player.submit(line);
    if (!ok) ++rejected;
    player.show();
  }
  return rejected == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nine Men's Morris process twin"};
  app.require_subcommand(1);

  OrchestratorArgs oa;
  auto* orch_cmd = app.add_subcommand("orchestrator", "Run the orchestrator");
  orch_cmd->add_option("--config", oa.config, "key = value file; flags take precedence");
  orch_cmd->add_option("--it-port", oa.it_port, "IT (player) port, default 4840")->check(CLI::Range(0, 65535));
  orch_cmd->add_option("--ot-port", oa.ot_port, "OT (cell) port, default 4841")->check(CLI::Range(0, 65535));
  orch_cmd->add_option("--timeout-ms", oa.timeout_ms, "cell confirmation timeout")->check(CLI::PositiveNumber);
  orch_cmd->add_option("--heartbeat-ms", oa.heartbeat_ms, "cell ping interval")->check(CLI::PositiveNumber);
  orch_cmd->add_option("--log-file", oa.log_file, "append-only event log, replayed on start");

  CellArgs ca;
  auto* cell_cmd = app.add_subcommand("cell", "Run a simulated robot cell");
  cell_cmd->add_option("--config", ca.config, "key = value file (geometry.*, platform.*, ...)");
  cell_cmd->add_option("--orchestrator", ca.orchestrator, "host:port of the OT port");
  cell_cmd->add_option("--cell-id", ca.cell_id, "[A-Za-z0-9_-]{1,32}");
  cell_cmd->add_option("--platform", ca.platform, "delta-plc | usb-arm | virtual");
  cell_cmd->add_option("--time-scale", ca.time_scale, "wall seconds per simulated second")->check(CLI::NonNegativeNumber);
  cell_cmd->add_option("--fault", ca.fault, "e.g. drop-every:10,delay:200");

  AgentArgs aa;
  auto* agent_cmd = app.add_subcommand("agent", "Play one game as an automated agent");
  agent_cmd->add_option("--endpoint", aa.endpoint, "host:port of the IT port");
  agent_cmd->add_option("--depth", aa.depth, "search depth; 0 plays uniformly at random");
  agent_cmd->add_option("--color", aa.color)->check(CLI::IsMember({"white", "black", "any"}));
  agent_cmd->add_option("--client-id", aa.client_id);
  agent_cmd->add_option("--seed", aa.seed, "random agent seed");
  agent_cmd->add_option("--config", aa.config, "eval.material, eval.mobility, eval.mills");

  std::string play_endpoint = "127.0.0.1:4840";
  std::string script;
  auto* play_cmd = app.add_subcommand("play", "Play both seats from a script (stdin by default)");
  play_cmd->add_option("--endpoint", play_endpoint, "host:port of the IT port");
  play_cmd->add_option("--script", script, "one move per line, or `reset` / `show`");

  int perft_depth = 4;
  auto* perft_cmd = app.add_subcommand("perft", "Count legal move sequences from the start");
  perft_cmd->add_option("--depth", perft_depth)->check(CLI::Range(0, 8));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*orch_cmd) return run_orchestrator(oa);
    if (*cell_cmd) return run_cell(ca);
    if (*agent_cmd) return run_agent(aa);
    if (*play_cmd) return run_play(play_endpoint, script);
    if (*perft_cmd) {
      for (int d = 0; d <= perft_depth; ++d) {
        std::cout << d << ' ' << morris::perft(morris::initial_state(), d) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "morris-twin: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
