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

// End-to-end acceptance checks. One PASS/FAIL line per check; exit status 1
// when any check fails.

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracle/reference_rules.hpp"
#include "support/agent_match.hpp"
#include "support/live_twin.hpp"
#include "support/playout.hpp"
#include "support/random_envelope.hpp"
#include "support/sim_network.hpp"
#include "twin/agents/search.hpp"
#include "twin/morris/notation.hpp"
#include "twin/proto/codec.hpp"

#ifndef MORRIS_TWIN_BIN
#error "MORRIS_TWIN_BIN must point at the morris-twin executable"
#endif

extern char** environ;

using namespace twin;
using namespace std::chrono_literals;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 2) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << v;
  return o.str();
}

std::string state_digest_of(const std::string& state_text) {
  auto s = morris::decode_state(state_text);
  if (!s) throw std::runtime_error("undecodable state " + state_text);
  return morris::digest_hex(morris::state_digest(*s));
}

// Perft against the independent enumerator, computed live at every depth.
Outcome perft_equivalence() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = morris::perft(morris::initial_state(), 1) == 24;
  for (int d = 1; d <= 4; ++d) {
    const auto mine = morris::perft(morris::initial_state(), d);
    const auto ref = oracle::perft(oracle::State{}, d);
    ok &= mine == ref;
    detail += "d" + std::to_string(d) + "=" + std::to_string(mine) + (mine == ref ? " " : "!=" + std::to_string(ref) + " ");
  }
  const double secs = seconds_since(t0);
  ok &= secs < 60.0;
  return {ok, detail + fmt(secs) + "s"};
}

// Random (state, move) pairs: membership in legal_moves iff validate_move is Ok.
Outcome generator_predicate_fuzz() {
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<int> point(0, 23), kind(0, 2), coin(0, 3);
  constexpr int kPairs = 100000;
  int pairs = 0, legal_hits = 0, discrepancies = 0;
  while (pairs < kPairs) {
    for (const auto& s : testsupport::random_playout(rng, 200)) {
      if (pairs >= kPairs) break;
      const auto legal = morris::legal_moves(s);
      std::set<std::string> legal_text;
      for (const auto& m : legal) legal_text.insert(morris::encode_move(m));
      for (int k = 0; k < 10 && pairs < kPairs; ++k, ++pairs) {
        morris::Move m;
        if (!legal.empty() && coin(rng) == 0) {
          m = legal[rng() % legal.size()];
        } else {
          m.kind = static_cast<morris::MoveKind>(kind(rng));
          if (coin(rng) != 0) m.from = morris::Point::from_index(point(rng));
          m.to = *morris::Point::from_index(point(rng));
          if (coin(rng) == 0) m.remove = morris::Point::from_index(point(rng));
        }
        const bool member = legal_text.count(morris::encode_move(m)) == 1;
        legal_hits += member;
        discrepancies += member != morris::validate_move(s, m).ok();
      }
    }
  }
  return {discrepancies == 0 && pairs == kPairs,
          std::to_string(pairs) + " pairs, " + std::to_string(legal_hits) + " legal, " +
              std::to_string(discrepancies) + " discrepancies"};
}

// A fixed game of at least `plies` moves, from the first seed whose random line lasts that long.
std::vector<std::string> scripted_game(int plies) {
  for (std::uint64_t seed = 1;; ++seed) {
    std::mt19937_64 rng(seed);
    auto s = morris::initial_state();
    std::vector<std::string> moves;
    while (static_cast<int>(moves.size()) < plies && morris::game_status(s).ongoing()) {
      const auto m = agents::random_move(s, rng);
      moves.push_back(morris::encode_move(m));
      s = morris::apply_legal_move(s, m);
    }
    if (static_cast<int>(moves.size()) == plies && morris::game_status(s).ongoing()) return moves;
  }
}

// Waits on `link` for the terminal ProcessUpdate of `pid`.
std::optional<proto::ProcessUpdate> await_process(net::LineClient& link, std::uint64_t pid) {
  while (auto pu = link.expect<proto::ProcessUpdate>(10s)) {
    if (pu->pid == pid && (pu->state == "completed" || pu->state == "failed")) return pu;
  }
  return std::nullopt;
}

Outcome replication_convergence() {
  const auto t0 = Clock::now();
  auto cfg = test::LiveTwin::quick_config();
  cfg.timeout_ms = 300;
  cfg.heartbeat_ms = 250;
  test::LiveTwin twin(cfg);
  const std::vector<std::string> ids{"delta", "arm", "virt"};
  twin.add_cell(ids[0], "delta-plc");
  twin.add_cell(ids[1], "usb-arm");
  twin.add_cell(ids[2], "virtual");
  if (!twin.settle(5s)) return {false, "cells never came online"};
  auto [white, ws] = test::join(twin.it(), "white", "white");
  auto [black, bs] = test::join(twin.it(), "black", "black");

  const auto script = scripted_game(60);
  int corrupts = 0, drops = 0, timeouts = 0;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto round = static_cast<int>(i / 10);
    if (i % 10 == 3) {
      twin.cell(ids[round % 3]).sim().inject_fault({cell::FaultSpec::Kind::CorruptNext, 0});
      ++corrupts;
    }
    if (i % 10 == 7) {
      twin.cell(ids[(round + 1) % 3]).sim().inject_fault({cell::FaultSpec::Kind::DropNext, 0});
      ++drops;
    }
    auto& link = i % 2 == 0 ? *white : *black;
    link.send(proto::SubmitMove{script[i]});
    auto acc = link.expect<proto::MoveAccepted>(10s);
    if (!acc) return {false, "move " + std::to_string(i) + " " + script[i] + " not accepted"};
    auto done = await_process(link, acc->pid);
    if (!done) return {false, "process " + std::to_string(acc->pid) + " never finished"};
    timeouts += done->state == "failed";
  }
  const bool settled = twin.settle(10s);
  const auto authority = twin.digest();
  int matching = 0;
  for (auto& [id, c] : twin.cells()) matching += c->sim().digest() == authority;
  const int diverged = twin.read([](const orch::Orchestrator& o) {
    int n = 0;
    for (auto pid : o.pids()) {
      const auto* p = o.process(pid);
      for (const auto& [cell, count] : p->divergences) n += count;
    }
    return n;
  });
  const double secs = seconds_since(t0);
  const bool ok = settled && matching == 3 && secs < 30.0 && diverged >= corrupts && timeouts == drops;
  return {ok, std::to_string(script.size()) + " moves, " + std::to_string(corrupts) + " corruptions (" +
                  std::to_string(diverged) + " divergences seen), " + std::to_string(drops) +
                  " drops (" + std::to_string(timeouts) + " timeouts), " + std::to_string(matching) +
                  "/3 cells at " + authority + ", " + fmt(secs) + "s"};
}

Outcome process_machine_soundness() {
  using orch::ProcEvent;
  using orch::ProcState;
  int undefined = 0, bad_edges = 0, leaks = 0;
  for (std::size_t s = 0; s < orch::kProcStateCount; ++s) {
    for (std::size_t e = 0; e < orch::kProcEventCount; ++e) {
      const auto st = static_cast<ProcState>(s);
      const auto step = orch::step(st, static_cast<ProcEvent>(e));
      undefined += step.kind == orch::Step::Kind::Undefined;
      if (step.kind == orch::Step::Kind::Advance) bad_edges += !orch::is_legal_edge(st, step.next);
      if (orch::is_terminal(st)) leaks += step.kind != orch::Step::Kind::Ignore;
    }
  }

  // Late reports reaching finished processes on a live orchestrator must be logged and dropped.
  std::vector<std::string> log;
  info::AddressSpace space;
  orch::Millis now = 1000;
  orch::OrchestratorConfig cfg;
  cfg.timeout_ms = 100;
  orch::Orchestrator o(cfg, space, [&] { return now; }, [&](std::string_view l) { log.emplace_back(l); });
  const orch::ConnId it = 1, ot = 2;
  std::uint64_t it_id = 0, ot_id = 0;
  auto send = [&](orch::ConnId c, std::uint64_t& id, proto::Body b) {
    o.handle(c, proto::Envelope{++id, std::nullopt, std::move(b)});
    return o.take_outbox();
  };
  o.on_connect(it, orch::Side::IT);
  o.on_connect(ot, orch::Side::OT);
  send(ot, ot_id, proto::RegisterCell{"late", "virtual"});
  send(it, it_id, proto::Hello{"w", "player"});
  send(it, it_id, proto::JoinGame{"white", std::nullopt});
  send(it, it_id, proto::SubmitMove{"P-d1"});
  const auto completed = *o.in_flight();
  send(ot, ot_id, proto::CellStateReport{"late", completed, o.digest(), "", 0.0, "applied"});
  now += 10;
  send(it, it_id, proto::Hello{"b", "player"});
  o.on_connect(3, orch::Side::IT);
  std::uint64_t b_id = 0;
  send(3, b_id, proto::Hello{"b", "player"});
  send(3, b_id, proto::JoinGame{"black", std::nullopt});
  send(3, b_id, proto::SubmitMove{"P-a1"});
  const auto failed = *o.in_flight();
  now += 200;
  o.tick();
  o.take_outbox();
  const bool terminal = o.process(completed)->state == ProcState::Completed &&
                        o.process(failed)->state == ProcState::Failed;
  const auto before = o.ignored_events();
  const auto logged_before = log.size();
  send(ot, ot_id, proto::CellStateReport{"late", completed, o.digest(), "", 0.0, "applied"});
  send(ot, ot_id, proto::CellStateReport{"late", failed, "0000000000000000", "", 0.0, "applied"});
  send(ot, ot_id, proto::CellStateReport{"late", failed, o.digest(), "", 0.0, "applied"});
  const auto ignored = o.ignored_events() - before;
  std::size_t ignore_lines = 0;
  for (auto i = logged_before; i < log.size(); ++i) ignore_lines += log[i].find("ignored") != std::string::npos;
  const bool still = o.process(completed)->state == ProcState::Completed &&
                     o.process(failed)->state == ProcState::Failed;

  const bool ok = undefined == 0 && bad_edges == 0 && leaks == 0 && terminal && still &&
                  ignored == 3 && ignore_lines == 3;
  return {ok, std::to_string(orch::kProcStateCount * orch::kProcEventCount) + " pairs, " +
                  std::to_string(undefined) + " undefined, " + std::to_string(bad_edges) +
                  " off-lifecycle edges, " + std::to_string(leaks) + " terminal exits, " +
                  std::to_string(ignored) + "/3 late events ignored and " + std::to_string(ignore_lines) +
                  " logged"};
}

std::uint16_t free_port() {
  boost::asio::io_context io;
  boost::asio::ip::tcp::acceptor acc(io, {boost::asio::ip::tcp::v4(), 0});
  return acc.local_endpoint().port();
}

class Child {
 public:
  explicit Child(std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, 1, "/dev/null", O_WRONLY, 0);
    posix_spawn_file_actions_addopen(&actions, 2, "/dev/null", O_WRONLY, 0);
    const int rc = posix_spawn(&pid_, argv[0], &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw std::runtime_error("cannot start " + args[0]);
  }
  ~Child() { kill(SIGKILL); }
  void kill(int sig) {
    if (pid_ <= 0) return;
    ::kill(pid_, sig);
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }

 private:
  pid_t pid_ = -1;
};

std::unique_ptr<net::LineClient> connect_retry(const net::Endpoint& ep, std::chrono::milliseconds limit) {
  const auto until = Clock::now() + limit;
  while (true) {
    try {
      return std::make_unique<net::LineClient>(ep);
    } catch (const std::exception&) {
      if (Clock::now() > until) throw;
      std::this_thread::sleep_for(5ms);
    }
  }
}

Outcome crash_recovery() {
  const auto dir = std::filesystem::temp_directory_path() / ("morris-accept-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto log_file = (dir / "events.log").string();
  std::filesystem::remove(log_file);
  const auto it_port = free_port(), ot_port = free_port();
  constexpr int kHeartbeatMs = 500, kTimeoutMs = 1500;
  auto spawn = [&] {
    return std::make_unique<Child>(std::vector<std::string>{
        MORRIS_TWIN_BIN, "orchestrator", "--it-port", std::to_string(it_port), "--ot-port",
        std::to_string(ot_port), "--log-file", log_file, "--heartbeat-ms", std::to_string(kHeartbeatMs),
        "--timeout-ms", std::to_string(kTimeoutMs)});
  };
  const net::Endpoint it{"127.0.0.1", it_port}, ot{"127.0.0.1", ot_port};

  auto orchestrator = spawn();
  connect_retry(it, 5s);
  std::vector<std::unique_ptr<net::CellClient>> cells;
  for (const auto& [id, platform] : {std::pair{"r1", "delta-plc"}, std::pair{"r2", "usb-arm"},
                                     std::pair{"r3", "virtual"}}) {
    cell::CellConfig cfg;
    cfg.cell_id = id;
    cfg.platform = cell::PlatformModel::by_tag(platform);
    cells.push_back(std::make_unique<net::CellClient>(cfg, ot));
    cells.back()->start();
  }
  auto [white, ws] = test::join(it, "white", "white");
  auto [black, bs] = test::join(it, "black", "black");
  const auto script = scripted_game(21);
  std::string pre_kill_state;
  for (std::size_t i = 0; i < script.size(); ++i) {
    auto& link = i % 2 == 0 ? *white : *black;
    const bool last = i + 1 == script.size();
    // The final move is still being executed by a slow cell when the orchestrator dies.
    if (last) cells[1]->sim().inject_fault({cell::FaultSpec::Kind::Delay, 200});
    link.send(proto::SubmitMove{script[i]});
    auto acc = link.expect<proto::MoveAccepted>(10s);
    if (!acc) return {false, "move " + script[i] + " not accepted before the kill"};
    pre_kill_state = acc->state;
    if (!last && !await_process(link, acc->pid)) return {false, "process stalled before the kill"};
  }
  const auto pre_kill = state_digest_of(pre_kill_state);
  orchestrator->kill(SIGKILL);
  white.reset();
  black.reset();

  const auto restart = Clock::now();
  orchestrator = spawn();
  auto watcher = connect_retry(it, 5s);
  watcher->send(proto::Hello{"watch", "spectator"});
  auto hello = watcher->expect<proto::HelloAck>(5s);
  if (!hello) return {false, "no HelloAck after restart"};
  const auto recovered = state_digest_of(hello->snapshot.state);
  auto all_synced = [&](const proto::StateSnapshot& s) {
    if (s.cells.size() != cells.size()) return false;
    for (const auto& [id, st] : s.cells) {
      if (st != "synced") return false;
    }
    for (const auto& c : cells) {
      if (c->sim().digest() != pre_kill) return false;
    }
    return true;
  };
  bool synced = all_synced(hello->snapshot);
  const auto budget = std::chrono::milliseconds(kHeartbeatMs + kTimeoutMs);
  while (!synced && Clock::now() - restart < budget) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(budget - (Clock::now() - restart));
    auto su = watcher->expect<proto::StateUpdate>(std::max(left, 1ms));
    if (!su) break;
    synced = all_synced(su->snapshot);
  }
  const double resync_ms = seconds_since(restart) * 1000.0;
  for (auto& c : cells) c->stop();
  orchestrator->kill(SIGKILL);
  std::filesystem::remove_all(dir);
  const bool ok = recovered == pre_kill && synced;
  return {ok, "digest " + pre_kill + (recovered == pre_kill ? " == " : " != ") + recovered +
                  ", 3 cells " + (synced ? "resynced" : "not resynced") + " in " + fmt(resync_ms, 0) +
                  " ms (limit " + std::to_string(budget.count()) + " ms)"};
}

Outcome degenerate_fanout() {
  test::LiveTwin twin;
  std::mt19937_64 rng(9);
  net::LineClient lw(twin.it()), lb(twin.it());
  agents::AgentSession sw({"w", "white"}, [&](const morris::GameState& s) { return agents::random_move(s, rng); });
  agents::AgentSession sb({"b", "black"}, [](const morris::GameState& s) { return agents::choose_move(s, 1).move; });
  std::thread tb([&] { agents::agent_loop(lb, sb, 20s); });
  agents::agent_loop(lw, sw, 20s);
  tb.join();
  const auto [moves, completed_no_cells, plies] = twin.read([](const orch::Orchestrator& o) {
    int moves = 0, good = 0;
    for (auto pid : o.pids()) {
      const auto* p = o.process(pid);
      if (p->purpose != orch::Purpose::Move) continue;
      ++moves;
      good += p->state == orch::ProcState::Completed && p->no_cells;
    }
    return std::tuple{moves, good, o.state().ply};
  });
  const bool ok = sw.finished() && sw.result() != "ongoing" && moves == plies && completed_no_cells == moves;
  return {ok, sw.result() + " after " + std::to_string(plies) + " plies, " + std::to_string(completed_no_cells) +
                  "/" + std::to_string(moves) + " processes completed with no_cells"};
}

Outcome agent_sanity() {
  constexpr int kGames = 200;
  double score = 0.0;
  int wins = 0, draws = 0, losses = 0, illegal = 0;
  std::size_t submitted = 0;
  for (int g = 0; g < kGames; ++g) {
    test::SimNetwork net;
    net.add_cell("c1", "virtual");
    net.settle(500);
    std::mt19937_64 rng(1000 + g);
    agents::Chooser smart = [](const morris::GameState& s) { return agents::choose_move(s, 3).move; };
    agents::Chooser random = [&rng](const morris::GameState& s) { return agents::random_move(s, rng); };
    const bool smart_white = g % 2 == 0;
    try {
      auto r = smart_white ? test::play_match(net, smart, random) : test::play_match(net, random, smart);
      submitted += r.submitted;
      illegal += static_cast<int>(r.rejected - r.busy_retries);
      const std::string mine = smart_white ? "won:white" : "won:black";
      if (r.status.rfind(mine, 0) == 0) {
        ++wins;
        score += 1.0;
      } else if (r.status.rfind("draw", 0) == 0) {
        ++draws;
        score += 0.5;
      } else {
        ++losses;
      }
    } catch (const agents::AgentError&) {
      ++illegal;
      ++losses;
    }
  }
  const double pct = 100.0 * score / kGames;
  return {pct >= 95.0 && illegal == 0,
          std::to_string(wins) + "W " + std::to_string(draws) + "D " + std::to_string(losses) + "L, score " +
              fmt(pct, 1) + "%, " + std::to_string(illegal) + " illegal of " + std::to_string(submitted) +
              " submissions"};
}

Outcome protocol_robustness() {
  std::mt19937_64 rng(606);
  testsupport::EnvelopeGenerator gen(707);
  constexpr int kLines = 1000000, kRoundTrips = 10000;
  int crashes = 0, accepted = 0, bad_offsets = 0;
  for (int i = 0; i < kLines; ++i) {
    std::string line;
    if (i % 2 == 0) {
      for (int n = std::uniform_int_distribution<int>(0, 120)(rng); n > 0; --n) {
        line += static_cast<char>(rng() & 0xff);
      }
    } else {
      line = proto::encode(gen.next());
      for (int n = std::uniform_int_distribution<int>(1, 4)(rng); n > 0; --n) {
        line[rng() % line.size()] = static_cast<char>(rng() & 0xff);
      }
    }
    try {
      auto r = proto::decode_frame(line);
      accepted += r.ok();
      if (!r.ok()) bad_offsets += r.error().offset > line.size();
    } catch (...) {
      ++crashes;
    }
  }
  int mismatches = 0;
  for (int i = 0; i < kRoundTrips; ++i) {
    const auto e = gen.next();
    auto back = proto::decode_frame(proto::encode(e));
    mismatches += !back.ok() || back.value() != e;
  }
  return {crashes == 0 && bad_offsets == 0 && mismatches == 0,
          std::to_string(kLines) + " fuzz lines, " + std::to_string(crashes) + " crashes, " +
              std::to_string(accepted) + " accepted; " + std::to_string(kRoundTrips) + " round-trips, " +
              std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"rules-oracle-equivalence", perft_equivalence},
      {"generator-predicate-fuzz", generator_predicate_fuzz},
      {"replication-convergence", replication_convergence},
      {"process-machine-soundness", process_machine_soundness},
      {"crash-recovery", crash_recovery},
      {"degenerate-fan-out", degenerate_fanout},
      {"agent-sanity", agent_sanity},
      {"protocol-robustness", protocol_robustness},
  };
  int failed = 0;
  for (const auto& [name, run] : checks) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << fmt(seconds_since(t0))
              << "s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
