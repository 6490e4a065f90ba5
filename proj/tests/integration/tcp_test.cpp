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

#include <doctest.h>

#include <random>
#include <thread>

#include "support/live_twin.hpp"
#include "twin/agents/search.hpp"
#include "twin/morris/notation.hpp"
#include "twin/net/line_buffer.hpp"
#include "twin/proto/codec.hpp"

using namespace twin;
using namespace std::chrono_literals;

TEST_CASE("line buffer splits, joins and cuts oversized lines") {
  net::LineBuffer lb(8);
  CHECK(lb.feed("ab").empty());
  auto out = lb.feed("c\nde\n\nf");
  REQUIRE(out.size() == 3);
  CHECK(out[0] == "abc");
  CHECK(out[1] == "de");
  CHECK(out[2].empty());
  CHECK(lb.buffered() == 1);
  out = lb.feed("0123456789abcdef");
  CHECK(out.empty());
  out = lb.feed("ghij\nok\n");
  REQUIRE(out.size() == 2);
  CHECK(out[0] == "f01234567");  // limit + 1 bytes
  CHECK(out[1] == "ok");
}

TEST_CASE("oversized frame through the real limit decodes as oversized") {
  net::LineBuffer lb;
  auto out = lb.feed(std::string(proto::kMaxFrameBytes + 10, 'x') + "\n");
  REQUIRE(out.size() == 1);
  auto r = proto::decode_frame(out[0]);
  REQUIRE(!r);
  CHECK(r.error().failure == proto::DecodeFailure::Oversized);
}

TEST_CASE("endpoint parsing") {
  auto e = net::parse_endpoint("localhost:4841");
  CHECK(e.host == "localhost");
  CHECK(e.port == 4841);
  CHECK_THROWS_AS(net::parse_endpoint("localhost"), std::invalid_argument);
  CHECK_THROWS_AS(net::parse_endpoint("h:0"), std::invalid_argument);
  CHECK_THROWS_AS(net::parse_endpoint("h:70000"), std::invalid_argument);
  CHECK_THROWS_AS(net::parse_endpoint("h:12x"), std::invalid_argument);
}

TEST_CASE("binding a port in use fails") {
  test::LiveTwin twin;
  auto cfg = test::LiveTwin::quick_config();
  cfg.it_port = twin.it().port;
  CHECK_THROWS_AS(net::OrchestratorServer{cfg}, std::system_error);
}

TEST_CASE("moves over TCP reach both cells") {
  test::LiveTwin twin;
  twin.add_cell("c1", "delta-plc");
  twin.add_cell("c2", "usb-arm");
  REQUIRE(twin.settle(5s));
  auto [white, wseat] = test::join(twin.it(), "w", "white");
  auto [black, bseat] = test::join(twin.it(), "b", "black");
  CHECK(wseat.color == "white");
  CHECK(bseat.color == "black");

  for (const auto& [client, move] : {std::pair{white.get(), "P-d1"}, std::pair{black.get(), "P-a1"},
                                     std::pair{white.get(), "P-g7"}}) {
    client->send(proto::SubmitMove{move});
    auto acc = client->expect<proto::MoveAccepted>(5s);
    REQUIRE(acc);
    CHECK(acc->move == move);
    REQUIRE(twin.settle(5s));
  }
  const auto state = twin.read([](const orch::Orchestrator& o) { return o.state(); });
  CHECK(state.ply == 3);
  for (auto& [id, c] : twin.cells()) CHECK(c->sim().commands_executed() >= 3);
}

TEST_CASE("garbage on the wire gets an error and the connection survives") {
  test::LiveTwin twin;
  net::LineClient c(twin.it());
  c.send_raw("not json\n");
  auto err = c.expect<proto::ErrorBody>(5s);
  REQUIRE(err);
  CHECK(err->code == "bad-frame");
  c.send_raw(std::string(proto::kMaxFrameBytes + 100, 'y') + "\n");
  err = c.expect<proto::ErrorBody>(5s);
  REQUIRE(err);
  CHECK(err->code == "bad-frame");
  c.send(proto::Hello{"late", "spectator"});
  CHECK(c.expect<proto::HelloAck>(5s));
}

TEST_CASE("a dropped command over TCP times out and the cell is resynced") {
  test::LiveTwin twin;
  auto& c1 = twin.add_cell("c1", "virtual");
  REQUIRE(twin.settle(5s));
  auto [white, seat] = test::join(twin.it(), "w", "white");
  c1.sim().inject_fault({cell::FaultSpec::Kind::DropNext, 0});
  white->send(proto::SubmitMove{"P-d1"});
  REQUIRE(white->expect<proto::MoveAccepted>(5s));
  bool failed = false;
  while (auto pu = white->expect<proto::ProcessUpdate>(5s)) {
    if (pu->state == "failed") {
      CHECK(pu->reason == std::optional<std::string>("timed-out:c1"));
      failed = true;
      break;
    }
  }
  CHECK(failed);
  CHECK(twin.settle(5s));
}

TEST_CASE("a cell that disconnects comes back and catches up") {
  test::LiveTwin twin;
  auto& c1 = twin.add_cell("c1", "virtual");
  REQUIRE(twin.settle(5s));
  auto [white, seat] = test::join(twin.it(), "w", "white");
  c1.sim().inject_fault({cell::FaultSpec::Kind::Disconnect, 300});
  white->send(proto::SubmitMove{"P-d1"});
  REQUIRE(white->expect<proto::MoveAccepted>(5s));
  CHECK(test::wait_until([&] { return c1.registrations() >= 2; }, 5s));
  CHECK(twin.settle(5s));
}

TEST_CASE("agents play over TCP") {
  test::LiveTwin twin;
  twin.add_cell("c1", "virtual");
  REQUIRE(twin.settle(5s));
  std::mt19937_64 rng(5);
  net::LineClient lw(twin.it());
  net::LineClient lb(twin.it());
  agents::AgentSession sw({"w", "white"}, [](const morris::GameState& s) {
    return agents::choose_move(s, 1).move;
  });
  agents::AgentSession sb({"b", "black"}, [&](const morris::GameState& s) {
    return agents::random_move(s, rng);
  });
  std::thread tb([&] { agents::agent_loop(lb, sb, 20s); });
  agents::agent_loop(lw, sw, 20s);
  tb.join();
  CHECK(sw.finished());
  CHECK(sw.result() == sb.result());
  CHECK(twin.settle(5s));
}
