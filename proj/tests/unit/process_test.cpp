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

#include <queue>
#include <set>

#include "twin/orch/process.hpp"

using namespace twin::orch;

namespace {

std::vector<ProcState> all_states() {
  std::vector<ProcState> out;
  for (std::size_t i = 0; i < kProcStateCount; ++i) out.push_back(static_cast<ProcState>(i));
  return out;
}

std::vector<ProcEvent> all_events() {
  std::vector<ProcEvent> out;
  for (std::size_t i = 0; i < kProcEventCount; ++i) out.push_back(static_cast<ProcEvent>(i));
  return out;
}

}  // namespace

TEST_CASE("every state/event pair is defined") {
  int pairs = 0;
  for (auto s : all_states()) {
    for (auto e : all_events()) {
      ++pairs;
      const Step st = step(s, e);
      INFO(to_string(s), " x ", to_string(e));
      CHECK(st.kind != Step::Kind::Undefined);
      if (st.kind == Step::Kind::Advance) {
        CHECK(is_legal_edge(s, st.next));
      } else {
        CHECK(st.next == s);
      }
    }
  }
  CHECK(pairs == 7 * 12);
}

TEST_CASE("terminal states absorb every event") {
  for (auto s : {ProcState::Rejected, ProcState::Completed, ProcState::Failed}) {
    CHECK(is_terminal(s));
    for (auto e : all_events()) CHECK(step(s, e).kind == Step::Kind::Ignore);
  }
}

TEST_CASE("reachable graph covers the lifecycle edges") {
  std::set<std::pair<ProcState, ProcState>> seen;
  std::set<ProcState> reached{ProcState::Received};
  std::queue<ProcState> work;
  work.push(ProcState::Received);
  while (!work.empty()) {
    const ProcState s = work.front();
    work.pop();
    for (auto e : all_events()) {
      const Step st = step(s, e);
      REQUIRE(st.kind != Step::Kind::Undefined);
      if (st.kind != Step::Kind::Advance) continue;
      seen.insert({s, st.next});
      if (reached.insert(st.next).second) work.push(st.next);
    }
  }
  CHECK(reached.size() == kProcStateCount);
  for (auto a : all_states()) {
    for (auto b : all_states()) {
      if (is_legal_edge(a, b)) CHECK_MESSAGE(seen.count({a, b}) == 1, to_string(a), "->", to_string(b));
    }
  }
}

TEST_CASE("describe carries the detail") {
  Process p;
  CHECK(p.describe() == "received");
  p.state = ProcState::Rejected;
  p.reason = "not-your-turn";
  CHECK(p.describe() == "rejected:not-your-turn");
  p.state = ProcState::Completed;
  p.reason.reset();
  p.no_cells = true;
  CHECK(p.describe() == "completed:no-cells");
}
