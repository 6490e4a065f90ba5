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

#include <random>
#include <string>

#include "twin/proto/envelope.hpp"

namespace testsupport {

class EnvelopeGenerator {
 public:
  explicit EnvelopeGenerator(std::uint64_t seed) : rng_(seed) {}

  twin::proto::Envelope next() {
    using namespace twin::proto;
    Envelope e;
    e.id = u64();
    if (coin()) e.re = u64();
    switch (std::uniform_int_distribution<int>(0, kMessageKindCount - 1)(rng_)) {
      case 0: e.body = Hello{text(), text()}; break;
      case 1: e.body = HelloAck{text(), snapshot()}; break;
      case 2: e.body = JoinGame{text(), opt_text()}; break;
      case 3: e.body = JoinAck{text(), text()}; break;
      case 4: e.body = SubmitMove{text()}; break;
      case 5: e.body = MoveAccepted{u64(), text(), text(), i64()}; break;
      case 6: e.body = MoveRejected{u64(), text()}; break;
      case 7: e.body = StateUpdate{snapshot()}; break;
      case 8: {
        ProcessUpdate p;
        p.pid = u64();
        p.state = text();
        p.purpose = text();
        p.move = opt_text();
        p.reason = opt_text();
        for (int i = small(); i > 0; --i) p.pending.push_back(text());
        p.no_cells = coin();
        p.resulting_state = opt_text();
        e.body = p;
        break;
      }
      case 9: e.body = RegisterCell{text(), text()}; break;
      case 10: e.body = RegisterAck{text()}; break;
      case 11:
        e.body = CellCommand{command(), u64(), opt_text(), opt_text(), opt_text()};
        break;
      case 12: e.body = CellAck{u64(), command()}; break;
      case 13:
        e.body = CellStateReport{text(), u64(), text(), text(), real(), text()};
        break;
      case 14: e.body = ErrorBody{text(), text()}; break;
      case 15: e.body = Ping{}; break;
      case 16: e.body = Pong{}; break;
      default: e.body = ResetGame{}; break;
    }
    return e;
  }

 private:
  bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng_) == 1; }
  int small() { return std::uniform_int_distribution<int>(0, 4)(rng_); }
  std::uint64_t u64() {
    switch (std::uniform_int_distribution<int>(0, 2)(rng_)) {
      case 0: return std::uniform_int_distribution<std::uint64_t>(0, 100)(rng_);
      case 1: return rng_();
      default: return std::uint64_t{1} << std::uniform_int_distribution<int>(0, 63)(rng_);
    }
  }
  std::int64_t i64() { return static_cast<std::int64_t>(rng_() >> 1) * (coin() ? 1 : -1); }
  double real() {
    return std::uniform_real_distribution<double>(-1e6, 1e6)(rng_);
  }
  std::string text() {
    static const char* pieces[] = {"a", "Z", "0", " ", "\n", "\t", "\"", "\\", "{", "}",
                                   "\xc3\xa9", "\xe2\x9c\x93", "P-d1", "|", "\x01", "/"};
    std::string s;
    for (int n = std::uniform_int_distribution<int>(0, 12)(rng_); n > 0; --n) {
      s += pieces[std::uniform_int_distribution<int>(0, 15)(rng_)];
    }
    return s;
  }
  std::optional<std::string> opt_text() {
    if (coin()) return std::nullopt;
    return text();
  }
  twin::proto::CommandType command() {
    return static_cast<twin::proto::CommandType>(std::uniform_int_distribution<int>(0, 2)(rng_));
  }
  twin::proto::StateSnapshot snapshot() {
    twin::proto::StateSnapshot s{text(), text(), text(), i64(), opt_text(), {}};
    for (int i = small(); i > 0; --i) s.cells[text()] = text();
    return s;
  }

  std::mt19937_64 rng_;
};

}  // namespace testsupport
