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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "twin/proto/codec.hpp"

namespace twin::net {

/// Splits a byte stream into '\n'-terminated lines. A line longer than
/// `limit` is cut to limit + 1 bytes (so the codec reports it as oversized)
/// and the rest of it is skipped up to the next newline.
class LineBuffer {
 public:
  explicit LineBuffer(std::size_t limit = proto::kMaxFrameBytes) : limit_(limit) {}

  std::vector<std::string> feed(std::string_view bytes);
  std::size_t buffered() const noexcept { return current_.size(); }

 private:
  std::size_t limit_;
  std::string current_;
  bool skipping_ = false;
};

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

/// `host:port`; throws std::invalid_argument.
Endpoint parse_endpoint(std::string_view text);

}  // namespace twin::net
