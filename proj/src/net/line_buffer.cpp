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

#include "twin/net/line_buffer.hpp"

#include <charconv>
#include <stdexcept>

namespace twin::net {

std::vector<std::string> LineBuffer::feed(std::string_view bytes) {
  std::vector<std::string> out;
  while (!bytes.empty()) {
    const std::size_t nl = bytes.find('\n');
    const std::string_view chunk = bytes.substr(0, nl);
    if (!skipping_) {
      const std::size_t room = limit_ + 1 - current_.size();
      current_.append(chunk.substr(0, room));
      if (chunk.size() > room) skipping_ = true;
      if (current_.size() > limit_) skipping_ = true;
    }
    if (nl == std::string_view::npos) break;
    out.push_back(std::move(current_));
    current_.clear();
    skipping_ = false;
    bytes.remove_prefix(nl + 1);
  }
  return out;
}

Endpoint parse_endpoint(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw std::invalid_argument("expected host:port, got '" + std::string(text) + "'");
  }
  Endpoint e;
  e.host = std::string(text.substr(0, colon));
  const auto digits = text.substr(colon + 1);
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || value == 0 || value > 65535) {
    throw std::invalid_argument("bad port in '" + std::string(text) + "'");
  }
  e.port = static_cast<std::uint16_t>(value);
  return e;
}

}  // namespace twin::net
