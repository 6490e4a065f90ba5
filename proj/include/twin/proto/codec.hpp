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
#include <optional>
#include <string>
#include <string_view>

#include "twin/proto/envelope.hpp"
#include "twin/util/result.hpp"

namespace twin::proto {

/// Longest accepted frame, excluding the terminating newline.
inline constexpr std::size_t kMaxFrameBytes = 64 * 1024;

enum class DecodeFailure : std::uint8_t { Malformed, Schema, Oversized, UnknownKind };

struct DecodeError {
  std::size_t offset = 0;
  DecodeFailure failure = DecodeFailure::Malformed;
  std::string reason;
  std::optional<std::uint64_t> id;  // set when the frame's id could be read
};

/// One JSON object followed by a single '\n'. Never throws for a valid
/// Envelope; invalid UTF-8 in text fields is replaced.
std::string encode(const Envelope& e);

/// Accepts a frame with or without its trailing "\n" (or "\r\n"). Unknown
/// object members are ignored. Never throws.
Result<Envelope, DecodeError> decode_frame(std::string_view line);

/// Per-connection receive check: ids must strictly increase.
class MsgIdGuard {
 public:
  bool accept(std::uint64_t id) noexcept {
    if (last_ && id <= *last_) return false;
    last_ = id;
    return true;
  }
  void reset() noexcept { last_.reset(); }

 private:
  std::optional<std::uint64_t> last_;
};

}  // namespace twin::proto
