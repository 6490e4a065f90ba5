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

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "twin/util/result.hpp"

namespace twin {

/// `key = value` lines; `#` starts a comment, blank lines are skipped.
class KeyValueConfig {
 public:
  static Result<KeyValueConfig> parse(std::string_view text);
  /// Throws std::runtime_error when the file cannot be read or parsed.
  static KeyValueConfig load(const std::string& path);

  std::optional<std::string> get(const std::string& key) const;
  /// Throw std::runtime_error on a malformed value.
  std::optional<double> get_double(const std::string& key) const;
  std::optional<long long> get_int(const std::string& key) const;

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace twin
