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

#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>

#include "twin/cell/cell.hpp"
#include "twin/net/line_buffer.hpp"

namespace twin::net {

/// A CellSim attached to the orchestrator's OT port. One I/O thread and one
/// executor thread; commands run strictly in arrival order. Reconnects on
/// its own after a lost connection or a disconnect fault.
class CellClient {
 public:
  using Logger = std::function<void(std::string_view)>;

  CellClient(cell::CellConfig config, Endpoint orchestrator, Logger log = {});
  ~CellClient();
  CellClient(const CellClient&) = delete;
  CellClient& operator=(const CellClient&) = delete;

  void start();
  /// Idempotent; joins both threads.
  void stop();

  cell::CellSim& sim();
  bool connected() const;
  std::uint64_t registrations() const;
  std::uint64_t reports_sent() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace twin::net
