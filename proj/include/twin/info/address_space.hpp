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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "twin/util/result.hpp"

namespace twin::info {

/// `/`-separated path of `[a-z0-9_-]+` segments. The root path `/` has no
/// segments and is only meaningful as a subscription prefix.
class NodePath {
 public:
  NodePath() = default;
  static Result<NodePath> parse(std::string_view text);
  /// Throws std::invalid_argument on malformed text.
  static NodePath of(std::string_view text);

  const std::vector<std::string>& segments() const noexcept { return segments_; }
  bool is_root() const noexcept { return segments_.empty(); }
  bool has_prefix(const NodePath& prefix) const noexcept;
  std::string str() const;

  friend bool operator==(const NodePath&, const NodePath&) = default;
  friend auto operator<=>(const NodePath&, const NodePath&) = default;

 private:
  std::vector<std::string> segments_;
};

enum class ValueType : std::uint8_t { Text, Integer, Boolean, StateBlob, MoveBlob, Timestamp };

std::string_view to_string(ValueType t) noexcept;

struct StateBlob {
  std::string text;
  friend bool operator==(const StateBlob&, const StateBlob&) = default;
};
struct MoveBlob {
  std::string text;
  friend bool operator==(const MoveBlob&, const MoveBlob&) = default;
};
/// Milliseconds since the Unix epoch, UTC.
struct Timestamp {
  std::int64_t ms = 0;
  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

/// Alternative index equals the ValueType enumerator.
using NodeValue =
    std::variant<std::string, std::int64_t, bool, StateBlob, MoveBlob, Timestamp>;

inline ValueType type_of(const NodeValue& v) noexcept {
  return static_cast<ValueType>(v.index());
}

std::string display(const NodeValue& v);

enum class ErrorCode : std::uint8_t { DuplicatePath, BadType, UnknownPath, TypeMismatch, BadPath };

class InfoModelError : public std::runtime_error {
 public:
  InfoModelError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ChangeEvent {
  NodePath path;
  NodeValue value;
  std::uint64_t revision = 0;
  bool snapshot = false;  // current value at subscribe time, or a node's definition
};

using SubscriptionId = std::uint64_t;

/// Ordered event queue fed by the address space. Events for one path arrive
/// in revision order; there is no ordering guarantee across paths.
class Subscription {
 public:
  Subscription(SubscriptionId id, NodePath prefix)
      : id_(id), prefix_(std::move(prefix)) {}

  SubscriptionId id() const noexcept { return id_; }
  const NodePath& prefix() const noexcept { return prefix_; }

  std::optional<ChangeEvent> poll();
  std::optional<ChangeEvent> next(std::chrono::milliseconds timeout);
  std::vector<ChangeEvent> drain();
  bool closed() const;

 private:
  friend class AddressSpace;
  void push(ChangeEvent e);
  void close();

  SubscriptionId id_;
  NodePath prefix_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<ChangeEvent> queue_;
  bool closed_ = false;
};

/// Hierarchical, typed, revisioned node store shared between threads.
/// Reads run concurrently; writes are serialized and fan out change events
/// to every subscription whose prefix matches.
class AddressSpace {
 public:
  AddressSpace() = default;
  AddressSpace(const AddressSpace&) = delete;
  AddressSpace& operator=(const AddressSpace&) = delete;

  /// New node at revision 1. Throws DuplicatePath, or BadType when `initial`
  /// does not hold `type`.
  void define_node(const NodePath& path, ValueType type, NodeValue initial);

  /// Returns the new revision. Throws UnknownPath or TypeMismatch.
  std::uint64_t write_node(const NodePath& path, NodeValue value);

  /// Writes only when the value differs; returns the current revision.
  std::uint64_t write_if_changed(const NodePath& path, NodeValue value);

  std::pair<NodeValue, std::uint64_t> read_node(const NodePath& path) const;
  bool contains(const NodePath& path) const;
  std::size_t size() const;
  std::vector<NodePath> paths() const;

  /// The subscription starts with one snapshot event per matching node.
  std::shared_ptr<Subscription> subscribe(const NodePath& prefix);
  void unsubscribe(SubscriptionId id);

 private:
  struct Node {
    ValueType type;
    NodeValue value;
    std::uint64_t revision;
  };

  void publish(const NodePath& path, const Node& node, bool initial);

  mutable std::shared_mutex mu_;
  std::map<NodePath, Node> nodes_;
  std::map<SubscriptionId, std::shared_ptr<Subscription>> subscriptions_;
  SubscriptionId next_subscription_ = 1;
};

}  // namespace twin::info
