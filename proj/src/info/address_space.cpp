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

#include "twin/info/address_space.hpp"

#include <algorithm>

namespace twin::info {
namespace {

bool valid_segment(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

}  // namespace

Result<NodePath> NodePath::parse(std::string_view text) {
  if (text.empty() || text.front() != '/') return ParseError{0, "path must start with '/'"};
  NodePath out;
  if (text == "/") return out;
  std::size_t start = 1;
  while (true) {
    std::size_t end = text.find('/', start);
    std::string_view seg =
        text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!valid_segment(seg)) return ParseError{start, "invalid path segment"};
    out.segments_.emplace_back(seg);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

NodePath NodePath::of(std::string_view text) {
  auto parsed = parse(text);
  if (!parsed) throw std::invalid_argument("bad node path: " + std::string(text));
  return std::move(parsed).value();
}

bool NodePath::has_prefix(const NodePath& prefix) const noexcept {
  if (prefix.segments_.size() > segments_.size()) return false;
  return std::equal(prefix.segments_.begin(), prefix.segments_.end(), segments_.begin());
}

std::string NodePath::str() const {
  if (segments_.empty()) return "/";
  std::string out;
  for (const auto& s : segments_) {
    out += '/';
    out += s;
  }
  return out;
}

std::string_view to_string(ValueType t) noexcept {
  switch (t) {
    case ValueType::Text: return "text";
    case ValueType::Integer: return "integer";
    case ValueType::Boolean: return "boolean";
    case ValueType::StateBlob: return "state";
    case ValueType::MoveBlob: return "move";
    case ValueType::Timestamp: return "timestamp";
  }
  return "?";
}

std::string display(const NodeValue& v) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const StateBlob& s) const { return s.text; }
    std::string operator()(const MoveBlob& m) const { return m.text; }
    std::string operator()(const Timestamp& t) const { return std::to_string(t.ms); }
  };
  return std::visit(Visitor{}, v);
}

// Subscription

void Subscription::push(ChangeEvent e) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    queue_.push_back(std::move(e));
  }
  cv_.notify_one();
}

void Subscription::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool Subscription::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

std::optional<ChangeEvent> Subscription::poll() {
  std::lock_guard lock(mu_);
  if (queue_.empty()) return std::nullopt;
  ChangeEvent e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

std::optional<ChangeEvent> Subscription::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  ChangeEvent e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

std::vector<ChangeEvent> Subscription::drain() {
  std::lock_guard lock(mu_);
  std::vector<ChangeEvent> out(std::make_move_iterator(queue_.begin()),
                               std::make_move_iterator(queue_.end()));
  queue_.clear();
  return out;
}

// AddressSpace

void AddressSpace::define_node(const NodePath& path, ValueType type, NodeValue initial) {
  if (path.is_root()) throw InfoModelError(ErrorCode::BadPath, "cannot define the root path");
  if (type_of(initial) != type) {
    throw InfoModelError(ErrorCode::BadType, "initial value of " + path.str() +
                                                 " is not " + std::string(to_string(type)));
  }
  std::unique_lock lock(mu_);
  auto [it, inserted] = nodes_.try_emplace(path, Node{type, std::move(initial), 1});
  if (!inserted) throw InfoModelError(ErrorCode::DuplicatePath, "duplicate path " + path.str());
  publish(path, it->second, true);
}

std::uint64_t AddressSpace::write_node(const NodePath& path, NodeValue value) {
  std::unique_lock lock(mu_);
  auto it = nodes_.find(path);
  if (it == nodes_.end()) throw InfoModelError(ErrorCode::UnknownPath, "unknown path " + path.str());
  if (type_of(value) != it->second.type) {
    throw InfoModelError(ErrorCode::TypeMismatch,
                         path.str() + " holds " + std::string(to_string(it->second.type)));
  }
  it->second.value = std::move(value);
  ++it->second.revision;
  publish(path, it->second, false);
  return it->second.revision;
}

std::uint64_t AddressSpace::write_if_changed(const NodePath& path, NodeValue value) {
  {
    std::shared_lock lock(mu_);
    auto it = nodes_.find(path);
    if (it != nodes_.end() && it->second.value == value) return it->second.revision;
  }
  return write_node(path, std::move(value));
}

std::pair<NodeValue, std::uint64_t> AddressSpace::read_node(const NodePath& path) const {
  std::shared_lock lock(mu_);
  auto it = nodes_.find(path);
  if (it == nodes_.end()) throw InfoModelError(ErrorCode::UnknownPath, "unknown path " + path.str());
  return {it->second.value, it->second.revision};
}

bool AddressSpace::contains(const NodePath& path) const {
  std::shared_lock lock(mu_);
  return nodes_.count(path) != 0;
}

std::size_t AddressSpace::size() const {
  std::shared_lock lock(mu_);
  return nodes_.size();
}

std::vector<NodePath> AddressSpace::paths() const {
  std::shared_lock lock(mu_);
  std::vector<NodePath> out;
  out.reserve(nodes_.size());
  for (const auto& [path, node] : nodes_) out.push_back(path);
  return out;
}

std::shared_ptr<Subscription> AddressSpace::subscribe(const NodePath& prefix) {
  std::unique_lock lock(mu_);
  auto sub = std::make_shared<Subscription>(next_subscription_++, prefix);
  for (const auto& [path, node] : nodes_) {
    if (path.has_prefix(prefix)) sub->push(ChangeEvent{path, node.value, node.revision, true});
  }
  subscriptions_.emplace(sub->id(), sub);
  return sub;
}

void AddressSpace::unsubscribe(SubscriptionId id) {
  std::unique_lock lock(mu_);
  auto it = subscriptions_.find(id);
  if (it == subscriptions_.end()) return;
  it->second->close();
  subscriptions_.erase(it);
}

// Caller holds the exclusive lock, which keeps per-path delivery ordered.
void AddressSpace::publish(const NodePath& path, const Node& node, bool initial) {
  for (const auto& [id, sub] : subscriptions_) {
    if (path.has_prefix(sub->prefix())) {
      sub->push(ChangeEvent{path, node.value, node.revision, initial});
    }
  }
}

}  // namespace twin::info
