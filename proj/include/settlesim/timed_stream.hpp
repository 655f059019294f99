// Copyright 2026 The Authors.
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

// Time-tagged streams. Every item on a stream is either a payload or a
// hiaton (an explicit "nothing this tick" marker); both carry a tag, so a
// reader can always tell how far a silent producer has progressed.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace settlesim {

// Discrete simulation time. Tick 0 is the simulation start.
struct TimeTag {
  std::uint64_t tick = 0;

  constexpr TimeTag() = default;
  constexpr explicit TimeTag(std::uint64_t t) : tick(t) {}

  friend constexpr auto operator<=>(TimeTag, TimeTag) = default;
};

// Opaque payload carried by streams and component state. JSON gives
// payloads a canonical serialization, which the trace digests rely on.
using Value = nlohmann::json;

struct Payload {
  TimeTag tag;
  Value value;

  friend bool operator==(const Payload&, const Payload&) = default;
};

struct Hiaton {
  TimeTag tag;

  friend bool operator==(const Hiaton&, const Hiaton&) = default;
};

class TimedItem {
 public:
  TimedItem(Payload p) : item_(std::move(p)) {}  // NOLINT(implicit)
  TimedItem(Hiaton h) : item_(h) {}              // NOLINT(implicit)

  static TimedItem payload(TimeTag t, Value v) {
    return TimedItem(Payload{t, std::move(v)});
  }

  TimeTag tag() const {
    return std::visit([](const auto& i) { return i.tag; }, item_);
  }
  bool is_hiaton() const { return std::holds_alternative<Hiaton>(item_); }
  bool is_payload() const { return !is_hiaton(); }

  // Throws std::logic_error on a hiaton.
  const Value& value() const;

  // Same item with a different tag.
  TimedItem retagged(TimeTag t) const;

  const std::variant<Payload, Hiaton>& variant() const { return item_; }

  friend bool operator==(const TimedItem&, const TimedItem&) = default;

 private:
  std::variant<Payload, Hiaton> item_;
};

// A finite stream. Tags must be non-decreasing along the sequence.
using TimedStream = std::vector<TimedItem>;

// Raised when a stream violates tag monotonicity.
class StreamOrderError : public std::invalid_argument {
 public:
  StreamOrderError(std::string which, std::size_t index);

  // "left"/"right" for merge inputs, "stream" otherwise.
  const std::string& which() const { return which_; }
  std::size_t index() const { return index_; }

 private:
  std::string which_;
  std::size_t index_;
};

TimedItem make_hiaton(TimeTag t);

// Index of the first item whose tag is smaller than its predecessor's.
std::optional<std::size_t> first_order_violation(std::span<const TimedItem> s);

// True when item k carries tag k for every k, i.e. exactly one item per
// tick starting at tick 0.
bool is_dense(std::span<const TimedItem> s);

// Stable time-ordered interleaving; on equal tags items from `a` come first.
TimedStream merge(std::span<const TimedItem> a, std::span<const TimedItem> b);

TimedStream strip_hiatons(std::span<const TimedItem> s);

std::size_t count_hiatons(std::span<const TimedItem> s);

// Adds `delay` ticks to every tag (channel latency).
TimedStream shift(std::span<const TimedItem> s, std::uint64_t delay);

}  // namespace settlesim
