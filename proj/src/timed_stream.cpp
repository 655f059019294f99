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

#include "settlesim/timed_stream.hpp"

#include <algorithm>

#include "settlesim/hash.hpp"

namespace settlesim {

std::string to_hex(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::uint64_t from_hex(std::string_view s) {
  if (s.empty() || s.size() > 16) {
    throw std::invalid_argument("bad hex digest: '" + std::string(s) + "'");
  }
  std::uint64_t v = 0;
  for (char c : s) {
    v <<= 4;
    if (c >= '0' && c <= '9') {
      v |= static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v |= static_cast<std::uint64_t>(c - 'a' + 10);
    } else {
      throw std::invalid_argument("bad hex digest: '" + std::string(s) + "'");
    }
  }
  return v;
}

const Value& TimedItem::value() const {
  if (const auto* p = std::get_if<Payload>(&item_)) return p->value;
  throw std::logic_error("hiaton has no payload value");
}

TimedItem TimedItem::retagged(TimeTag t) const {
  if (const auto* p = std::get_if<Payload>(&item_)) return Payload{t, p->value};
  return Hiaton{t};
}

StreamOrderError::StreamOrderError(std::string which, std::size_t index)
    : std::invalid_argument(which + " stream: tag decreases at index " +
                            std::to_string(index)),
      which_(std::move(which)),
      index_(index) {}

TimedItem make_hiaton(TimeTag t) { return Hiaton{t}; }

std::optional<std::size_t> first_order_violation(std::span<const TimedItem> s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].tag() < s[i - 1].tag()) return i;
  }
  return std::nullopt;
}

bool is_dense(std::span<const TimedItem> s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].tag().tick != i) return false;
  }
  return true;
}

TimedStream merge(std::span<const TimedItem> a, std::span<const TimedItem> b) {
  if (auto i = first_order_violation(a)) throw StreamOrderError("left", *i);
  if (auto i = first_order_violation(b)) throw StreamOrderError("right", *i);

  TimedStream out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    // Left wins ties.
    if (b[j].tag() < a[i].tag()) {
      out.push_back(b[j++]);
    } else {
      out.push_back(a[i++]);
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return out;
}

TimedStream strip_hiatons(std::span<const TimedItem> s) {
  TimedStream out;
  std::copy_if(s.begin(), s.end(), std::back_inserter(out),
               [](const TimedItem& it) { return it.is_payload(); });
  return out;
}

std::size_t count_hiatons(std::span<const TimedItem> s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](const TimedItem& it) { return it.is_hiaton(); }));
}

TimedStream shift(std::span<const TimedItem> s, std::uint64_t delay) {
  TimedStream out;
  out.reserve(s.size());
  for (const auto& it : s) out.push_back(it.retagged(TimeTag{it.tag().tick + delay}));
  return out;
}

}  // namespace settlesim
