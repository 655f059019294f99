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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace settlesim {

// 64-bit FNV-1a. Used for payload digests, scenario hashes and file hashes;
// the constants are fixed so digests are identical on every platform.
class Fnv1a {
 public:
  static constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

  constexpr Fnv1a() = default;
  constexpr explicit Fnv1a(std::uint64_t state) : state_(state) {}

  constexpr Fnv1a& update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= kPrime;
    }
    return *this;
  }

  // Little-endian, fixed width.
  constexpr Fnv1a& update_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= static_cast<unsigned char>(v >> (8 * i));
      state_ *= kPrime;
    }
    return *this;
  }

  constexpr std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = kOffsetBasis;
};

constexpr std::uint64_t fnv1a(std::string_view bytes) {
  return Fnv1a().update(bytes).value();
}

// Lowercase, zero-padded 16-digit hex.
std::string to_hex(std::uint64_t v);
// Inverse of to_hex; throws std::invalid_argument on malformed input.
std::uint64_t from_hex(std::string_view s);

}  // namespace settlesim
