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

// Seeded statistical workloads: element populations with cross-references
// and constraints for batch mode, and Bernoulli event streams for
// real-time mode. Everything is a function of the seed alone.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "settlesim/partition.hpp"
#include "settlesim/timed_stream.hpp"

namespace settlesim {

// splitmix64. One step:
//   state += 0x9e3779b97f4a7c15
//   z = state
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//   output z ^ (z >> 31)
// All arithmetic is modulo 2^64.
struct RngState {
  std::uint64_t state = 0;
  friend bool operator==(RngState, RngState) = default;
};

std::pair<RngState, std::uint64_t> next_random(RngState s);

// Probability num/den with 0 <= num <= den, den > 0.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double as_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  friend bool operator==(Rational, Rational) = default;
};

// Nearest fraction with denominator 10^6; throws outside [0, 1].
Rational rational_from_double(double p);

// Convenience wrapper over next_random for sequential draws.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_{seed} {}

  std::uint64_t next() {
    auto [s, v] = next_random(state_);
    state_ = s;
    return v;
  }

  // Uniform in [0, bound), bound > 0. Multiply-shift with rejection, so
  // the result is exactly uniform.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  // True with probability exactly p.num / p.den (up to 2^-64).
  bool bernoulli(Rational p);

  // floor(mean) plus a Bernoulli draw of the fractional part, so the
  // expectation is exactly `mean` (mean in millionths).
  std::uint64_t count_with_mean(double mean);

  RngState state() const { return state_; }

 private:
  RngState state_;
};

struct GroupSpec {
  RuleKind rule = ValuePriority{};
  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

struct CapacitySpec {
  std::string resource;
  std::int64_t usage_min = 0;
  std::int64_t usage_max = 0;
  std::int64_t bound = 0;
  friend bool operator==(const CapacitySpec&, const CapacitySpec&) = default;
};

struct WorkloadParams {
  std::uint64_t seed = 0;
  Rational event_frequency{1, 4};
  std::size_t element_count = 0;
  std::int64_t value_min = 1;
  std::int64_t value_max = 100;
  double ref_density = 0.0;         // expected refs per element
  std::size_t queue_count = 1;
  // Queue q joins group q % groups.size(). Empty means one value-priority
  // group holding every queue.
  std::vector<GroupSpec> groups;
  double requires_density = 0.0;    // expected Requires per element
  double excludes_density = 0.0;    // expected Excludes per element
  double precedence_density = 0.0;  // expected in-queue precedence pairs per element
  double queue_precedence_probability = 0.0;  // per ordered queue pair i < j
  std::vector<CapacitySpec> capacities;

  friend bool operator==(const WorkloadParams&, const WorkloadParams&) = default;
};

// Empty when the parameters are usable; otherwise one message per problem.
std::vector<std::string> check_params(const WorkloadParams& p);

// Elements 1..element_count, each in a uniformly drawn queue, with values
// uniform in [value_min, value_max] and refs to distinct other elements
// (cross-queue refs allowed). The result passes validate_system. Throws
// std::invalid_argument for invalid parameters.
BatchInstance gen_elements(const WorkloadParams& p);

// One item per tick for ticks 0..t_end: a payload {"event": k} (k counting
// payloads from 0) with probability event_frequency, otherwise a hiaton.
// `stream_index` selects an independent stream for the same seed.
TimedStream gen_event_stream(const WorkloadParams& p, std::uint64_t t_end,
                             std::uint64_t stream_index = 0);

// Replaces the k-th payload of `stream` with the k-th element (JSON
// encoded); payloads beyond the last element become hiatons.
TimedStream attach_elements(const TimedStream& stream, std::span<const Element> elements);

}  // namespace settlesim
