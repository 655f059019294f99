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

#include "settlesim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "settlesim/instance_json.hpp"

namespace settlesim {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::pair<RngState, std::uint64_t> next_random(RngState s) {
  const std::uint64_t state = s.state + 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return {RngState{state}, z ^ (z >> 31)};
}

Rational rational_from_double(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("probability must lie in [0, 1]");
  }
  constexpr std::uint64_t kDen = 1'000'000;
  return Rational{static_cast<std::uint64_t>(std::llround(p * kDen)), kDen};
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below(0)");
  // Lemire's nearly-divisionless method.
  u128 m = static_cast<u128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::int64_t SplitMix64::between(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("between: lo > hi");
  const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == UINT64_MAX) return static_cast<std::int64_t>(next());
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span + 1));
}

bool SplitMix64::bernoulli(Rational p) {
  if (p.num >= p.den) return true;
  if (p.num == 0) return false;
  // floor(x * den / 2^64) is uniform on [0, den) up to 2^-64 bias.
  const auto scaled = static_cast<std::uint64_t>(
      (static_cast<u128>(next()) * p.den) >> 64);
  return scaled < p.num;
}

std::uint64_t SplitMix64::count_with_mean(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("mean must be non-negative");
  const double whole = std::floor(mean);
  const auto base = static_cast<std::uint64_t>(whole);
  return base + (bernoulli(rational_from_double(mean - whole)) ? 1 : 0);
}

std::vector<std::string> check_params(const WorkloadParams& p) {
  std::vector<std::string> out;
  if (p.event_frequency.den == 0 || p.event_frequency.num > p.event_frequency.den) {
    out.emplace_back("event_frequency must lie in [0, 1]");
  }
  if (p.value_min > p.value_max) out.emplace_back("value_min exceeds value_max");
  if (p.element_count > 0 && p.queue_count == 0) {
    out.emplace_back("queue_count must be positive when there are elements");
  }
  auto density = [&](double d, const char* name) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      out.emplace_back(std::string(name) + " must be a finite non-negative number");
    }
  };
  density(p.ref_density, "ref_density");
  density(p.requires_density, "requires_density");
  density(p.excludes_density, "excludes_density");
  density(p.precedence_density, "precedence_density");
  if (!(p.queue_precedence_probability >= 0.0 && p.queue_precedence_probability <= 1.0)) {
    out.emplace_back("queue_precedence_probability must lie in [0, 1]");
  }
  for (const auto& c : p.capacities) {
    if (c.usage_min < 0 || c.usage_min > c.usage_max) {
      out.emplace_back("capacity '" + c.resource + "' needs 0 <= usage_min <= usage_max");
    }
    if (c.bound < 0) out.emplace_back("capacity '" + c.resource + "' has a negative bound");
  }
  return out;
}

namespace {

void require_valid(const WorkloadParams& p) {
  auto problems = check_params(p);
  if (problems.empty()) return;
  std::string msg = "invalid workload parameters:";
  for (const auto& s : problems) msg += "\n  " + s;
  throw std::invalid_argument(msg);
}

// Independent generator streams derived from one seed.
SplitMix64 substream(std::uint64_t seed, std::uint64_t label) {
  SplitMix64 mix(seed ^ (label * 0xd1b54a32d192ed03ULL));
  return SplitMix64(mix.next());
}

enum : std::uint64_t {
  kStreamValues = 1,
  kStreamRefs = 2,
  kStreamPrecedence = 3,
  kStreamConstraints = 4,
  kStreamEvents = 0x100,
};

// Draws `k` distinct partners of `self` among ids 1..n (k clamped to n-1).
std::vector<ElementId> distinct_partners(SplitMix64& rng, ElementId self, std::size_t n,
                                         std::uint64_t k) {
  std::vector<ElementId> out;
  if (n < 2) return out;
  k = std::min<std::uint64_t>(k, n - 1);
  std::set<ElementId> seen;
  while (out.size() < k) {
    const auto id = static_cast<ElementId>(1 + rng.below(n));
    if (id == self || !seen.insert(id).second) continue;
    out.push_back(id);
  }
  return out;
}

}  // namespace

BatchInstance gen_elements(const WorkloadParams& p) {
  require_valid(p);
  BatchInstance inst;
  const std::size_t n = p.element_count;
  const std::size_t nq = n == 0 ? p.queue_count : std::max<std::size_t>(p.queue_count, 1);

  for (std::size_t q = 0; q < nq; ++q) {
    inst.system.queues.push_back(Queue{static_cast<QueueId>(q), {}, {}});
  }
  SplitMix64 values = substream(p.seed, kStreamValues);
  for (std::size_t i = 1; i <= n; ++i) {
    Element e;
    e.id = static_cast<ElementId>(i);
    e.queue = static_cast<QueueId>(values.below(nq));
    e.value = values.between(p.value_min, p.value_max);
    inst.system.queues[e.queue].members.push_back(e.id);
    inst.elements.push_back(std::move(e));
  }

  SplitMix64 refs = substream(p.seed, kStreamRefs);
  for (auto& e : inst.elements) {
    e.refs = distinct_partners(refs, e.id, n, refs.count_with_mean(p.ref_density));
    std::sort(e.refs.begin(), e.refs.end());
  }

  SplitMix64 prec = substream(p.seed, kStreamPrecedence);
  for (auto& q : inst.system.queues) {
    const std::size_t m = q.members.size();
    if (m < 2) continue;
    const std::uint64_t pairs =
        prec.count_with_mean(p.precedence_density * static_cast<double>(m));
    std::set<OrderedPair> chosen;
    for (std::uint64_t k = 0; k < pairs; ++k) {
      auto i = prec.below(m);
      auto j = prec.below(m);
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      // Earlier insertion always precedes later, so the relation is acyclic.
      chosen.emplace(q.members[i], q.members[j]);
    }
    q.precedence.assign(chosen.begin(), chosen.end());
  }
  const Rational qprob = rational_from_double(p.queue_precedence_probability);
  for (std::size_t i = 0; i < nq; ++i) {
    for (std::size_t j = i + 1; j < nq; ++j) {
      if (prec.bernoulli(qprob)) {
        inst.system.queue_precedence.emplace_back(static_cast<QueueId>(i),
                                                  static_cast<QueueId>(j));
      }
    }
  }

  const std::vector<GroupSpec> specs =
      p.groups.empty() ? std::vector<GroupSpec>{GroupSpec{}} : p.groups;
  for (std::size_t g = 0; g < specs.size(); ++g) {
    QueueGroup group{static_cast<GroupId>(g), {}, specs[g].rule};
    for (std::size_t q = g; q < nq; q += specs.size()) {
      group.queues.push_back(static_cast<QueueId>(q));
    }
    if (!group.queues.empty()) inst.groups.push_back(std::move(group));
  }

  SplitMix64 cons = substream(p.seed, kStreamConstraints);
  if (n >= 2) {
    const double nd = static_cast<double>(n);
    const std::uint64_t requires_count = cons.count_with_mean(p.requires_density * nd);
    for (std::uint64_t k = 0; k < requires_count; ++k) {
      const auto a = static_cast<ElementId>(1 + cons.below(n));
      const auto b = distinct_partners(cons, a, n, 1).front();
      inst.constraints.emplace_back(Requires{a, b});
    }
    const std::uint64_t excludes_count = cons.count_with_mean(p.excludes_density * nd);
    for (std::uint64_t k = 0; k < excludes_count; ++k) {
      const auto a = static_cast<ElementId>(1 + cons.below(n));
      const auto b = distinct_partners(cons, a, n, 1).front();
      inst.constraints.emplace_back(Excludes{a, b});
    }
  }
  for (const auto& spec : p.capacities) {
    Capacity cap{spec.resource, {}, spec.bound};
    for (const auto& e : inst.elements) {
      const std::int64_t use = cons.between(spec.usage_min, spec.usage_max);
      if (use != 0) cap.usage.emplace(e.id, use);
    }
    inst.constraints.emplace_back(std::move(cap));
  }
  return inst;
}

TimedStream gen_event_stream(const WorkloadParams& p, std::uint64_t t_end,
                             std::uint64_t stream_index) {
  require_valid(p);
  SplitMix64 rng = substream(p.seed, kStreamEvents + stream_index);
  TimedStream out;
  out.reserve(t_end + 1);
  std::uint64_t k = 0;
  for (std::uint64_t t = 0; t <= t_end; ++t) {
    if (rng.bernoulli(p.event_frequency)) {
      out.push_back(TimedItem::payload(TimeTag{t}, Value{{"event", k++}}));
    } else {
      out.push_back(make_hiaton(TimeTag{t}));
    }
  }
  return out;
}

TimedStream attach_elements(const TimedStream& stream, std::span<const Element> elements) {
  TimedStream out;
  out.reserve(stream.size());
  std::size_t k = 0;
  for (const auto& item : stream) {
    if (item.is_payload() && k < elements.size()) {
      out.push_back(TimedItem::payload(item.tag(), element_to_json(elements[k++])));
    } else {
      out.push_back(make_hiaton(item.tag()));
    }
  }
  return out;
}

}  // namespace settlesim
