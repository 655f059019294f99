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

#include <doctest.h>

#include <cmath>
#include <unordered_set>

#include "settlesim/instance_json.hpp"
#include "settlesim/workload.hpp"
#include "test_support.hpp"

using namespace settlesim;

namespace {

// The published splitmix64 reference, written out again.
std::uint64_t reference_splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

WorkloadParams rich_params(std::uint64_t seed, std::size_t n) {
  WorkloadParams p;
  p.seed = seed;
  p.element_count = n;
  p.queue_count = 4;
  p.value_min = -5;
  p.value_max = 50;
  p.ref_density = 1.5;
  p.groups = {GroupSpec{ValuePriority{}}, GroupSpec{AllOrNothingGroup{}},
              GroupSpec{FifoStrict{}}};
  p.requires_density = 0.3;
  p.excludes_density = 0.2;
  p.precedence_density = 0.7;
  p.queue_precedence_probability = 0.5;
  p.capacities = {CapacitySpec{"cash", 0, 9, 100}, CapacitySpec{"slots", 1, 1, 10}};
  return p;
}

}  // namespace

TEST_CASE("next_random matches the reference generator") {
  CHECK(next_random(RngState{0}).second == 0xe220a8397b1dcdafULL);
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xffffffffffffffffULL}) {
    std::uint64_t ref = seed;
    RngState s{seed};
    for (int i = 0; i < 1000; ++i) {
      auto [next, v] = next_random(s);
      REQUIRE(v == reference_splitmix(ref));
      REQUIRE(next.state == ref);
      s = next;
    }
  }
  CHECK(next_random(RngState{9}) == next_random(RngState{9}));
}

TEST_CASE("neighbouring seeds give different sequences") {
  std::unordered_set<std::uint64_t> firsts;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    SplitMix64 a(seed);
    SplitMix64 b(seed + 1);
    CHECK(a.next() != b.next());
    firsts.insert(SplitMix64(seed).next());
  }
  CHECK(firsts.size() == 10000);
}

TEST_CASE("uniform mean") {
  SplitMix64 rng(123);
  double sum = 0.0;
  for (int i = 0; i < 1000000; ++i) sum += static_cast<double>(rng.next()) / 18446744073709551616.0;
  CHECK(std::abs(sum / 1e6 - 0.5) < 0.01);
}

TEST_CASE("bounded draws") {
  SplitMix64 rng(5);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++hist[v];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.between(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
  }
  CHECK(rng.between(4, 4) == 4);
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
  CHECK_FALSE(rng.bernoulli(Rational{0, 1}));
  CHECK(rng.bernoulli(Rational{1, 1}));
  CHECK(rational_from_double(0.25) == Rational{250000, 1000000});
  CHECK_THROWS_AS(rational_from_double(1.5), std::invalid_argument);
}

TEST_CASE("gen_elements trivial cases") {
  WorkloadParams p;
  const BatchInstance empty = gen_elements(p);
  CHECK(empty.elements.empty());
  CHECK(validate_system(empty).empty());

  p.element_count = 50;
  p.ref_density = 0.0;
  const BatchInstance flat = gen_elements(p);
  CHECK(flat.elements.size() == 50);
  CHECK(build_dependency_graph(flat.elements, flat.constraints).edge_count() == 0);

  WorkloadParams bad;
  bad.value_min = 10;
  bad.value_max = 1;
  CHECK_FALSE(check_params(bad).empty());
  CHECK_THROWS_AS(gen_elements(bad), std::invalid_argument);
  bad = WorkloadParams{};
  bad.event_frequency = Rational{3, 2};
  CHECK_THROWS_AS(gen_event_stream(bad, 10), std::invalid_argument);
  bad = WorkloadParams{};
  bad.ref_density = -1;
  CHECK_THROWS_AS(gen_elements(bad), std::invalid_argument);
}

TEST_CASE("gen_elements output is valid, in range and reproducible") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const WorkloadParams p = rich_params(seed, 60);
    const BatchInstance inst = gen_elements(p);
    INFO("seed " << seed);
    CHECK(validate_system(inst).empty());
    CHECK(inst.elements.size() == 60);
    for (const auto& e : inst.elements) {
      CHECK(e.value >= p.value_min);
      CHECK(e.value <= p.value_max);
      CHECK(e.queue < p.queue_count);
    }
    CHECK(gen_elements(p) == inst);
    CHECK(instance_to_json(gen_elements(p)).dump() == instance_to_json(inst).dump());
  }
  CHECK(gen_elements(rich_params(1, 60)) != gen_elements(rich_params(2, 60)));
}

TEST_CASE("ref density is met in expectation") {
  for (double density : {0.5, 2.0}) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      WorkloadParams p;
      p.seed = seed;
      p.element_count = 1000;
      p.queue_count = 10;
      p.ref_density = density;
      std::size_t refs = 0;
      for (const auto& e : gen_elements(p).elements) refs += e.refs.size();
      total += static_cast<double>(refs) / 1000.0;
    }
    CHECK(std::abs(total / 100.0 - density) <= 0.1 * density);
  }
}

TEST_CASE("gen_event_stream") {
  WorkloadParams p;
  p.event_frequency = Rational{0, 1};
  const TimedStream silent = gen_event_stream(p, 100);
  CHECK(silent.size() == 101);
  CHECK(count_hiatons(silent) == 101);
  p.event_frequency = Rational{1, 1};
  const TimedStream busy = gen_event_stream(p, 100);
  CHECK(count_hiatons(busy) == 0);
  for (std::size_t k = 0; k < busy.size(); ++k) CHECK(busy[k].value() == Value{{"event", k}});

  p.event_frequency = rational_from_double(0.25);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    p.seed = seed;
    const TimedStream s = gen_event_stream(p, 100000);
    CHECK(is_dense(s));
    const double rate = static_cast<double>(s.size() - count_hiatons(s)) / static_cast<double>(s.size());
    CHECK(std::abs(rate - 0.25) <= 0.01);
    CHECK(gen_event_stream(p, 100000) == s);
  }
  CHECK(gen_event_stream(p, 500, 0) != gen_event_stream(p, 500, 1));
}

TEST_CASE("attach_elements") {
  const TimedStream s{make_hiaton(TimeTag{0}), TimedItem::payload(TimeTag{1}, 1),
                      TimedItem::payload(TimeTag{2}, 2), TimedItem::payload(TimeTag{3}, 3)};
  const std::vector<Element> els{{7, 1, 0, {}}, {8, 2, 0, {7}}};
  const TimedStream out = attach_elements(s, els);
  REQUIRE(out.size() == 4);
  CHECK(out[0].is_hiaton());
  CHECK(element_from_json(out[1].value()) == els[0]);
  CHECK(element_from_json(out[2].value()) == els[1]);
  CHECK(out[3].is_hiaton());
}

TEST_CASE("workload params JSON round trip") {
  const WorkloadParams p = rich_params(77, 10);
  CHECK(params_from_json(params_to_json(p)) == p);
  CHECK_THROWS_AS(params_from_json(Value{{"bogus", 1}}), std::exception);
  const WorkloadParams f = params_from_json(Value{{"event_frequency", "1/3"}});
  CHECK(f.event_frequency == Rational{1, 3});
}
