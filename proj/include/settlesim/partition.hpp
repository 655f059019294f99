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

// Batch mode: a queue system of cross-referencing elements is split into an
// accepted and a rejected set. The accepted set must satisfy every
// constraint and maximize the summed element value; `select_partition` is a
// deterministic greedy approximation and `exhaustive_oracle` the exact
// answer for small instances.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "settlesim/graph.hpp"
#include "settlesim/rules.hpp"

namespace settlesim {

using QueueId = std::uint32_t;
using GroupId = std::uint32_t;

// A settlement item. `value` is in minor currency units.
struct Element {
  ElementId id = 0;
  std::int64_t value = 0;
  QueueId queue = 0;
  std::vector<ElementId> refs;

  friend bool operator==(const Element&, const Element&) = default;
};

using OrderedPair = std::pair<std::uint32_t, std::uint32_t>;  // (earlier, later)

struct Queue {
  QueueId id = 0;
  std::vector<ElementId> members;     // insertion order
  std::vector<OrderedPair> precedence;  // strict partial order over members

  friend bool operator==(const Queue&, const Queue&) = default;
};

struct QueueSystem {
  std::vector<Queue> queues;
  std::vector<OrderedPair> queue_precedence;

  friend bool operator==(const QueueSystem&, const QueueSystem&) = default;
};

struct QueueGroup {
  GroupId id = 0;
  std::vector<QueueId> queues;
  RuleKind rule = ValuePriority{};

  friend bool operator==(const QueueGroup&, const QueueGroup&) = default;
};

// `a` may only be accepted together with `b`.
struct Requires {
  ElementId a = 0;
  ElementId b = 0;
  friend bool operator==(const Requires&, const Requires&) = default;
};

// `a` and `b` are never both accepted.
struct Excludes {
  ElementId a = 0;
  ElementId b = 0;
  friend bool operator==(const Excludes&, const Excludes&) = default;
};

// Summed usage of accepted elements must not exceed `bound`. Elements
// missing from `usage` use nothing.
struct Capacity {
  std::string resource;
  std::map<ElementId, std::int64_t> usage;
  std::int64_t bound = 0;
  friend bool operator==(const Capacity&, const Capacity&) = default;
};

using Constraint = std::variant<Requires, Excludes, Capacity>;

struct BatchInstance {
  std::vector<Element> elements;
  QueueSystem system;
  std::vector<QueueGroup> groups;
  std::vector<Constraint> constraints;

  friend bool operator==(const BatchInstance&, const BatchInstance&) = default;
};

// A broken invariant or constraint, reported as data.
struct Violation {
  std::string code;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct Partition {
  std::vector<ElementId> accepted;  // ascending
  std::vector<ElementId> rejected;  // ascending
  std::int64_t aggregate = 0;
  std::vector<Violation> violations;

  friend bool operator==(const Partition&, const Partition&) = default;
};

class InvalidInstance : public std::invalid_argument {
 public:
  explicit InvalidInstance(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class InstanceTooLarge : public std::invalid_argument {
 public:
  InstanceTooLarge(std::size_t elements, std::size_t limit);
};

// Every structural invariant of the instance: unique ids, resolvable
// references, queue membership, acyclic precedences, groups partitioning
// the queues, well-formed constraints. Empty means valid.
std::vector<Violation> validate_system(const BatchInstance& instance);

// Edges a->b for every b in refs(a) and every Requires(a, b), deduplicated.
// Throws DanglingReference for a ref or Requires target that is not an
// element.
DependencyGraph build_dependency_graph(std::span<const Element> elements,
                                       std::span<const Constraint> constraints);

// Sum of values of `accepted`. Throws std::invalid_argument on an unknown id
// and std::overflow_error if the sum leaves the int64 range.
std::int64_t aggregate(std::span<const ElementId> accepted,
                       std::span<const Element> elements);

// Violated Requires (a accepted, b not), Excludes (both accepted) and
// Capacity (usage above bound) constraints.
std::vector<Violation> check_constraints(const Partition& p,
                                         std::span<const Constraint> constraints);

// check_constraints plus the structural conditions every accepted set must
// meet: an accepted element's refs are accepted, and each all-or-nothing
// queue group is entirely accepted or entirely rejected.
std::vector<Violation> check_feasibility(const Partition& p,
                                         const BatchInstance& instance);

// Global processing position of every element: queues in a stable
// topological order of queue precedence (ties by ascending queue id), then
// each queue's members in a stable topological order of its own precedence
// (ties by insertion order).
std::map<ElementId, std::size_t> insertion_positions(const QueueSystem& system);

// Greedy partition. Supergroups are visited dependencies-first (by
// condensation level), and within a level by owning queue group id and that
// group's rule. A supergroup is accepted whole iff every supergroup it
// depends on is accepted, no Excludes pairs it with an accepted element,
// and every capacity still holds. An all-or-nothing group with any failed
// supergroup is rejected whole and the pass repeats. Throws
// InvalidInstance when validation fails; the result is always feasible.
Partition select_partition(const BatchInstance& instance);

inline constexpr std::size_t kOracleMaxElements = 20;

// Exact maximum over all 2^n accepted sets passing check_feasibility. Ties
// go to the lexicographically smallest ascending id list. Throws
// InstanceTooLarge above kOracleMaxElements.
Partition exhaustive_oracle(const BatchInstance& instance);

}  // namespace settlesim
