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

// Exhaustive search over accepted sets, encoded as bitmasks over elements
// in ascending id order.

#include <algorithm>
#include <unordered_map>

#include "settlesim/partition.hpp"

namespace settlesim {

namespace {

using Mask = std::uint32_t;

struct Encoded {
  std::vector<ElementId> ids;          // ascending
  std::vector<std::int64_t> value;
  std::vector<Mask> needs;             // refs and Requires targets
  std::vector<Mask> excludes;
  std::vector<std::vector<std::int64_t>> usage;  // [capacity][element]
  std::vector<std::int64_t> bound;
  std::vector<Mask> whole_groups;      // members of each all-or-nothing group
};

Encoded encode(const BatchInstance& inst) {
  Encoded enc;
  for (const auto& e : inst.elements) enc.ids.push_back(e.id);
  std::sort(enc.ids.begin(), enc.ids.end());
  const std::size_t n = enc.ids.size();
  std::unordered_map<ElementId, std::size_t> bit;
  for (std::size_t i = 0; i < n; ++i) bit.emplace(enc.ids[i], i);
  auto at = [&](ElementId id) {
    auto it = bit.find(id);
    if (it == bit.end()) {
      throw std::invalid_argument("oracle: unknown element " + std::to_string(id));
    }
    return it->second;
  };

  enc.value.assign(n, 0);
  enc.needs.assign(n, 0);
  enc.excludes.assign(n, 0);
  for (const auto& e : inst.elements) {
    const std::size_t i = at(e.id);
    enc.value[i] = e.value;
    for (ElementId r : e.refs) enc.needs[i] |= Mask{1} << at(r);
  }
  for (const auto& c : inst.constraints) {
    if (const auto* r = std::get_if<Requires>(&c)) {
      enc.needs[at(r->a)] |= Mask{1} << at(r->b);
    } else if (const auto* x = std::get_if<Excludes>(&c)) {
      enc.excludes[at(x->a)] |= Mask{1} << at(x->b);
      enc.excludes[at(x->b)] |= Mask{1} << at(x->a);
    } else {
      const auto& cap = std::get<Capacity>(c);
      std::vector<std::int64_t> row(n, 0);
      for (const auto& [id, use] : cap.usage) row[at(id)] += use;
      enc.usage.push_back(std::move(row));
      enc.bound.push_back(cap.bound);
    }
  }
  std::unordered_map<QueueId, std::size_t> group_of_queue;
  for (std::size_t g = 0; g < inst.groups.size(); ++g) {
    for (QueueId q : inst.groups[g].queues) group_of_queue.emplace(q, g);
  }
  std::vector<Mask> group_mask(inst.groups.size(), 0);
  for (const auto& e : inst.elements) {
    auto it = group_of_queue.find(e.queue);
    if (it != group_of_queue.end()) group_mask[it->second] |= Mask{1} << at(e.id);
  }
  for (std::size_t g = 0; g < inst.groups.size(); ++g) {
    if (rejects_whole_group(inst.groups[g].rule) && group_mask[g] != 0) {
      enc.whole_groups.push_back(group_mask[g]);
    }
  }
  return enc;
}

bool feasible(const Encoded& enc, Mask s) {
  for (Mask rest = s; rest; rest &= rest - 1) {
    const int i = __builtin_ctz(rest);
    if ((enc.needs[i] & ~s) != 0) return false;
    if ((enc.excludes[i] & s) != 0) return false;
  }
  for (std::size_t k = 0; k < enc.usage.size(); ++k) {
    std::int64_t used = 0;
    for (Mask rest = s; rest; rest &= rest - 1) used += enc.usage[k][__builtin_ctz(rest)];
    if (used > enc.bound[k]) return false;
  }
  for (Mask g : enc.whole_groups) {
    const Mask part = s & g;
    if (part != 0 && part != g) return false;
  }
  return true;
}

// Lexicographic comparison of the ascending id lists encoded by two masks.
// Bits are in ascending id order, so the lists differ first at the lowest
// differing bit; the list containing that bit is smaller unless the other
// list has already ended.
bool lex_less(Mask a, Mask b) {
  if (a == b) return false;
  const Mask diff = a ^ b;
  const Mask low = diff & (~diff + 1);
  const Mask below = low - 1;
  // Both share every bit below `low`. The list holding `low` has that id
  // at the first difference; the other continues with a larger id or ends.
  const bool a_has = (a & low) != 0;
  const Mask other_rest = (a_has ? b : a) & ~below;
  if (other_rest == 0) return !a_has;  // other list is a proper prefix
  return a_has;
}

}  // namespace

Partition exhaustive_oracle(const BatchInstance& inst) {
  if (inst.elements.size() > kOracleMaxElements) {
    throw InstanceTooLarge(inst.elements.size(), kOracleMaxElements);
  }
  const Encoded enc = encode(inst);
  const std::size_t n = enc.ids.size();
  const Mask full = n == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << n) - 1);

  Mask best = 0;  // the empty set is always feasible
  std::int64_t best_value = 0;
  bool have = feasible(enc, 0);
  for (std::uint64_t s64 = 1; s64 <= full; ++s64) {
    const Mask s = static_cast<Mask>(s64);
    if (!feasible(enc, s)) continue;
    std::int64_t v = 0;
    for (Mask rest = s; rest; rest &= rest - 1) v += enc.value[__builtin_ctz(rest)];
    if (!have || v > best_value || (v == best_value && lex_less(s, best))) {
      best = s;
      best_value = v;
      have = true;
    }
  }

  Partition p;
  for (std::size_t i = 0; i < n; ++i) {
    ((best >> i) & 1 ? p.accepted : p.rejected).push_back(enc.ids[i]);
  }
  p.aggregate = best_value;
  p.violations = check_feasibility(p, inst);
  return p;
}

}  // namespace settlesim
