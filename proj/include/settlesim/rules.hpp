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

// Queue-group processing rules. The set of rules is a closed variant:
// adding one means adding an alternative here, and every std::visit over
// RuleKind stops compiling until the new rule is handled.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>

namespace settlesim {

struct ValuePriority {
  friend bool operator==(ValuePriority, ValuePriority) = default;
};
struct FifoStrict {
  friend bool operator==(FifoStrict, FifoStrict) = default;
};
struct AllOrNothingGroup {
  friend bool operator==(AllOrNothingGroup, AllOrNothingGroup) = default;
};

using RuleKind = std::variant<ValuePriority, FifoStrict, AllOrNothingGroup>;

std::string_view rule_name(const RuleKind& r);  // "value_priority", ...
// Throws std::invalid_argument for an unknown name.
RuleKind parse_rule(std::string_view name);

// What a rule needs to know about a supergroup to order it.
struct Candidate {
  std::size_t supergroup = 0;
  std::int64_t total_value = 0;
  std::size_t earliest_position = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

using CandidateOrdering = void (*)(std::span<Candidate>);

// ValuePriority and AllOrNothingGroup: descending total value, then
// ascending supergroup id. FifoStrict: ascending earliest insertion
// position, then ascending supergroup id.
CandidateOrdering dispatch_rule(const RuleKind& r);

// True for rules whose queue group is accepted or rejected as a whole.
bool rejects_whole_group(const RuleKind& r);

}  // namespace settlesim
