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

#include "settlesim/rules.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace settlesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void by_value(std::span<Candidate> c) {
  std::sort(c.begin(), c.end(), [](const Candidate& x, const Candidate& y) {
    if (x.total_value != y.total_value) return x.total_value > y.total_value;
    return x.supergroup < y.supergroup;
  });
}

void by_position(std::span<Candidate> c) {
  std::sort(c.begin(), c.end(), [](const Candidate& x, const Candidate& y) {
    if (x.earliest_position != y.earliest_position) {
      return x.earliest_position < y.earliest_position;
    }
    return x.supergroup < y.supergroup;
  });
}

}  // namespace

std::string_view rule_name(const RuleKind& r) {
  return std::visit(overloaded{
                        [](ValuePriority) { return std::string_view("value_priority"); },
                        [](FifoStrict) { return std::string_view("fifo_strict"); },
                        [](AllOrNothingGroup) { return std::string_view("all_or_nothing"); },
                    },
                    r);
}

RuleKind parse_rule(std::string_view name) {
  if (name == "value_priority") return ValuePriority{};
  if (name == "fifo_strict") return FifoStrict{};
  if (name == "all_or_nothing") return AllOrNothingGroup{};
  throw std::invalid_argument("unknown rule '" + std::string(name) +
                              "' (expected value_priority, fifo_strict or all_or_nothing)");
}

CandidateOrdering dispatch_rule(const RuleKind& r) {
  return std::visit(overloaded{
                        [](ValuePriority) -> CandidateOrdering { return by_value; },
                        [](FifoStrict) -> CandidateOrdering { return by_position; },
                        [](AllOrNothingGroup) -> CandidateOrdering { return by_value; },
                    },
                    r);
}

bool rejects_whole_group(const RuleKind& r) {
  return std::holds_alternative<AllOrNothingGroup>(r);
}

}  // namespace settlesim
