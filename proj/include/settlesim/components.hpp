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

// Built-in components. Scenario files refer to them by kind name.

#pragma once

#include <string>
#include <vector>

#include "settlesim/network.hpp"

namespace settlesim::components {

// 1 in, 1 out. Forwards each payload in the tick it arrives.
Component identity(std::string id);

// 1 in, 1 out. Emits {"token": 0} at tick 0, then re-emits every arriving
// payload as {"token": n} where n counts the payloads seen so far. Keeps a
// token circulating around a cycle.
Component pulse(std::string id);

// 1 in, 1 out. Emits {"count": n} whenever a payload arrives, n being the
// running payload count.
Component counter(std::string id);

// `inputs` in, 1 out. A settlement queue: arriving payloads join a FIFO in
// input-port order; one is released on ticks divisible by
// `service_interval`. State: {"pending": [...], "released": n}.
Component fifo_queue(std::string id, std::size_t inputs, std::uint64_t service_interval = 1);

// 1 in, `outputs` out. An element payload goes to port (queue % outputs);
// any other payload goes to port 0.
Component router(std::string id, std::size_t outputs);

// Kinds known to make_builtin.
std::vector<std::string> builtin_kinds();

// Builds a component from a kind name and a params object:
//   identity, pulse, counter:  no params
//   fifo_queue:                {"inputs": n = 1, "service_interval": k = 1}
//   router:                    {"outputs": n}
// Throws std::invalid_argument for an unknown kind or bad params.
Component make_builtin(const std::string& id, const std::string& kind, const Value& params);

}  // namespace settlesim::components
