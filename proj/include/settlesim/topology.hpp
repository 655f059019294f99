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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

namespace settlesim {

// A port on a named component. Whether it is an input or an output port
// follows from context.
struct PortRef {
  std::string component;
  std::size_t port = 0;

  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

std::string to_string(const PortRef& p);  // "comp:port"
// Parses "comp:port"; throws std::invalid_argument.
PortRef parse_port_ref(const std::string& s);

// Buffered link between an output port and an input port. An item sent at
// tick t arrives at tick t + delay.
struct Channel {
  PortRef from;
  PortRef to;
  std::uint64_t delay = 1;

  friend bool operator==(const Channel&, const Channel&) = default;
};

// An output port exposed to the outside world as a named result stream,
// behind its own delay line.
struct Sink {
  std::string id;
  PortRef from;
  std::uint64_t delay = 1;

  friend bool operator==(const Sink&, const Sink&) = default;
};

}  // namespace settlesim
