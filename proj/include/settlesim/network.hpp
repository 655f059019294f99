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

// Real-time mode: a network of components exchanging time-tagged items over
// delayed channels, run in synchronous rounds.
//
// Each round (tick t) every component, in ascending id order, reads exactly
// one item per input port and writes exactly one item per output port. A
// component with nothing to say writes a hiaton. Channels have a delay of at
// least one tick, so a round never depends on another component's output
// from the same round; this is what makes every topology, cyclic or not,
// progress to the horizon.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "settlesim/partition.hpp"
#include "settlesim/timed_stream.hpp"
#include "settlesim/topology.hpp"
#include "settlesim/trace.hpp"

namespace settlesim {

using State = Value;

struct StepResult {
  State state;
  std::vector<TimedItem> outputs;  // one per output port, tagged with the tick
};

// (state, one input per input port, current tick) -> (new state, outputs).
using StepFunction =
    std::function<StepResult(const State&, std::span<const TimedItem>, TimeTag)>;

struct Component {
  std::string id;
  StepFunction step;
  State initial_state;
  std::size_t in_ports = 0;
  std::size_t out_ports = 0;
};

// External input bound to an input port. Item k must carry tag k; once the
// stream runs out the port reads hiatons.
struct Source {
  PortRef to;
  TimedStream stream;
};

struct Network {
  std::vector<Component> components;
  std::vector<Channel> channels;
  std::vector<Source> sources;
  std::vector<Sink> sinks;

  const Component* find(const std::string& id) const;
};

class NetworkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Checked builders. Each throws NetworkError and leaves `net` unchanged on
// failure.
void add_component(Network& net, Component c);
void connect(Network& net, const PortRef& from, const PortRef& to, std::uint64_t delay = 1);
void bind_source(Network& net, const PortRef& to, TimedStream stream);
void expose_sink(Network& net, std::string id, const PortRef& from, std::uint64_t delay = 1);

struct NetworkViolation {
  std::string code;
  std::string component;  // empty when not tied to one component
  std::optional<std::size_t> port;
  std::string message;

  friend bool operator==(const NetworkViolation&, const NetworkViolation&) = default;
};

// Empty iff ids are unique, every reference resolves, port indices are in
// range, delays are at least one, each input port has exactly one feeder,
// and sink ids are unique.
std::vector<NetworkViolation> validate_network(const Network& net);

// A step function broke the one-item-per-port contract.
class ContractViolation : public std::runtime_error {
 public:
  ContractViolation(std::string component, std::uint64_t tick, const std::string& what);
  const std::string& component() const { return component_; }
  std::uint64_t tick() const { return tick_; }

 private:
  std::string component_;
  std::uint64_t tick_;
};

struct RunOptions {
  bool capture_trace = true;
  bool inline_payloads = false;
};

struct RunResult {
  std::uint64_t t_end = 0;
  Trace trace;
  // Items emitted on each channel (indexed like Network::channels), one per
  // tick from 0 to t_end.
  std::vector<TimedStream> channel_streams;
  // Per channel: items still in the delay line after the last round.
  std::vector<std::uint64_t> in_flight;
  // Per channel: items taken off the channel. Reads before the first
  // arrival are idle hiatons and are not counted.
  std::vector<std::uint64_t> delivered;
  // Result streams as seen past each sink's delay line, one item per tick.
  std::map<std::string, TimedStream> sinks;
  std::map<std::string, State> final_states;
};

// Throws NetworkError when validate_network fails or a source is not dense,
// ContractViolation when a component misbehaves.
RunResult run_realtime(const Network& net, TimeTag t_end, const RunOptions& options = {});

class DrainError : public std::runtime_error {
 public:
  DrainError(std::string sink, std::uint64_t tick, const std::string& what);
  const std::string& sink() const { return sink_; }
  std::uint64_t tick() const { return tick_; }

 private:
  std::string sink_;
  std::uint64_t tick_;
};

// Payloads on the given sinks (all sinks when empty), decoded as elements,
// ordered by (tick, sink id).
std::vector<Element> drain(const RunResult& result, std::span<const std::string> sinks = {});

}  // namespace settlesim
