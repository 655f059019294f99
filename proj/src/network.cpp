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

#include "settlesim/network.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>
#include <unordered_map>

#include "settlesim/instance_json.hpp"

namespace settlesim {

std::string to_string(const PortRef& p) {
  return p.component + ":" + std::to_string(p.port);
}

PortRef parse_port_ref(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size()) {
    throw std::invalid_argument("port reference '" + s + "' is not of the form comp:port");
  }
  std::size_t port = 0;
  for (std::size_t i = colon + 1; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') {
      throw std::invalid_argument("port reference '" + s + "' has a non-numeric port");
    }
    port = port * 10 + static_cast<std::size_t>(s[i] - '0');
  }
  return PortRef{s.substr(0, colon), port};
}

const Component* Network::find(const std::string& id) const {
  for (const auto& c : components) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

namespace {

bool in_port_fed(const Network& net, const PortRef& to) {
  for (const auto& ch : net.channels) {
    if (ch.to == to) return true;
  }
  for (const auto& s : net.sources) {
    if (s.to == to) return true;
  }
  return false;
}

const Component& require_port(const Network& net, const PortRef& p, bool input) {
  const Component* c = net.find(p.component);
  if (!c) throw NetworkError("unknown component '" + p.component + "'");
  const std::size_t arity = input ? c->in_ports : c->out_ports;
  if (p.port >= arity) {
    throw NetworkError(std::string(input ? "input" : "output") + " port " +
                       std::to_string(p.port) + " out of range for component '" +
                       p.component + "' (" + std::to_string(arity) + " ports)");
  }
  return *c;
}

}  // namespace

void add_component(Network& net, Component c) {
  if (c.id.empty()) throw NetworkError("component id must not be empty");
  if (net.find(c.id)) throw NetworkError("duplicate component id '" + c.id + "'");
  if (!c.step) throw NetworkError("component '" + c.id + "' has no step function");
  net.components.push_back(std::move(c));
}

void connect(Network& net, const PortRef& from, const PortRef& to, std::uint64_t delay) {
  if (delay < 1) throw NetworkError("delay must be >= 1");
  require_port(net, from, false);
  require_port(net, to, true);
  if (in_port_fed(net, to)) {
    throw NetworkError("input port " + to_string(to) + " is already fed");
  }
  net.channels.push_back(Channel{from, to, delay});
}

void bind_source(Network& net, const PortRef& to, TimedStream stream) {
  require_port(net, to, true);
  if (in_port_fed(net, to)) {
    throw NetworkError("input port " + to_string(to) + " is already fed");
  }
  if (!is_dense(stream)) {
    throw NetworkError("source stream for " + to_string(to) +
                       " must carry exactly one item per tick from tick 0");
  }
  net.sources.push_back(Source{to, std::move(stream)});
}

void expose_sink(Network& net, std::string id, const PortRef& from, std::uint64_t delay) {
  if (delay < 1) throw NetworkError("delay must be >= 1");
  require_port(net, from, false);
  for (const auto& s : net.sinks) {
    if (s.id == id) throw NetworkError("duplicate sink id '" + id + "'");
  }
  net.sinks.push_back(Sink{std::move(id), from, delay});
}

std::vector<NetworkViolation> validate_network(const Network& net) {
  std::vector<NetworkViolation> out;
  std::unordered_map<std::string, const Component*> by_id;
  for (const auto& c : net.components) {
    if (!by_id.emplace(c.id, &c).second) {
      out.push_back({"duplicate_component", c.id, std::nullopt,
                     "component id '" + c.id + "' is used twice"});
    }
    if (!c.step) {
      out.push_back({"missing_step", c.id, std::nullopt,
                     "component '" + c.id + "' has no step function"});
    }
  }

  // Returns false (after recording why) if `p` does not resolve.
  auto check_port = [&](const PortRef& p, bool input, const std::string& what) {
    auto it = by_id.find(p.component);
    if (it == by_id.end()) {
      out.push_back({"dangling_endpoint", p.component, p.port,
                     what + " names unknown component '" + p.component + "'"});
      return false;
    }
    const std::size_t arity = input ? it->second->in_ports : it->second->out_ports;
    if (p.port >= arity) {
      out.push_back({"port_out_of_range", p.component, p.port,
                     what + " uses " + (input ? "input" : "output") + " port " +
                         std::to_string(p.port) + " of '" + p.component + "', which has " +
                         std::to_string(arity)});
      return false;
    }
    return true;
  };

  std::map<PortRef, std::size_t> feeders;
  for (std::size_t i = 0; i < net.channels.size(); ++i) {
    const auto& ch = net.channels[i];
    const std::string what = "channel " + to_string(ch.from) + "->" + to_string(ch.to);
    check_port(ch.from, false, what);
    if (check_port(ch.to, true, what)) ++feeders[ch.to];
    if (ch.delay < 1) {
      out.push_back({"bad_delay", ch.to.component, ch.to.port,
                     what + ": delay must be >= 1"});
    }
  }
  for (const auto& s : net.sources) {
    if (check_port(s.to, true, "source for " + to_string(s.to))) ++feeders[s.to];
  }
  std::set<std::string> sink_ids;
  for (const auto& s : net.sinks) {
    const std::string what = "sink '" + s.id + "'";
    check_port(s.from, false, what);
    if (!sink_ids.insert(s.id).second) {
      out.push_back({"duplicate_sink", s.from.component, s.from.port,
                     "sink id '" + s.id + "' is used twice"});
    }
    if (s.delay < 1) {
      out.push_back({"bad_delay", s.from.component, s.from.port, what + ": delay must be >= 1"});
    }
  }

  for (const auto& c : net.components) {
    if (by_id.at(c.id) != &c) continue;  // duplicate already reported
    for (std::size_t p = 0; p < c.in_ports; ++p) {
      auto it = feeders.find(PortRef{c.id, p});
      const std::size_t n = it == feeders.end() ? 0 : it->second;
      if (n == 0) {
        out.push_back({"unfed_port", c.id, p,
                       "input port " + std::to_string(p) + " of '" + c.id + "' is not fed"});
      } else if (n > 1) {
        out.push_back({"multiply_fed_port", c.id, p,
                       "input port " + std::to_string(p) + " of '" + c.id + "' has " +
                           std::to_string(n) + " feeders"});
      }
    }
  }
  return out;
}

ContractViolation::ContractViolation(std::string component, std::uint64_t tick,
                                     const std::string& what)
    : std::runtime_error("component '" + component + "' at tick " + std::to_string(tick) +
                         ": " + what),
      component_(std::move(component)),
      tick_(tick) {}

namespace {

struct Feeder {
  enum class Kind { kChannel, kSource } kind;
  std::size_t index;
};

}  // namespace

RunResult run_realtime(const Network& net, TimeTag t_end_tag, const RunOptions& options) {
  if (auto v = validate_network(net); !v.empty()) {
    std::string msg = "invalid network:";
    for (const auto& x : v) msg += "\n  [" + x.code + "] " + x.message;
    throw NetworkError(msg);
  }
  for (const auto& s : net.sources) {
    if (!is_dense(s.stream)) {
      throw NetworkError("source stream for " + to_string(s.to) +
                         " must carry exactly one item per tick from tick 0");
    }
  }
  const std::uint64_t t_end = t_end_tag.tick;

  std::vector<const Component*> order;
  for (const auto& c : net.components) order.push_back(&c);
  std::sort(order.begin(), order.end(),
            [](const Component* a, const Component* b) { return a->id < b->id; });

  std::map<PortRef, Feeder> feeder;
  for (std::size_t i = 0; i < net.channels.size(); ++i) {
    feeder.emplace(net.channels[i].to, Feeder{Feeder::Kind::kChannel, i});
  }
  for (std::size_t i = 0; i < net.sources.size(); ++i) {
    feeder.emplace(net.sources[i].to, Feeder{Feeder::Kind::kSource, i});
  }
  std::map<PortRef, std::vector<std::size_t>> fanout;
  for (std::size_t i = 0; i < net.channels.size(); ++i) {
    fanout[net.channels[i].from].push_back(i);
  }
  std::map<PortRef, TimedStream> sink_ports;
  for (const auto& s : net.sinks) sink_ports.emplace(s.from, TimedStream{});

  // Resolve every port once so the per-tick loop does no map lookups.
  struct Slot {
    const Component* comp;
    std::vector<Feeder> inputs;
    std::vector<std::vector<std::size_t>> outputs;  // channel indices per out-port
    std::vector<TimedStream*> sink_streams;          // per out-port, may be null
    State state;
  };
  std::vector<Slot> slots;
  slots.reserve(order.size());
  for (const Component* c : order) {
    Slot slot{c, {}, {}, {}, c->initial_state};
    for (std::size_t p = 0; p < c->in_ports; ++p) slot.inputs.push_back(feeder.at({c->id, p}));
    for (std::size_t p = 0; p < c->out_ports; ++p) {
      auto it = fanout.find({c->id, p});
      slot.outputs.push_back(it == fanout.end() ? std::vector<std::size_t>{} : it->second);
      auto sk = sink_ports.find({c->id, p});
      slot.sink_streams.push_back(sk == sink_ports.end() ? nullptr : &sk->second);
    }
    slots.push_back(std::move(slot));
  }

  RunResult result;
  result.t_end = t_end;
  result.channel_streams.resize(net.channels.size());
  result.in_flight.assign(net.channels.size(), 0);
  result.delivered.assign(net.channels.size(), 0);
  std::vector<std::deque<TimedItem>> lines(net.channels.size());
  for (auto& s : result.channel_streams) s.reserve(t_end + 1);
  for (auto& [_, s] : sink_ports) s.reserve(t_end + 1);

  std::vector<TimedItem> inputs;
  for (std::uint64_t t = 0; t <= t_end; ++t) {
    const TimeTag now{t};
    for (auto& slot : slots) {
      const Component& c = *slot.comp;
      inputs.clear();
      for (const auto& f : slot.inputs) {
        if (f.kind == Feeder::Kind::kSource) {
          const auto& stream = net.sources[f.index].stream;
          inputs.push_back(t < stream.size() ? stream[t] : make_hiaton(now));
          continue;
        }
        const Channel& ch = net.channels[f.index];
        if (t < ch.delay) {
          inputs.push_back(make_hiaton(now));
          continue;
        }
        auto& line = lines[f.index];
        // Density guarantees the head of the line arrives exactly now.
        inputs.push_back(std::move(line.front()));
        line.pop_front();
        ++result.delivered[f.index];
      }

      StepResult step = c.step(slot.state, inputs, now);
      if (step.outputs.size() != c.out_ports) {
        throw ContractViolation(c.id, t,
                                "emitted " + std::to_string(step.outputs.size()) +
                                    " items for " + std::to_string(c.out_ports) +
                                    " output ports");
      }
      for (std::size_t p = 0; p < step.outputs.size(); ++p) {
        if (step.outputs[p].tag() != now) {
          throw ContractViolation(c.id, t,
                                  "item on output port " + std::to_string(p) +
                                      " is tagged " +
                                      std::to_string(step.outputs[p].tag().tick));
        }
      }
      slot.state = std::move(step.state);

      if (options.capture_trace) {
        const std::size_t ports = std::max(c.in_ports, c.out_ports);
        for (std::size_t p = 0; p < ports; ++p) {
          const auto port = static_cast<std::uint32_t>(p);
          if (p < c.in_ports) {
            result.trace.record(make_event(t, c.id, port, Direction::kConsume, inputs[p],
                                           options.inline_payloads));
          }
          if (p < c.out_ports) {
            result.trace.record(make_event(t, c.id, port, Direction::kEmit, step.outputs[p],
                                           options.inline_payloads));
          }
        }
      }

      for (std::size_t p = 0; p < step.outputs.size(); ++p) {
        const TimedItem& item = step.outputs[p];
        for (std::size_t ci : slot.outputs[p]) {
          result.channel_streams[ci].push_back(item);
          lines[ci].push_back(item.retagged(TimeTag{t + net.channels[ci].delay}));
        }
        if (slot.sink_streams[p]) slot.sink_streams[p]->push_back(item);
      }
    }
  }

  for (std::size_t i = 0; i < lines.size(); ++i) result.in_flight[i] = lines[i].size();
  for (const auto& slot : slots) result.final_states[slot.comp->id] = slot.state;
  for (const auto& s : net.sinks) {
    const TimedStream& emitted = sink_ports.at(s.from);
    TimedStream arrived;
    arrived.reserve(t_end + 1);
    for (std::uint64_t t = 0; t <= t_end; ++t) {
      arrived.push_back(t < s.delay ? make_hiaton(TimeTag{t})
                                    : emitted[t - s.delay].retagged(TimeTag{t}));
    }
    result.sinks.emplace(s.id, std::move(arrived));
  }
  return result;
}

DrainError::DrainError(std::string sink, std::uint64_t tick, const std::string& what)
    : std::runtime_error("sink '" + sink + "' at tick " + std::to_string(tick) + ": " + what),
      sink_(std::move(sink)),
      tick_(tick) {}

std::vector<Element> drain(const RunResult& result, std::span<const std::string> sinks) {
  std::vector<std::string> chosen(sinks.begin(), sinks.end());
  if (chosen.empty()) {
    for (const auto& [id, _] : result.sinks) chosen.push_back(id);
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());

  std::vector<std::tuple<std::uint64_t, std::string, const Value*>> found;
  for (const auto& id : chosen) {
    auto it = result.sinks.find(id);
    if (it == result.sinks.end()) throw DrainError(id, 0, "no such sink");
    for (const auto& item : it->second) {
      if (item.is_payload()) found.emplace_back(item.tag().tick, id, &item.value());
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });

  std::vector<Element> out;
  out.reserve(found.size());
  for (const auto& [tick, sink, value] : found) {
    try {
      out.push_back(element_from_json(*value, "payload"));
    } catch (const SchemaError& err) {
      throw DrainError(sink, tick, std::string("payload is not an element: ") + err.what());
    }
  }
  return out;
}

}  // namespace settlesim
