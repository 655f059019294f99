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

#include <algorithm>
#include <optional>

#include "settlesim/hash.hpp"
#include "settlesim/trace.hpp"

namespace settlesim {

std::uint64_t Summary::total_emitted_payloads() const {
  std::uint64_t n = 0;
  for (const auto& [_, c] : components) n += c.emitted_payloads;
  return n;
}

std::uint64_t Summary::total_emitted_hiatons() const {
  std::uint64_t n = 0;
  for (const auto& [_, c] : components) n += c.emitted_hiatons;
  return n;
}

Summary summarize(const Trace& trace) {
  Summary s;
  const auto& events = trace.events();
  if (events.empty()) return s;
  s.ticks = events.back().tick + 1;

  std::map<std::uint64_t, std::uint64_t> first_seen;
  std::map<std::uint64_t, std::uint64_t> last_emit;
  // Per-component payload balance at each tick, folded into running sums below.
  std::map<std::string, std::vector<std::int64_t>> delta;

  for (const auto& e : events) {
    auto& counts = s.components[e.component];
    auto& d = delta[e.component];
    if (d.empty()) d.assign(s.ticks, 0);
    const bool payload = e.kind == ItemKind::kPayload;
    if (e.dir == Direction::kEmit) {
      auto& tp = s.throughput[PortRef{e.component, e.port}];
      if (tp.payloads_per_tick.empty()) tp.payloads_per_tick.assign(s.ticks, 0);
      if (payload) {
        ++counts.emitted_payloads;
        ++tp.payloads;
        ++tp.payloads_per_tick[e.tick];
        --d[e.tick];
        last_emit[e.digest] = e.tick;
      } else {
        ++counts.emitted_hiatons;
        ++tp.hiatons;
      }
    } else if (payload) {
      ++counts.consumed_payloads;
      ++d[e.tick];
    } else {
      ++counts.consumed_hiatons;
    }
    if (payload) first_seen.try_emplace(e.digest, e.tick);
  }
  s.output_ports = s.throughput.size();

  for (auto& [comp, d] : delta) {
    auto& series = s.queue_depth[comp];
    series.resize(d.size());
    std::int64_t running = 0;
    for (std::size_t t = 0; t < d.size(); ++t) {
      running += d[t];
      series[t] = running;
    }
  }
  for (const auto& [digest, tick] : last_emit) {
    ++s.latency_histogram[tick - first_seen.at(digest)];
  }
  return s;
}

Value summary_to_json(const Summary& s) {
  Value out = Value::object();
  out["ticks"] = s.ticks;
  out["output_ports"] = s.output_ports;
  out["emitted_payloads"] = s.total_emitted_payloads();
  out["emitted_hiatons"] = s.total_emitted_hiatons();
  Value comps = Value::object();
  for (const auto& [id, c] : s.components) {
    comps[id] = {{"emitted_payloads", c.emitted_payloads},
                 {"emitted_hiatons", c.emitted_hiatons},
                 {"consumed_payloads", c.consumed_payloads},
                 {"consumed_hiatons", c.consumed_hiatons}};
  }
  out["components"] = std::move(comps);
  Value tp = Value::object();
  for (const auto& [port, t] : s.throughput) {
    const double rate = s.ticks == 0 ? 0.0
                                     : static_cast<double>(t.payloads) /
                                           static_cast<double>(s.ticks);
    tp[to_string(port)] = {{"payloads", t.payloads},
                           {"hiatons", t.hiatons},
                           {"payloads_per_tick_mean", rate},
                           {"payloads_per_tick", t.payloads_per_tick}};
  }
  out["throughput"] = std::move(tp);
  out["queue_depth"] = s.queue_depth;
  Value hist = Value::array();
  for (const auto& [latency, count] : s.latency_histogram) {
    hist.push_back({{"latency", latency}, {"count", count}});
  }
  out["latency_histogram"] = std::move(hist);
  return out;
}

std::vector<Frame> animation_frames(const Trace& trace,
                                    std::span<const Channel> channels,
                                    std::span<const Sink> sinks) {
  const auto& events = trace.events();
  if (events.empty()) return {};
  const std::uint64_t ticks = events.back().tick + 1;

  // Emissions per (port, tick) and channel-borne consumptions per (port, tick).
  std::map<PortRef, std::vector<std::uint32_t>> emits;
  std::map<PortRef, std::vector<std::uint32_t>> consumes;
  std::map<std::string, std::vector<std::optional<std::uint64_t>>> history;
  std::map<std::string, Fnv1a> running;

  for (const auto& e : events) {
    PortRef port{e.component, e.port};
    auto& table = e.dir == Direction::kEmit ? emits : consumes;
    auto& row = table[port];
    if (row.empty()) row.assign(ticks, 0);
    ++row[e.tick];
    if (e.dir == Direction::kConsume) {
      running[e.component]
          .update_u64(e.tick)
          .update_u64(e.port)
          .update_u64(static_cast<std::uint64_t>(e.kind))
          .update_u64(e.digest);
    }
    auto& h = history[e.component];
    if (h.empty()) h.resize(ticks);
    // Overwritten by later events of the same tick; forward-filled below.
    h[e.tick] = running[e.component].value();
  }
  std::map<std::string, std::vector<std::uint64_t>> digests;
  for (const auto& [comp, h] : history) {
    auto& out = digests[comp];
    std::uint64_t last = Fnv1a().value();
    for (const auto& v : h) {
      if (v) last = *v;
      out.push_back(last);
    }
  }

  auto count_through = [&](const std::map<PortRef, std::vector<std::uint32_t>>& table,
                           const PortRef& p) -> const std::vector<std::uint32_t>* {
    auto it = table.find(p);
    return it == table.end() ? nullptr : &it->second;
  };

  struct Line {
    std::string name;
    const std::vector<std::uint32_t>* sent;
    const std::vector<std::uint32_t>* received;  // null for sinks
    std::uint64_t delay;
    std::uint64_t sent_total = 0;
    std::uint64_t received_total = 0;
  };
  std::vector<Line> lines;
  for (const auto& ch : channels) {
    lines.push_back({to_string(ch.from) + "->" + to_string(ch.to),
                     count_through(emits, ch.from), count_through(consumes, ch.to),
                     ch.delay});
  }
  for (const auto& sk : sinks) {
    lines.push_back({"sink:" + sk.id, count_through(emits, sk.from), nullptr, sk.delay});
  }

  std::vector<Frame> frames(ticks);
  for (std::uint64_t t = 0; t < ticks; ++t) {
    Frame& f = frames[t];
    f.tick = t;
    for (auto& line : lines) {
      if (line.sent) line.sent_total += (*line.sent)[t];
      // Reads before the first arrival are idle hiatons, not channel items.
      if (t >= line.delay) {
        if (line.received) {
          line.received_total += (*line.received)[t];
        } else if (line.sent) {
          line.received_total += (*line.sent)[t - line.delay];
        }
      }
      f.occupancy.push_back({line.name, line.sent_total - line.received_total});
    }
    for (const auto& [comp, d] : digests) f.state_digest[comp] = d[t];
  }
  return frames;
}

Value frame_to_json(const Frame& f) {
  Value occ = Value::object();
  for (const auto& o : f.occupancy) occ[o.channel] = o.in_flight;
  Value states = Value::object();
  for (const auto& [comp, d] : f.state_digest) states[comp] = to_hex(d);
  return {{"tick", f.tick}, {"occupancy", std::move(occ)}, {"state_digest", std::move(states)}};
}

}  // namespace settlesim
