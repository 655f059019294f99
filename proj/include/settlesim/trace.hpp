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

// Complete event traces of real-time runs, their export formats, and the
// post-run analyses computed from them.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "settlesim/timed_stream.hpp"
#include "settlesim/topology.hpp"

namespace settlesim {

enum class Direction : std::uint8_t { kConsume = 0, kEmit = 1 };
enum class ItemKind : std::uint8_t { kPayload = 0, kHiaton = 1 };

std::string_view to_string(Direction d);  // "consume" / "emit"
std::string_view to_string(ItemKind k);   // "payload" / "hiaton"
Direction parse_direction(std::string_view s);
ItemKind parse_item_kind(std::string_view s);

// Stable digest of a payload value: FNV-1a over its canonical JSON text.
// Hiatons digest to 0.
std::uint64_t payload_digest(const Value& v);

struct TraceEvent {
  std::uint64_t tick = 0;
  std::string component;
  std::uint32_t port = 0;
  Direction dir = Direction::kConsume;
  ItemKind kind = ItemKind::kHiaton;
  std::uint64_t digest = 0;
  std::optional<Value> payload;  // only when inline capture is enabled

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Builds the event for `item` passing through a port. The payload is
// stored inline only when `inline_payload` is set.
TraceEvent make_event(std::uint64_t tick, const std::string& component,
                      std::uint32_t port, Direction dir, const TimedItem& item,
                      bool inline_payload);

class TraceOrderError : public std::invalid_argument {
 public:
  explicit TraceOrderError(std::size_t index);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Events strictly increasing by (tick, component, port, dir).
class Trace {
 public:
  Trace() = default;

  // Appends `e`; throws TraceOrderError unless it sorts after the last event.
  void record(TraceEvent e);

  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  void reserve(std::size_t n) { events_.reserve(n); }

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<TraceEvent> events_;
};

inline Trace& record_event(Trace& trace, TraceEvent e) {
  trace.record(std::move(e));
  return trace;
}

// --- export / import -------------------------------------------------------

enum class TraceFormat { kNdjson, kCsv };

std::string_view to_string(TraceFormat f);
TraceFormat parse_trace_format(std::string_view s);

// ND-JSON: one object per line with keys, in order,
//   tick, comp, port, dir, kind, digest[, payload]
// where digest is 16 lowercase hex digits.
// CSV: header "tick,comp,port,dir,kind,digest,payload", RFC 4180 quoting,
// CRLF record separators; an empty payload field means "not captured".
void export_trace(const Trace& trace, TraceFormat format, std::ostream& out);
std::string export_trace(const Trace& trace, TraceFormat format);

// Throws std::runtime_error when the file cannot be written.
void export_trace(const Trace& trace, TraceFormat format,
                  const std::string& path);

// Throws std::invalid_argument (with a line number) on malformed input and
// TraceOrderError on out-of-order records.
Trace import_trace(std::istream& in, TraceFormat format);
Trace import_trace(std::string_view text, TraceFormat format);

// --- analysis --------------------------------------------------------------

struct ComponentCounts {
  std::uint64_t emitted_payloads = 0;
  std::uint64_t emitted_hiatons = 0;
  std::uint64_t consumed_payloads = 0;
  std::uint64_t consumed_hiatons = 0;

  friend bool operator==(const ComponentCounts&, const ComponentCounts&) = default;
};

// Per output port: payload/hiaton emissions and payloads per tick.
struct PortThroughput {
  std::uint64_t payloads = 0;
  std::uint64_t hiatons = 0;
  std::vector<std::uint32_t> payloads_per_tick;

  friend bool operator==(const PortThroughput&, const PortThroughput&) = default;
};

struct Summary {
  std::uint64_t ticks = 0;  // max tick + 1, or 0 for an empty trace
  std::uint64_t output_ports = 0;
  std::map<std::string, ComponentCounts> components;
  std::map<PortRef, PortThroughput> throughput;
  // Backlog of each component after each tick: payloads consumed so far
  // minus payloads emitted so far. Negative for net producers.
  std::map<std::string, std::vector<std::int64_t>> queue_depth;
  // Latency of each distinct payload digest: last emission tick minus the
  // tick it was first seen anywhere in the trace.
  std::map<std::uint64_t, std::uint64_t> latency_histogram;

  std::uint64_t total_emitted_payloads() const;
  std::uint64_t total_emitted_hiatons() const;
};

Summary summarize(const Trace& trace);

// JSON form used by the CLI (`summary.json`).
Value summary_to_json(const Summary& s);

struct ChannelOccupancy {
  std::string channel;  // "from->to" for channels, "sink:<id>" for sinks
  std::uint64_t in_flight = 0;

  friend bool operator==(const ChannelOccupancy&, const ChannelOccupancy&) = default;
};

struct Frame {
  std::uint64_t tick = 0;
  std::vector<ChannelOccupancy> occupancy;
  // Digest of each component's input history through this tick. A
  // component's state is a function of that history, so equal digests
  // imply equal states.
  std::map<std::string, std::uint64_t> state_digest;

  friend bool operator==(const Frame&, const Frame&) = default;
};

// One frame per tick from 0 to the last traced tick. Uses only the trace
// plus the static wiring; nothing is re-simulated.
std::vector<Frame> animation_frames(const Trace& trace,
                                    std::span<const Channel> channels,
                                    std::span<const Sink> sinks);

Value frame_to_json(const Frame& f);

}  // namespace settlesim
