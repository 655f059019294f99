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

// Scenario files and the commands that run them.
//
// A scenario is one JSON document:
//
//   {
//     "mode": "realtime" | "batch" | "both",
//     "seed": 7,                      // default 0
//     "t_end": 1000,                  // required for realtime and both
//     "output_dir": "runs",           // default "runs"
//     "formats": ["ndjson", "csv"],   // trace exports, default ["ndjson"]
//     "inline_payloads": false,
//     "workload": { ...params... },   // exactly one of workload / instance
//     "instance": { ...instance... },
//     "network": {                    // required for realtime and both
//       "components": [{"id": "q", "kind": "fifo_queue", "params": {...}}],
//       "channels":   [{"from": "a:0", "to": "q:0", "delay": 1}],
//       "sources":    [{"to": "a:0", "items": [null, {"x": 1}]},
//                      {"to": "b:0", "frequency": 0.25, "stream": 1,
//                       "elements": true}],
//       "sinks":      [{"id": "out", "from": "q:0", "delay": 1}]
//     }
//   }
//
// Explicit source items are payload values, with null for a hiaton; item k
// is tagged k. Generated sources draw a Bernoulli stream from the scenario
// seed ("frequency" defaults to the workload's event_frequency); with
// "elements": true their payloads carry the instance's elements in order.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "settlesim/network.hpp"
#include "settlesim/partition.hpp"
#include "settlesim/trace.hpp"
#include "settlesim/workload.hpp"

namespace settlesim {

enum class Mode { kRealtime, kBatch, kBoth };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);

struct ComponentSpec {
  std::string id;
  std::string kind;
  Value params;
};

struct SourceSpec {
  PortRef to;
  std::optional<TimedStream> items;  // explicit stream
  std::optional<Rational> frequency;
  std::uint64_t stream = 0;
  bool elements = false;
};

struct NetworkSpec {
  std::vector<ComponentSpec> components;
  std::vector<Channel> channels;
  std::vector<SourceSpec> sources;
  std::vector<Sink> sinks;
};

struct Scenario {
  Mode mode = Mode::kBatch;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> t_end;
  std::string output_dir = "runs";
  std::vector<TraceFormat> formats{TraceFormat::kNdjson};
  bool inline_payloads = false;
  std::optional<WorkloadParams> workload;
  std::optional<BatchInstance> instance;
  std::optional<NetworkSpec> network;
  // The document after overrides. Its content (everything but output_dir)
  // is hashed to name the run directory and written as scenario.json.
  Value document;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> t_end;
  std::optional<std::string> out;
  std::optional<Mode> mode;
  std::optional<std::vector<TraceFormat>> formats;
};

// Parse or schema failure. what() reads "file:line:col: message" for
// syntax errors and "file: field.path: message" for schema errors.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Scenario parse_scenario(const Value& doc, const Overrides& overrides = {},
                        const std::string& file = "<scenario>");
Scenario parse_scenario_text(const std::string& text, const Overrides& overrides = {},
                             const std::string& file = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path, const Overrides& overrides = {});

// 16 hex digits identifying the scenario content (output_dir excluded).
std::string scenario_hash(const Scenario& s);

// The batch instance: generated from the workload or taken inline.
BatchInstance materialize_instance(const Scenario& s);

// Builds the network, realizing generated sources against `instance`.
Network build_network(const Scenario& s, const BatchInstance& instance);

// Sub-instance induced by the drained elements. An element whose refs or
// Requires targets did not arrive (directly or transitively) is deferred
// rather than partitioned.
struct DrainedInstance {
  BatchInstance instance;
  std::vector<ElementId> deferred;
};
DrainedInstance restrict_to_arrived(const BatchInstance& full,
                                    std::span<const Element> arrived);

struct RunArtifacts {
  std::filesystem::path dir;
  std::map<std::string, std::string> file_hashes;  // file name -> FNV-1a hex
};

// Executes the scenario and writes every artifact into a fresh directory
// <output_dir>/<hash>-s<seed>. Throws std::runtime_error if that directory
// already has content.
RunArtifacts run_scenario(const Scenario& s);

// Writes only the generated instance (and source streams) for inspection.
RunArtifacts generate_scenario(const Scenario& s);

// Greedy vs exhaustive comparison. Throws InstanceTooLarge above 20
// elements.
Value compare_with_oracle(const Scenario& s);

// Reads a trace export and returns summary_to_json of it.
Value summarize_trace_file(const std::filesystem::path& path,
                           std::optional<TraceFormat> format = std::nullopt);

std::string hash_file(const std::filesystem::path& path);

}  // namespace settlesim
