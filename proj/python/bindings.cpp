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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "settlesim/graph.hpp"
#include "settlesim/instance_json.hpp"
#include "settlesim/partition.hpp"
#include "settlesim/scenario.hpp"
#include "settlesim/timed_stream.hpp"
#include "settlesim/trace.hpp"
#include "settlesim/workload.hpp"

namespace py = pybind11;
using namespace settlesim;

namespace {

// JSON-compatible Python objects cross the boundary as text, so the C++ side
// sees exactly what the scenario files would give it.
Value to_value(const py::handle& obj) {
  const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return Value::parse(text);
}

py::object from_value(const Value& v) {
  return py::module_::import("json").attr("loads")(v.dump());
}

// Stream items are dicts: {"tick": t} is a hiaton, {"tick": t, "value": v}
// carries a payload.
TimedStream to_stream(const py::list& items) {
  TimedStream out;
  out.reserve(items.size());
  for (const auto& item : items) {
    const auto d = item.cast<py::dict>();
    const TimeTag tag{d["tick"].cast<std::uint64_t>()};
    if (d.contains("value")) {
      out.push_back(TimedItem::payload(tag, to_value(d["value"])));
    } else {
      out.push_back(make_hiaton(tag));
    }
  }
  return out;
}

py::list from_stream(const TimedStream& s) {
  py::list out;
  for (const auto& item : s) {
    py::dict d;
    d["tick"] = item.tag().tick;
    if (item.is_payload()) d["value"] = from_value(item.value());
    out.append(std::move(d));
  }
  return out;
}

py::list from_violations(const std::vector<Violation>& vs) {
  py::list out;
  for (const auto& v : vs) {
    py::dict d;
    d["code"] = v.code;
    d["message"] = v.message;
    out.append(std::move(d));
  }
  return out;
}

BatchInstance to_instance(const py::handle& obj) { return instance_from_json(to_value(obj)); }

Overrides make_overrides(std::optional<std::uint64_t> seed, std::optional<std::uint64_t> t_end,
                         std::optional<std::string> out, std::optional<std::string> mode,
                         std::optional<std::vector<std::string>> formats) {
  Overrides o;
  o.seed = seed;
  o.t_end = t_end;
  o.out = std::move(out);
  if (mode) o.mode = parse_mode(*mode);
  if (formats) {
    std::vector<TraceFormat> fs;
    for (const auto& f : *formats) fs.push_back(parse_trace_format(f));
    o.formats = std::move(fs);
  }
  return o;
}

// A scenario is either a path to a JSON file or the document itself.
Scenario to_scenario(const py::object& source, const Overrides& o) {
  if (py::isinstance<py::dict>(source)) return parse_scenario(to_value(source), o);
  return load_scenario(source.cast<std::filesystem::path>(), o);
}

py::dict from_artifacts(const RunArtifacts& a) {
  py::dict d;
  d["dir"] = a.dir.string();
  d["files"] = a.file_hashes;
  return d;
}

#define SCENARIO_ARGS                                                              \
  py::arg("scenario"), py::kw_only(), py::arg("seed") = py::none(),                \
      py::arg("t_end") = py::none(), py::arg("out") = py::none(),                  \
      py::arg("mode") = py::none(), py::arg("formats") = py::none()

using ScenarioCall = std::function<py::object(const Scenario&)>;

auto scenario_entry(ScenarioCall call) {
  return [call](const py::object& source, std::optional<std::uint64_t> seed,
                std::optional<std::uint64_t> t_end, std::optional<std::string> out,
                std::optional<std::string> mode,
                std::optional<std::vector<std::string>> formats) {
    return call(to_scenario(source, make_overrides(seed, t_end, std::move(out),
                                                   std::move(mode), std::move(formats))));
  };
}

}  // namespace

PYBIND11_MODULE(_settlesim, m) {
  m.doc() = "Deterministic settlement simulator";

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<InstanceTooLarge>(m, "InstanceTooLarge", PyExc_ValueError);
  py::register_exception<InvalidInstance>(m, "InvalidInstance", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });
  m.attr("ORACLE_MAX_ELEMENTS") = kOracleMaxElements;

  // Scenarios.
  m.def("run_scenario", scenario_entry([](const Scenario& s) -> py::object {
          return from_artifacts(run_scenario(s));
        }),
        SCENARIO_ARGS, "Execute a scenario and write its artifacts; returns {dir, files}.");
  m.def("generate_scenario", scenario_entry([](const Scenario& s) -> py::object {
          return from_artifacts(generate_scenario(s));
        }),
        SCENARIO_ARGS, "Write the materialized instance without running; returns {dir, files}.");
  m.def("compare", scenario_entry([](const Scenario& s) -> py::object {
          return from_value(compare_with_oracle(s));
        }),
        SCENARIO_ARGS, "Greedy partition against the exhaustive oracle.");
  m.def("scenario_hash", scenario_entry([](const Scenario& s) -> py::object {
          return py::str(scenario_hash(s));
        }),
        SCENARIO_ARGS, "Content hash naming the run directory.");
  m.def("materialize_instance", scenario_entry([](const Scenario& s) -> py::object {
          return from_value(instance_to_json(materialize_instance(s)));
        }),
        SCENARIO_ARGS, "The batch instance a scenario describes.");
  m.def(
      "summarize_trace_file",
      [](const std::filesystem::path& path, std::optional<std::string> format) {
        std::optional<TraceFormat> f;
        if (format) f = parse_trace_format(*format);
        return from_value(summarize_trace_file(path, f));
      },
      py::arg("path"), py::arg("format") = py::none(),
      "Summary of an exported trace; the format defaults to the file extension.");
  m.def(
      "summarize_trace",
      [](const std::string& text, const std::string& format) {
        return from_value(summary_to_json(summarize(import_trace(text, parse_trace_format(format)))));
      },
      py::arg("text"), py::arg("format"), "Summary of trace text in 'ndjson' or 'csv'.");
  m.def(
      "convert_trace",
      [](const std::string& text, const std::string& from, const std::string& to) {
        return export_trace(import_trace(text, parse_trace_format(from)), parse_trace_format(to));
      },
      py::arg("text"), py::arg("from_format"), py::arg("to_format"),
      "Re-export a trace in another format.");

  // Workload generation.
  m.def(
      "next_random",
      [](std::uint64_t state) {
        const auto [next, value] = next_random(RngState{state});
        return py::make_tuple(next.state, value);
      },
      py::arg("state"), "One splitmix64 step: (next_state, output).");
  m.def(
      "gen_elements",
      [](const py::dict& params) {
        return from_value(instance_to_json(gen_elements(params_from_json(to_value(params)))));
      },
      py::arg("params"), "Generate a batch instance from workload parameters.");
  m.def(
      "gen_event_stream",
      [](const py::dict& params, std::uint64_t t_end, std::uint64_t stream) {
        return from_stream(gen_event_stream(params_from_json(to_value(params)), t_end, stream));
      },
      py::arg("params"), py::arg("t_end"), py::arg("stream") = 0,
      "Dense event stream over ticks 0..t_end.");

  // Partitioning.
  m.def(
      "validate_instance",
      [](const py::object& instance) { return from_violations(validate_system(to_instance(instance))); },
      py::arg("instance"), "Structural problems of an instance; empty when valid.");
  m.def(
      "select_partition",
      [](const py::object& instance) {
        return from_value(partition_to_json(select_partition(to_instance(instance))));
      },
      py::arg("instance"), "Greedy partition into accepted and rejected elements.");
  m.def(
      "exhaustive_oracle",
      [](const py::object& instance) {
        return from_value(partition_to_json(exhaustive_oracle(to_instance(instance))));
      },
      py::arg("instance"), "Exact optimum by enumeration (small instances only).");
  m.def(
      "check_feasibility",
      [](const py::object& instance, std::vector<ElementId> accepted,
         std::vector<ElementId> rejected) {
        Partition p;
        p.accepted = std::move(accepted);
        p.rejected = std::move(rejected);
        return from_violations(check_feasibility(p, to_instance(instance)));
      },
      py::arg("instance"), py::arg("accepted"), py::arg("rejected"),
      "Constraint and atomicity violations of a proposed partition.");
  m.def(
      "tarjan_scc",
      [](std::vector<ElementId> nodes, const std::vector<std::pair<ElementId, ElementId>>& edges) {
        std::vector<std::vector<ElementId>> out;
        for (auto& g : tarjan_scc(DependencyGraph(std::move(nodes), edges))) {
          out.push_back(std::move(g.members));
        }
        return out;
      },
      py::arg("nodes"), py::arg("edges"),
      "Strongly connected components in reverse topological order.");

  // Streams.
  m.def(
      "merge",
      [](const py::list& a, const py::list& b) { return from_stream(merge(to_stream(a), to_stream(b))); },
      py::arg("a"), py::arg("b"), "Tag-ordered merge; ties take the left item first.");
  m.def(
      "shift",
      [](const py::list& s, std::uint64_t delay) { return from_stream(shift(to_stream(s), delay)); },
      py::arg("stream"), py::arg("delay"), "Delay every item by the given number of ticks.");
  m.def(
      "strip_hiatons", [](const py::list& s) { return from_stream(strip_hiatons(to_stream(s))); },
      py::arg("stream"), "Drop hiatons, keeping payloads in order.");
  m.def(
      "is_dense", [](const py::list& s) { return is_dense(to_stream(s)); }, py::arg("stream"),
      "True when the stream holds exactly one item per tick from 0.");
}
