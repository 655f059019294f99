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

#include "settlesim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "settlesim/components.hpp"
#include "settlesim/hash.hpp"
#include "settlesim/instance_json.hpp"
#include "settlesim/schema.hpp"

namespace settlesim {

using namespace schema;
namespace fs = std::filesystem;

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kRealtime:
      return "realtime";
    case Mode::kBatch:
      return "batch";
    case Mode::kBoth:
      return "both";
  }
  return "batch";
}

Mode parse_mode(std::string_view s) {
  if (s == "realtime") return Mode::kRealtime;
  if (s == "batch") return Mode::kBatch;
  if (s == "both") return Mode::kBoth;
  throw std::invalid_argument("unknown mode '" + std::string(s) +
                              "' (expected realtime, batch or both)");
}

namespace {

PortRef port_from_json(const Value& v, const std::string& path) {
  try {
    return parse_port_ref(as_string(v, path));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& err) {
    throw SchemaError(path, err.what());
  }
}

std::uint64_t delay_from_json(const Value& obj, const std::string& path) {
  const Value* d = schema::optional(obj, "delay");
  if (!d) return 1;
  const std::uint64_t delay = as_uint(*d, child(path, "delay"));
  if (delay < 1) throw SchemaError(child(path, "delay"), "delay must be >= 1");
  return delay;
}

NetworkSpec network_from_json(const Value& v, const std::string& path) {
  only_keys(v, path, {"components", "channels", "sources", "sinks"});
  NetworkSpec spec;

  const std::string cp = child(path, "components");
  const Value& comps = array(required(v, path, "components"), cp);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string p = index(cp, i);
    only_keys(comps[i], p, {"id", "kind", "params"});
    ComponentSpec c;
    c.id = as_string(required(comps[i], p, "id"), child(p, "id"));
    c.kind = as_string(required(comps[i], p, "kind"), child(p, "kind"));
    if (const Value* params = schema::optional(comps[i], "params")) c.params = *params;
    try {
      components::make_builtin(c.id, c.kind, c.params);
    } catch (const SchemaError& err) {
      throw SchemaError(child(p, err.path()), err.what());
    } catch (const std::invalid_argument& err) {
      throw SchemaError(child(p, "kind"), err.what());
    }
    spec.components.push_back(std::move(c));
  }

  if (const Value* chans = schema::optional(v, "channels")) {
    const std::string chp = child(path, "channels");
    array(*chans, chp);
    for (std::size_t i = 0; i < chans->size(); ++i) {
      const std::string p = index(chp, i);
      const Value& ch = (*chans)[i];
      only_keys(ch, p, {"from", "to", "delay"});
      spec.channels.push_back(Channel{port_from_json(required(ch, p, "from"), child(p, "from")),
                                      port_from_json(required(ch, p, "to"), child(p, "to")),
                                      delay_from_json(ch, p)});
    }
  }

  if (const Value* sources = schema::optional(v, "sources")) {
    const std::string sp = child(path, "sources");
    array(*sources, sp);
    for (std::size_t i = 0; i < sources->size(); ++i) {
      const std::string p = index(sp, i);
      const Value& s = (*sources)[i];
      only_keys(s, p, {"to", "items", "frequency", "stream", "elements"});
      SourceSpec src;
      src.to = port_from_json(required(s, p, "to"), child(p, "to"));
      if (const Value* items = schema::optional(s, "items")) {
        if (s.contains("frequency") || s.contains("stream") || s.contains("elements")) {
          throw SchemaError(p, "explicit items exclude frequency, stream and elements");
        }
        array(*items, child(p, "items"));
        TimedStream stream;
        for (std::size_t k = 0; k < items->size(); ++k) {
          const Value& item = (*items)[k];
          stream.push_back(item.is_null() ? make_hiaton(TimeTag{k})
                                          : TimedItem::payload(TimeTag{k}, item));
        }
        src.items = std::move(stream);
      } else {
        if (const Value* f = schema::optional(s, "frequency")) {
          const std::string fp = child(p, "frequency");
          const double x = as_number(*f, fp);
          try {
            src.frequency = rational_from_double(x);
          } catch (const std::invalid_argument& err) {
            throw SchemaError(fp, err.what());
          }
        }
        if (const Value* st = schema::optional(s, "stream")) {
          src.stream = as_uint(*st, child(p, "stream"));
        } else {
          src.stream = i;
        }
        if (const Value* el = schema::optional(s, "elements")) {
          src.elements = as_bool(*el, child(p, "elements"));
        }
      }
      spec.sources.push_back(std::move(src));
    }
  }

  if (const Value* sinks = schema::optional(v, "sinks")) {
    const std::string kp = child(path, "sinks");
    array(*sinks, kp);
    for (std::size_t i = 0; i < sinks->size(); ++i) {
      const std::string p = index(kp, i);
      const Value& s = (*sinks)[i];
      only_keys(s, p, {"id", "from", "delay"});
      spec.sinks.push_back(Sink{as_string(required(s, p, "id"), child(p, "id")),
                                port_from_json(required(s, p, "from"), child(p, "from")),
                                delay_from_json(s, p)});
    }
  }
  return spec;
}

Network skeleton(const NetworkSpec& spec) {
  Network net;
  for (const auto& c : spec.components) {
    net.components.push_back(components::make_builtin(c.id, c.kind, c.params));
  }
  net.channels = spec.channels;
  for (const auto& s : spec.sources) net.sources.push_back(Source{s.to, {}});
  net.sinks = spec.sinks;
  return net;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Scenario parse_document(Value doc, const Overrides& ov) {
  object(doc, "");
  if (ov.seed) {
    doc["seed"] = *ov.seed;
    if (doc.contains("workload") && doc["workload"].is_object()) doc["workload"]["seed"] = *ov.seed;
  }
  if (ov.t_end) doc["t_end"] = *ov.t_end;
  if (ov.out) doc["output_dir"] = *ov.out;
  if (ov.mode) doc["mode"] = to_string(*ov.mode);
  if (ov.formats) {
    Value f = Value::array();
    for (auto x : *ov.formats) f.push_back(to_string(x));
    doc["formats"] = std::move(f);
  }

  only_keys(doc, "", {"mode", "seed", "t_end", "output_dir", "formats", "inline_payloads",
                      "workload", "instance", "network"});
  Scenario s;
  try {
    s.mode = parse_mode(as_string(required(doc, "", "mode"), "mode"));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& err) {
    throw SchemaError("mode", err.what());
  }
  if (const Value* v = schema::optional(doc, "seed")) s.seed = as_uint(*v, "seed");
  if (const Value* v = schema::optional(doc, "t_end")) s.t_end = as_uint(*v, "t_end");
  if (const Value* v = schema::optional(doc, "output_dir")) {
    s.output_dir = as_string(*v, "output_dir");
  }
  if (const Value* v = schema::optional(doc, "formats")) {
    array(*v, "formats");
    s.formats.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      try {
        s.formats.push_back(parse_trace_format(as_string((*v)[i], index("formats", i))));
      } catch (const SchemaError&) {
        throw;
      } catch (const std::invalid_argument& err) {
        throw SchemaError(index("formats", i), err.what());
      }
    }
  }
  if (const Value* v = schema::optional(doc, "inline_payloads")) {
    s.inline_payloads = as_bool(*v, "inline_payloads");
  }

  const bool has_workload = doc.contains("workload");
  const bool has_instance = doc.contains("instance");
  if (has_workload == has_instance) {
    throw SchemaError(has_workload ? "instance" : "workload",
                      "exactly one of 'workload' and 'instance' must be given");
  }
  if (has_workload) {
    if (doc["workload"].is_object() && !doc["workload"].contains("seed")) {
      doc["workload"]["seed"] = s.seed;
    }
    s.workload = params_from_json(doc["workload"], "workload");
  } else {
    s.instance = instance_from_json(doc["instance"], "instance");
    if (auto v = validate_system(*s.instance); !v.empty()) {
      throw SchemaError("instance", "[" + v.front().code + "] " + v.front().message);
    }
  }

  if (const Value* v = schema::optional(doc, "network")) {
    s.network = network_from_json(*v, "network");
    if (auto problems = validate_network(skeleton(*s.network)); !problems.empty()) {
      throw SchemaError("network", "[" + problems.front().code + "] " + problems.front().message);
    }
  }
  if (s.mode != Mode::kBatch) {
    if (!s.network) throw SchemaError("network", "required for realtime and both modes");
    if (!s.t_end) throw SchemaError("t_end", "required for realtime and both modes");
  }
  s.document = std::move(doc);
  return s;
}

}  // namespace

Scenario parse_scenario(const Value& doc, const Overrides& overrides, const std::string& file) {
  try {
    return parse_document(doc, overrides);
  } catch (const SchemaError& err) {
    throw ScenarioError(file + ": " + std::string(err.what()));
  }
}

Scenario parse_scenario_text(const std::string& text, const Overrides& overrides,
                             const std::string& file) {
  Value doc;
  try {
    doc = Value::parse(text);
  } catch (const Value::parse_error& err) {
    auto [line, col] = line_col(text, err.byte == 0 ? 0 : err.byte - 1);
    throw ScenarioError(file + ":" + std::to_string(line) + ":" + std::to_string(col) +
                        ": JSON syntax error: " + err.what());
  }
  return parse_scenario(doc, overrides, file);
}

Scenario load_scenario(const fs::path& path, const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), overrides, path.string());
}

namespace {

// The document minus where it is written, which is not part of its content.
Value content_of(const Scenario& s) {
  Value doc = s.document;
  doc.erase("output_dir");
  return doc;
}

}  // namespace

std::string scenario_hash(const Scenario& s) { return to_hex(fnv1a(content_of(s).dump())); }

BatchInstance materialize_instance(const Scenario& s) {
  if (s.instance) return *s.instance;
  if (s.workload) return gen_elements(*s.workload);
  return {};
}

Network build_network(const Scenario& s, const BatchInstance& instance) {
  if (!s.network) throw NetworkError("scenario has no network");
  const NetworkSpec& spec = *s.network;
  const std::uint64_t t_end = s.t_end.value_or(0);
  Network net;
  for (const auto& c : spec.components) {
    add_component(net, components::make_builtin(c.id, c.kind, c.params));
  }
  for (const auto& ch : spec.channels) connect(net, ch.from, ch.to, ch.delay);

  WorkloadParams base = s.workload.value_or(WorkloadParams{});
  if (!s.workload) base.seed = s.seed;
  std::size_t next_element = 0;
  for (const auto& src : spec.sources) {
    if (src.items) {
      bind_source(net, src.to, *src.items);
      continue;
    }
    WorkloadParams p = base;
    if (src.frequency) p.event_frequency = *src.frequency;
    TimedStream stream = gen_event_stream(p, t_end, src.stream);
    if (src.elements) {
      // Element sources share the instance: each takes the next unsent ones.
      std::span<const Element> rest(instance.elements);
      rest = rest.subspan(std::min(next_element, rest.size()));
      const std::size_t payloads = stream.size() - count_hiatons(stream);
      stream = attach_elements(stream, rest);
      next_element += std::min(payloads, rest.size());
    }
    bind_source(net, src.to, std::move(stream));
  }
  for (const auto& sk : spec.sinks) expose_sink(net, sk.id, sk.from, sk.delay);
  return net;
}

DrainedInstance restrict_to_arrived(const BatchInstance& full,
                                    std::span<const Element> arrived) {
  std::unordered_set<ElementId> present;
  std::unordered_set<ElementId> known;
  for (const auto& e : full.elements) known.insert(e.id);
  for (const auto& e : arrived) {
    if (known.count(e.id)) present.insert(e.id);
  }

  std::unordered_map<ElementId, std::vector<ElementId>> needs;
  for (const auto& e : full.elements) needs[e.id] = e.refs;
  for (const auto& c : full.constraints) {
    if (const auto* r = std::get_if<Requires>(&c)) needs[r->a].push_back(r->b);
  }
  // Defer anything whose dependencies are missing, to a fixpoint.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : full.elements) {
      if (!present.count(e.id)) continue;
      for (ElementId d : needs[e.id]) {
        if (!present.count(d)) {
          present.erase(e.id);
          changed = true;
          break;
        }
      }
    }
  }

  DrainedInstance out;
  for (const auto& e : full.elements) {
    if (present.count(e.id)) {
      out.instance.elements.push_back(e);
    }
  }
  std::set<ElementId> arrived_ids;
  for (const auto& e : arrived) {
    if (known.count(e.id) && !present.count(e.id)) arrived_ids.insert(e.id);
  }
  out.deferred.assign(arrived_ids.begin(), arrived_ids.end());

  out.instance.system.queue_precedence = full.system.queue_precedence;
  for (const auto& q : full.system.queues) {
    Queue r{q.id, {}, {}};
    for (ElementId m : q.members) {
      if (present.count(m)) r.members.push_back(m);
    }
    for (const auto& [a, b] : q.precedence) {
      if (present.count(a) && present.count(b)) r.precedence.emplace_back(a, b);
    }
    out.instance.system.queues.push_back(std::move(r));
  }
  out.instance.groups = full.groups;
  for (const auto& c : full.constraints) {
    if (const auto* r = std::get_if<Requires>(&c)) {
      if (present.count(r->a) && present.count(r->b)) out.instance.constraints.push_back(c);
    } else if (const auto* x = std::get_if<Excludes>(&c)) {
      if (present.count(x->a) && present.count(x->b)) out.instance.constraints.push_back(c);
    } else {
      Capacity cap = std::get<Capacity>(c);
      std::erase_if(cap.usage, [&](const auto& kv) { return !present.count(kv.first); });
      out.instance.constraints.push_back(std::move(cap));
    }
  }
  return out;
}

std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  Fnv1a h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h.update(std::string_view(buf, static_cast<std::size_t>(in.gcount())));
  }
  return to_hex(h.value());
}

namespace {

class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {
    if (fs::exists(dir_) && !fs::is_empty(dir_)) {
      throw std::runtime_error("run directory '" + dir_.string() +
                               "' already exists; refusing to overwrite");
    }
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
      throw std::runtime_error("cannot create '" + dir_.string() + "': " + ec.message());
    }
  }

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + (dir_ / name).string() + "'");
    names_.push_back(name);
    return out;
  }

  void json(const std::string& name, const Value& v) {
    auto out = open(name);
    out << v.dump(2) << '\n';
    check(out, name);
  }

  void check(std::ofstream& out, const std::string& name) {
    out.flush();
    if (!out) throw std::runtime_error("write to '" + (dir_ / name).string() + "' failed");
  }

  RunArtifacts finish() {
    RunArtifacts a;
    a.dir = dir_;
    for (const auto& n : names_) a.file_hashes[n] = hash_file(dir_ / n);
    Value manifest = Value::object();
    for (const auto& [n, h] : a.file_hashes) manifest[n] = h;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("cannot write manifest");
    return a;
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

fs::path run_dir(const Scenario& s) {
  return fs::path(s.output_dir) / (scenario_hash(s).substr(0, 12) + "-s" + std::to_string(s.seed));
}

Value topology_json(const Network& net) {
  Value comps = Value::array();
  for (const auto& c : net.components) {
    comps.push_back({{"id", c.id}, {"in_ports", c.in_ports}, {"out_ports", c.out_ports}});
  }
  Value chans = Value::array();
  for (const auto& ch : net.channels) {
    chans.push_back({{"from", to_string(ch.from)}, {"to", to_string(ch.to)}, {"delay", ch.delay}});
  }
  Value sinks = Value::array();
  for (const auto& s : net.sinks) {
    sinks.push_back({{"id", s.id}, {"from", to_string(s.from)}, {"delay", s.delay}});
  }
  return {{"components", std::move(comps)}, {"channels", std::move(chans)},
          {"sinks", std::move(sinks)}};
}

}  // namespace

RunArtifacts run_scenario(const Scenario& s) {
  const BatchInstance instance = materialize_instance(s);
  ArtifactWriter w(run_dir(s));
  w.json("scenario.json", content_of(s));

  std::optional<RunResult> rt;
  if (s.mode != Mode::kBatch) {
    const Network net = build_network(s, instance);
    rt = run_realtime(net, TimeTag{*s.t_end}, RunOptions{true, s.inline_payloads});
    for (TraceFormat f : s.formats) {
      const std::string name = "trace." + std::string(to_string(f));
      auto out = w.open(name);
      export_trace(rt->trace, f, out);
      w.check(out, name);
    }
    Value summary = summary_to_json(summarize(rt->trace));
    Value sink_counts = Value::object();
    for (const auto& [id, stream] : rt->sinks) {
      const auto h = count_hiatons(stream);
      sink_counts[id] = {{"payloads", stream.size() - h}, {"hiatons", h}};
    }
    summary["sinks"] = std::move(sink_counts);
    w.json("summary.json", summary);
    {
      auto out = w.open("frames.ndjson");
      for (const auto& f : animation_frames(rt->trace, net.channels, net.sinks)) {
        out << frame_to_json(f).dump() << '\n';
      }
      w.check(out, "frames.ndjson");
    }
    {
      auto out = w.open("sinks.ndjson");
      for (const auto& [id, stream] : rt->sinks) {
        for (const auto& item : stream) {
          if (item.is_payload()) {
            out << Value{{"sink", id}, {"tick", item.tag().tick}, {"payload", item.value()}}.dump()
                << '\n';
          }
        }
      }
      w.check(out, "sinks.ndjson");
    }
    w.json("topology.json", topology_json(net));
  }

  if (s.mode == Mode::kBatch) {
    w.json("partition.json", partition_to_json(select_partition(instance)));
  } else if (s.mode == Mode::kBoth) {
    const auto arrived = drain(*rt);
    const DrainedInstance batch = restrict_to_arrived(instance, arrived);
    Value report = partition_to_json(select_partition(batch.instance));
    report["arrived"] = arrived.size();
    report["deferred"] = batch.deferred;
    w.json("partition.json", report);
  }
  return w.finish();
}

RunArtifacts generate_scenario(const Scenario& s) {
  const BatchInstance instance = materialize_instance(s);
  ArtifactWriter w(run_dir(s));
  w.json("scenario.json", content_of(s));
  w.json("instance.json", instance_to_json(instance));
  if (s.network && s.t_end) {
    const Network net = build_network(s, instance);
    auto out = w.open("sources.ndjson");
    for (const auto& src : net.sources) {
      for (const auto& item : src.stream) {
        Value rec{{"to", to_string(src.to)}, {"tick", item.tag().tick}};
        if (item.is_payload()) rec["payload"] = item.value();
        out << rec.dump() << '\n';
      }
    }
    w.check(out, "sources.ndjson");
  }
  return w.finish();
}

Value compare_with_oracle(const Scenario& s) {
  const BatchInstance instance = materialize_instance(s);
  if (instance.elements.size() > kOracleMaxElements) {
    throw InstanceTooLarge(instance.elements.size(), kOracleMaxElements);
  }
  const Partition greedy = select_partition(instance);
  const Partition oracle = exhaustive_oracle(instance);
  double ratio = 1.0;
  if (oracle.aggregate != 0) {
    ratio = static_cast<double>(greedy.aggregate) / static_cast<double>(oracle.aggregate);
  } else if (greedy.aggregate != 0) {
    ratio = 0.0;
  }
  return {{"elements", instance.elements.size()},
          {"greedy_aggregate", greedy.aggregate},
          {"oracle_aggregate", oracle.aggregate},
          {"gap", oracle.aggregate - greedy.aggregate},
          {"ratio", ratio},
          {"greedy_optimal", greedy.aggregate == oracle.aggregate},
          {"greedy", partition_to_json(greedy)},
          {"oracle", partition_to_json(oracle)}};
}

Value summarize_trace_file(const fs::path& path, std::optional<TraceFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace '" + path.string() + "'");
  TraceFormat f = format.value_or(path.extension() == ".csv" ? TraceFormat::kCsv
                                                             : TraceFormat::kNdjson);
  return summary_to_json(summarize(import_trace(in, f)));
}

}  // namespace settlesim
