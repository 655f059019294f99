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

#include "settlesim/instance_json.hpp"

#include <charconv>
#include <map>

namespace settlesim {

using namespace schema;

namespace {

std::vector<OrderedPair> pairs_from_json(const Value& v, const std::string& path) {
  std::vector<OrderedPair> out;
  array(v, path);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = index(path, i);
    if (!v[i].is_array() || v[i].size() != 2) {
      throw SchemaError(p, "expected a pair [earlier, later]");
    }
    out.emplace_back(as_u32(v[i][0], index(p, 0)), as_u32(v[i][1], index(p, 1)));
  }
  return out;
}

Value pairs_to_json(const std::vector<OrderedPair>& pairs) {
  Value out = Value::array();
  for (const auto& [a, b] : pairs) out.push_back({a, b});
  return out;
}

std::uint32_t parse_id_key(const std::string& key, const std::string& path) {
  std::uint32_t id{};
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
  if (ec != std::errc() || ptr != key.data() + key.size() || key.empty()) {
    throw SchemaError(child(path, key), "usage keys must be element ids");
  }
  return id;
}

}  // namespace

Value element_to_json(const Element& e) {
  return Value{{"id", e.id}, {"value", e.value}, {"queue", e.queue}, {"refs", e.refs}};
}

Element element_from_json(const Value& v, const std::string& path) {
  only_keys(v, path, {"id", "value", "queue", "refs"});
  Element e;
  e.id = as_u32(required(v, path, "id"), child(path, "id"));
  e.value = as_int(required(v, path, "value"), child(path, "value"));
  e.queue = as_u32(required(v, path, "queue"), child(path, "queue"));
  if (const Value* refs = schema::optional(v, "refs")) {
    const std::string rp = child(path, "refs");
    array(*refs, rp);
    for (std::size_t i = 0; i < refs->size(); ++i) {
      e.refs.push_back(as_u32((*refs)[i], index(rp, i)));
    }
  }
  return e;
}

Value constraint_to_json(const Constraint& c) {
  if (const auto* r = std::get_if<Requires>(&c)) {
    return {{"type", "requires"}, {"a", r->a}, {"b", r->b}};
  }
  if (const auto* x = std::get_if<Excludes>(&c)) {
    return {{"type", "excludes"}, {"a", x->a}, {"b", x->b}};
  }
  const auto& cap = std::get<Capacity>(c);
  Value usage = Value::object();
  for (const auto& [id, use] : cap.usage) usage[std::to_string(id)] = use;
  return {{"type", "capacity"},
          {"resource", cap.resource},
          {"usage", std::move(usage)},
          {"bound", cap.bound}};
}

Constraint constraint_from_json(const Value& v, const std::string& path,
                                std::span<const Element> elements) {
  object(v, path);
  const std::string type = as_string(required(v, path, "type"), child(path, "type"));
  if (type == "requires" || type == "excludes") {
    only_keys(v, path, {"type", "a", "b"});
    const auto a = as_u32(required(v, path, "a"), child(path, "a"));
    const auto b = as_u32(required(v, path, "b"), child(path, "b"));
    if (type == "requires") return Requires{a, b};
    return Excludes{a, b};
  }
  if (type != "capacity") {
    throw SchemaError(child(path, "type"),
                      "unknown constraint type '" + type +
                          "' (expected requires, excludes or capacity)");
  }
  only_keys(v, path, {"type", "resource", "usage", "bound"});
  Capacity cap;
  cap.resource = as_string(required(v, path, "resource"), child(path, "resource"));
  cap.bound = as_int(required(v, path, "bound"), child(path, "bound"));
  const std::string up = child(path, "usage");
  const Value& usage = required(v, path, "usage");
  if (usage.is_string()) {
    if (usage.get<std::string>() != "value") {
      throw SchemaError(up, "the only usage shorthand is \"value\"");
    }
    for (const auto& e : elements) {
      if (e.value != 0) cap.usage.emplace(e.id, e.value);
    }
  } else {
    object(usage, up);
    for (const auto& [key, use] : usage.items()) {
      cap.usage.emplace(parse_id_key(key, up), as_int(use, child(up, key)));
    }
  }
  return cap;
}

Value instance_to_json(const BatchInstance& inst) {
  Value elements = Value::array();
  for (const auto& e : inst.elements) elements.push_back(element_to_json(e));
  Value queues = Value::array();
  for (const auto& q : inst.system.queues) {
    queues.push_back({{"id", q.id},
                      {"members", q.members},
                      {"precedence", pairs_to_json(q.precedence)}});
  }
  Value groups = Value::array();
  for (const auto& g : inst.groups) {
    groups.push_back({{"id", g.id}, {"queues", g.queues}, {"rule", rule_name(g.rule)}});
  }
  Value constraints = Value::array();
  for (const auto& c : inst.constraints) constraints.push_back(constraint_to_json(c));
  return {{"elements", std::move(elements)},
          {"queues", std::move(queues)},
          {"queue_precedence", pairs_to_json(inst.system.queue_precedence)},
          {"groups", std::move(groups)},
          {"constraints", std::move(constraints)}};
}

BatchInstance instance_from_json(const Value& v, const std::string& path) {
  only_keys(v, path, {"elements", "queues", "queue_precedence", "groups", "constraints"});
  BatchInstance inst;

  const std::string ep = child(path, "elements");
  const Value& elements = array(required(v, path, "elements"), ep);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    inst.elements.push_back(element_from_json(elements[i], index(ep, i)));
  }

  if (const Value* queues = schema::optional(v, "queues")) {
    const std::string qp = child(path, "queues");
    array(*queues, qp);
    for (std::size_t i = 0; i < queues->size(); ++i) {
      const std::string p = index(qp, i);
      const Value& q = (*queues)[i];
      only_keys(q, p, {"id", "members", "precedence"});
      Queue queue;
      queue.id = as_u32(required(q, p, "id"), child(p, "id"));
      const std::string mp = child(p, "members");
      const Value& members = array(required(q, p, "members"), mp);
      for (std::size_t j = 0; j < members.size(); ++j) {
        queue.members.push_back(as_u32(members[j], index(mp, j)));
      }
      if (const Value* prec = schema::optional(q, "precedence")) {
        queue.precedence = pairs_from_json(*prec, child(p, "precedence"));
      }
      inst.system.queues.push_back(std::move(queue));
    }
  } else {
    // Queues implied by the elements, members in element order.
    std::map<QueueId, Queue> implied;
    for (const auto& e : inst.elements) {
      auto& q = implied[e.queue];
      q.id = e.queue;
      q.members.push_back(e.id);
    }
    for (auto& [_, q] : implied) inst.system.queues.push_back(std::move(q));
  }

  if (const Value* qp = schema::optional(v, "queue_precedence")) {
    inst.system.queue_precedence = pairs_from_json(*qp, child(path, "queue_precedence"));
  }

  if (const Value* groups = schema::optional(v, "groups")) {
    const std::string gp = child(path, "groups");
    array(*groups, gp);
    for (std::size_t i = 0; i < groups->size(); ++i) {
      const std::string p = index(gp, i);
      const Value& g = (*groups)[i];
      only_keys(g, p, {"id", "queues", "rule"});
      QueueGroup group;
      group.id = as_u32(required(g, p, "id"), child(p, "id"));
      const std::string qlp = child(p, "queues");
      const Value& qs = array(required(g, p, "queues"), qlp);
      for (std::size_t j = 0; j < qs.size(); ++j) {
        group.queues.push_back(as_u32(qs[j], index(qlp, j)));
      }
      if (const Value* rule = schema::optional(g, "rule")) {
        try {
          group.rule = parse_rule(as_string(*rule, child(p, "rule")));
        } catch (const SchemaError&) {
          throw;
        } catch (const std::invalid_argument& err) {
          throw SchemaError(child(p, "rule"), err.what());
        }
      }
      inst.groups.push_back(std::move(group));
    }
  } else if (!inst.system.queues.empty()) {
    QueueGroup all;
    for (const auto& q : inst.system.queues) all.queues.push_back(q.id);
    inst.groups.push_back(std::move(all));
  }

  if (const Value* cs = schema::optional(v, "constraints")) {
    const std::string cp = child(path, "constraints");
    array(*cs, cp);
    for (std::size_t i = 0; i < cs->size(); ++i) {
      inst.constraints.push_back(constraint_from_json((*cs)[i], index(cp, i), inst.elements));
    }
  }
  return inst;
}

Value partition_to_json(const Partition& p) {
  Value violations = Value::array();
  for (const auto& v : p.violations) {
    violations.push_back({{"code", v.code}, {"message", v.message}});
  }
  return {{"accepted", p.accepted},
          {"rejected", p.rejected},
          {"aggregate", p.aggregate},
          {"violations", std::move(violations)}};
}

Value params_to_json(const WorkloadParams& p) {
  Value groups = Value::array();
  for (const auto& g : p.groups) groups.push_back(rule_name(g.rule));
  Value caps = Value::array();
  for (const auto& c : p.capacities) {
    caps.push_back({{"resource", c.resource},
                    {"usage_range", {c.usage_min, c.usage_max}},
                    {"bound", c.bound}});
  }
  return {{"seed", p.seed},
          {"event_frequency",
           std::to_string(p.event_frequency.num) + "/" + std::to_string(p.event_frequency.den)},
          {"element_count", p.element_count},
          {"value_range", {p.value_min, p.value_max}},
          {"ref_density", p.ref_density},
          {"queue_count", p.queue_count},
          {"groups", std::move(groups)},
          {"requires_density", p.requires_density},
          {"excludes_density", p.excludes_density},
          {"precedence_density", p.precedence_density},
          {"queue_precedence_probability", p.queue_precedence_probability},
          {"capacities", std::move(caps)}};
}

namespace {

Rational frequency_from_json(const Value& v, const std::string& path) {
  if (v.is_number()) {
    try {
      return rational_from_double(v.get<double>());
    } catch (const std::invalid_argument& err) {
      throw SchemaError(path, err.what());
    }
  }
  const std::string s = as_string(v, path);
  const auto slash = s.find('/');
  Rational r;
  auto parse = [&](std::string_view part, std::uint64_t& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return ec == std::errc() && ptr == part.data() + part.size() && !part.empty();
  };
  const std::string_view sv(s);
  if (slash == std::string::npos || !parse(sv.substr(0, slash), r.num) ||
      !parse(sv.substr(slash + 1), r.den) || r.den == 0 || r.num > r.den) {
    throw SchemaError(path, "expected a probability in [0, 1] as a number or \"num/den\"");
  }
  return r;
}

std::pair<std::int64_t, std::int64_t> range_from_json(const Value& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw SchemaError(path, "expected [min, max]");
  return {as_int(v[0], index(path, 0)), as_int(v[1], index(path, 1))};
}

}  // namespace

WorkloadParams params_from_json(const Value& v, const std::string& path) {
  only_keys(v, path,
            {"seed", "event_frequency", "element_count", "value_range", "ref_density",
             "queue_count", "groups", "requires_density", "excludes_density",
             "precedence_density", "queue_precedence_probability", "capacities"});
  WorkloadParams p;
  auto field = [&](std::string_view key) { return child(path, key); };
  if (const Value* x = schema::optional(v, "seed")) p.seed = as_uint(*x, field("seed"));
  if (const Value* x = schema::optional(v, "event_frequency")) {
    p.event_frequency = frequency_from_json(*x, field("event_frequency"));
  }
  if (const Value* x = schema::optional(v, "element_count")) {
    p.element_count = as_uint(*x, field("element_count"));
  }
  if (const Value* x = schema::optional(v, "value_range")) {
    std::tie(p.value_min, p.value_max) = range_from_json(*x, field("value_range"));
  }
  if (const Value* x = schema::optional(v, "ref_density")) {
    p.ref_density = as_number(*x, field("ref_density"));
  }
  if (const Value* x = schema::optional(v, "queue_count")) {
    p.queue_count = as_uint(*x, field("queue_count"));
  }
  if (const Value* x = schema::optional(v, "groups")) {
    const std::string gp = field("groups");
    array(*x, gp);
    for (std::size_t i = 0; i < x->size(); ++i) {
      try {
        p.groups.push_back(GroupSpec{parse_rule(as_string((*x)[i], index(gp, i)))});
      } catch (const SchemaError&) {
        throw;
      } catch (const std::invalid_argument& err) {
        throw SchemaError(index(gp, i), err.what());
      }
    }
  }
  if (const Value* x = schema::optional(v, "requires_density")) {
    p.requires_density = as_number(*x, field("requires_density"));
  }
  if (const Value* x = schema::optional(v, "excludes_density")) {
    p.excludes_density = as_number(*x, field("excludes_density"));
  }
  if (const Value* x = schema::optional(v, "precedence_density")) {
    p.precedence_density = as_number(*x, field("precedence_density"));
  }
  if (const Value* x = schema::optional(v, "queue_precedence_probability")) {
    p.queue_precedence_probability = as_number(*x, field("queue_precedence_probability"));
  }
  if (const Value* x = schema::optional(v, "capacities")) {
    const std::string cp = field("capacities");
    array(*x, cp);
    for (std::size_t i = 0; i < x->size(); ++i) {
      const std::string ip = index(cp, i);
      const Value& c = (*x)[i];
      only_keys(c, ip, {"resource", "usage_range", "bound"});
      CapacitySpec spec;
      spec.resource = as_string(required(c, ip, "resource"), child(ip, "resource"));
      std::tie(spec.usage_min, spec.usage_max) =
          range_from_json(required(c, ip, "usage_range"), child(ip, "usage_range"));
      spec.bound = as_int(required(c, ip, "bound"), child(ip, "bound"));
      p.capacities.push_back(std::move(spec));
    }
  }
  if (auto problems = check_params(p); !problems.empty()) {
    throw SchemaError(path, problems.front());
  }
  return p;
}

}  // namespace settlesim
