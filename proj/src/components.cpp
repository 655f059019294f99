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

#include "settlesim/components.hpp"

#include "settlesim/schema.hpp"

namespace settlesim::components {

Component identity(std::string id) {
  auto step = [](const State& s, std::span<const TimedItem> in, TimeTag now) {
    return StepResult{s, {in[0].retagged(now)}};
  };
  return Component{std::move(id), step, Value::object(), 1, 1};
}

Component pulse(std::string id) {
  auto step = [](const State& s, std::span<const TimedItem> in, TimeTag now) {
    State next = s;
    if (now.tick == 0) {
      return StepResult{next, {TimedItem::payload(now, Value{{"token", 0}})}};
    }
    if (in[0].is_hiaton()) return StepResult{next, {make_hiaton(now)}};
    const std::uint64_t seen = next["seen"].get<std::uint64_t>() + 1;
    next["seen"] = seen;
    return StepResult{next, {TimedItem::payload(now, Value{{"token", seen}})}};
  };
  return Component{std::move(id), step, Value{{"seen", 0}}, 1, 1};
}

Component counter(std::string id) {
  auto step = [](const State& s, std::span<const TimedItem> in, TimeTag now) {
    if (in[0].is_hiaton()) return StepResult{s, {make_hiaton(now)}};
    State next = s;
    const std::uint64_t n = next["count"].get<std::uint64_t>() + 1;
    next["count"] = n;
    return StepResult{next, {TimedItem::payload(now, Value{{"count", n}})}};
  };
  return Component{std::move(id), step, Value{{"count", 0}}, 1, 1};
}

Component fifo_queue(std::string id, std::size_t inputs, std::uint64_t service_interval) {
  if (inputs == 0) throw std::invalid_argument("fifo_queue needs at least one input");
  if (service_interval == 0) throw std::invalid_argument("service_interval must be >= 1");
  auto step = [service_interval](const State& s, std::span<const TimedItem> in, TimeTag now) {
    State next = s;
    Value& pending = next["pending"];
    for (const auto& item : in) {
      if (item.is_payload()) pending.push_back(item.value());
    }
    if (pending.empty() || now.tick % service_interval != 0) {
      return StepResult{std::move(next), {make_hiaton(now)}};
    }
    Value head = std::move(pending.front());
    pending.erase(pending.begin());
    next["released"] = next["released"].get<std::uint64_t>() + 1;
    return StepResult{std::move(next), {TimedItem::payload(now, std::move(head))}};
  };
  return Component{std::move(id), step, Value{{"pending", Value::array()}, {"released", 0}},
                   inputs, 1};
}

Component router(std::string id, std::size_t outputs) {
  if (outputs == 0) throw std::invalid_argument("router needs at least one output");
  auto step = [outputs](const State& s, std::span<const TimedItem> in, TimeTag now) {
    std::vector<TimedItem> out(outputs, make_hiaton(now));
    if (in[0].is_payload()) {
      const Value& v = in[0].value();
      std::size_t port = 0;
      if (v.is_object() && v.contains("queue") && v["queue"].is_number_unsigned()) {
        port = v["queue"].get<std::size_t>() % outputs;
      }
      out[port] = in[0].retagged(now);
    }
    return StepResult{s, std::move(out)};
  };
  return Component{std::move(id), step, Value::object(), 1, outputs};
}

std::vector<std::string> builtin_kinds() {
  return {"counter", "fifo_queue", "identity", "pulse", "router"};
}

Component make_builtin(const std::string& id, const std::string& kind, const Value& params) {
  const Value p = params.is_null() ? Value::object() : params;
  const std::string path = "params";
  if (kind == "identity" || kind == "pulse" || kind == "counter") {
    schema::only_keys(p, path, {});
    if (kind == "identity") return identity(id);
    if (kind == "pulse") return pulse(id);
    return counter(id);
  }
  if (kind == "fifo_queue") {
    schema::only_keys(p, path, {"inputs", "service_interval"});
    std::size_t inputs = 1;
    std::uint64_t interval = 1;
    if (const Value* v = schema::optional(p, "inputs")) {
      inputs = schema::as_uint(*v, schema::child(path, "inputs"));
    }
    if (const Value* v = schema::optional(p, "service_interval")) {
      interval = schema::as_uint(*v, schema::child(path, "service_interval"));
    }
    return fifo_queue(id, inputs, interval);
  }
  if (kind == "router") {
    schema::only_keys(p, path, {"outputs"});
    return router(id, schema::as_uint(schema::required(p, path, "outputs"),
                                      schema::child(path, "outputs")));
  }
  std::string known;
  for (const auto& k : builtin_kinds()) known += (known.empty() ? "" : ", ") + k;
  throw std::invalid_argument("unknown component kind '" + kind + "' (known: " + known + ")");
}

}  // namespace settlesim::components
