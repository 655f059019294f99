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

// JSON codecs for batch instances and partitions. Decoders report the
// offending field as a path such as "instance.elements[3].value".

#pragma once

#include <string>

#include "settlesim/partition.hpp"
#include "settlesim/schema.hpp"
#include "settlesim/timed_stream.hpp"
#include "settlesim/workload.hpp"

namespace settlesim {

// {"id", "value", "queue", "refs"}
Value element_to_json(const Element& e);
Element element_from_json(const Value& v, const std::string& path = "element");

Value constraint_to_json(const Constraint& c);
// A capacity "usage" may be the string "value", meaning each element of
// `elements` uses its own value (values must then be non-negative).
Constraint constraint_from_json(const Value& v, const std::string& path,
                                std::span<const Element> elements = {});

// {"elements", "queues", "queue_precedence", "groups", "constraints"}.
// Missing "groups" means one value-priority group (id 0) over all queues.
Value instance_to_json(const BatchInstance& inst);
BatchInstance instance_from_json(const Value& v, const std::string& path = "instance");

Value partition_to_json(const Partition& p);

Value params_to_json(const WorkloadParams& p);
// Missing keys keep their defaults; unknown keys are schema errors.
WorkloadParams params_from_json(const Value& v, const std::string& path = "workload");

}  // namespace settlesim
