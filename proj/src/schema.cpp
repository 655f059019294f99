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

#include "settlesim/schema.hpp"

#include <algorithm>
#include <limits>

namespace settlesim {

SchemaError::SchemaError(std::string path, const std::string& what)
    : std::invalid_argument(path + ": " + what), path_(std::move(path)) {}

namespace schema {

std::string child(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Value& object(const Value& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path, "expected an object");
  return v;
}

const Value& array(const Value& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  return v;
}

void only_keys(const Value& obj, const std::string& path,
               std::initializer_list<std::string_view> allowed) {
  object(obj, path);
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError(child(path, key), "unknown field");
    }
  }
}

const Value& required(const Value& obj, const std::string& path, std::string_view key) {
  object(obj, path);
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(child(path, key), "missing required field");
  return *it;
}

const Value* optional(const Value& obj, std::string_view key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::uint64_t as_uint(const Value& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw SchemaError(path, "expected a non-negative integer");
}

std::uint32_t as_u32(const Value& v, const std::string& path) {
  const std::uint64_t x = as_uint(v, path);
  if (x > std::numeric_limits<std::uint32_t>::max()) {
    throw SchemaError(path, "value exceeds 32-bit range");
  }
  return static_cast<std::uint32_t>(x);
}

std::int64_t as_int(const Value& v, const std::string& path) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned() &&
        v.get<std::uint64_t>() >
            static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw SchemaError(path, "value exceeds 64-bit signed range");
    }
    return v.get<std::int64_t>();
  }
  throw SchemaError(path, "expected an integer");
}

double as_number(const Value& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

bool as_bool(const Value& v, const std::string& path) {
  if (!v.is_boolean()) throw SchemaError(path, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const Value& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

}  // namespace schema
}  // namespace settlesim
