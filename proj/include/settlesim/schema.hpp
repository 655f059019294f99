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

// Strict JSON field access. Every accessor takes the dotted path of the
// value it reads so errors can name the offending field.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include "settlesim/timed_stream.hpp"

namespace settlesim {

class SchemaError : public std::invalid_argument {
 public:
  SchemaError(std::string path, const std::string& what);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace schema {

std::string child(const std::string& path, std::string_view key);
std::string index(const std::string& path, std::size_t i);

const Value& object(const Value& v, const std::string& path);
const Value& array(const Value& v, const std::string& path);
// Rejects keys outside `allowed`.
void only_keys(const Value& obj, const std::string& path,
               std::initializer_list<std::string_view> allowed);
const Value& required(const Value& obj, const std::string& path, std::string_view key);
const Value* optional(const Value& obj, std::string_view key);

std::uint64_t as_uint(const Value& v, const std::string& path);
std::uint32_t as_u32(const Value& v, const std::string& path);
std::int64_t as_int(const Value& v, const std::string& path);
double as_number(const Value& v, const std::string& path);
bool as_bool(const Value& v, const std::string& path);
std::string as_string(const Value& v, const std::string& path);

}  // namespace schema
}  // namespace settlesim
