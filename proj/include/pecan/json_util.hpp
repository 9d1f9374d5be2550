/*
Copyright 2026 The PECAN Toolkit Authors. All rights reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

// Field access helpers that turn nlohmann/json type errors into kParse
// errors naming the offending field. Internal to the library and tools.

#include <string>
#include <vector>

#include "json.hpp"
#include "pecan/error.hpp"

namespace pecan::jsonutil {

[[noreturn]] inline void parse_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::kParse, "field '" + where + "': " + what);
}

inline const nlohmann::json& field(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) parse_error(where, "parent is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_error(where, "missing");
  return *it;
}

template <typename T>
T get(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& value = field(obj, key, where);
  if constexpr (std::is_unsigned_v<T>) {
    if (!value.is_number_unsigned()) parse_error(where, "expected a non-negative integer");
  }
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_error(where, e.what());
  }
}

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || obj[key].is_null()) return fallback;
  return get<T>(obj, key, where);
}

inline std::vector<double> as_doubles(const nlohmann::json& value, const std::string& where) {
  if (!value.is_array()) parse_error(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& x : value) {
    if (!x.is_number()) parse_error(where, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace pecan::jsonutil
