// Copyright 2026 The advbound Authors
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

/// @file labels.hpp
/// Helpers for label-keyed JSON problem files.
#pragma once

#include <string>
#include <vector>

#include "advbound/numerics.hpp"

namespace advbound {

/// The "labels" array when present, otherwise the keys of j[key] in
/// lexicographic order.
inline std::vector<std::string> labels_of(const json& j, const std::string& key) {
  if (!j.is_object()) throw InputError("problem: expected a JSON object");
  std::vector<std::string> out;
  if (j.contains("labels")) {
    for (const json& l : j.at("labels")) {
      out.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    }
    return out;
  }
  if (!j.contains(key) || !j.at(key).is_object()) {
    throw InputError("problem: missing object '" + key + "'");
  }
  for (auto it = j.at(key).begin(); it != j.at(key).end(); ++it) out.push_back(it.key());
  return out;
}

inline const json& field(const json& j, const std::string& key,
                         const std::string& label) {
  if (!j.contains(key) || !j.at(key).is_object()) {
    throw InputError("problem: missing object '" + key + "'");
  }
  const json& m = j.at(key);
  if (!m.contains(label)) {
    throw InputError("problem: '" + key + "' has no entry for label '" + label + "'");
  }
  return m.at(label);
}

}  // namespace advbound
