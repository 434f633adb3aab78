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


/**
 * @file report.hpp
 * The JSON envelope every CLI command emits, and its table rendering.
 */
#pragma once

#include <string>
#include <vector>

#include "advbound/numerics.hpp"

namespace advbound {

/// Exit codes of the command-line tool.
enum class ExitCode { ok = 0, input_error = 1, violated = 2 };

struct Report {
  std::vector<std::string> command;  // argv after the program name
  std::string input_digest;          // "sha256:<hex>" of the raw input, or empty
  std::string status;                // "optimal", "verified", "violated", "input_error", ...
  json result = json::object();      // values, certificates, residuals, gaps
  json error;                        // null unless the command failed
  double wall_seconds = 0.0;
  ExitCode exit = ExitCode::ok;

  /// Keys sorted; the wall-clock field is the only nondeterministic one.
  json to_json() const;
};

/// SHA-256 of the bytes, lowercase hex.
std::string sha256_hex(const std::string& bytes);
/// Key/value summary of the report: scalars of `result` at depth ≤ 2.
std::string render_table(const json& report);

}  // namespace advbound
