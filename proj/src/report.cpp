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


#include "advbound/report.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace advbound {

json Report::to_json() const {
  return json{{"command", command},
              {"input_digest", input_digest},
              {"status", status},
              {"exit_code", static_cast<int>(exit)},
              {"result", result},
              {"error", error},
              {"wall_seconds", wall_seconds}};
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) {
    s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(out[i]);
  }
  return s.str();
}

namespace {

void rows(const json& j, const std::string& prefix, int depth,
          std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    if (depth == 0) return;
    for (auto it = j.begin(); it != j.end(); ++it) {
      rows(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), depth - 1, out);
    }
  } else if (!j.is_array()) {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

}  // namespace

std::string render_table(const json& report) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("status", report.value("status", ""));
  if (report.contains("error") && !report.at("error").is_null()) {
    out.emplace_back("error", report.at("error").dump());
  }
  if (report.contains("result")) rows(report.at("result"), "", 3, out);
  size_t width = 0;
  for (const auto& [k, v] : out) width = std::max(width, k.size());
  std::ostringstream s;
  for (const auto& [k, v] : out) {
    s << std::left << std::setw(static_cast<int>(width) + 2) << k << v << "\n";
  }
  return s.str();
}

}  // namespace advbound
