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
 * @file verify.hpp
 * Seeded property suites over every module. Each suite draws from its own
 * generator, seeded from (seed, suite name), so a suite gives the same
 * report whether it runs alone or inside "all".
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advbound/numerics.hpp"

namespace advbound {

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;   // derived per-suite seed
  int total = 0;
  int passed = 0;
  double worst_slack = 0.0;  // least slack over all checks; ≥ 0 on success
  json checks = json::object();     // check name -> {count, passed, worst_slack}
  std::vector<json> failures;       // {check, slack, instance} for replay

  bool ok() const { return passed == total; }
  /// A check passes when slack ≥ 0; `instance` is kept only on failure.
  void record(const std::string& check, double slack, const json& instance);
  json to_json() const;
};

struct VerifyOptions {
  double tol = 1e-7;  // solver tolerance
};

/// Suite names accepted by run_suite, without "all".
const std::vector<std::string>& suite_names();
/// 64-bit FNV-1a of the name mixed into the seed by splitmix64.
std::uint64_t suite_seed(std::uint64_t seed, const std::string& suite);
/// Rejects unknown suite names.
SuiteReport run_suite(const std::string& suite, std::uint64_t seed,
                      const VerifyOptions& opt = {});
/// "all" expands to every suite in suite_names() order.
std::vector<SuiteReport> run_verify(const std::string& suite, std::uint64_t seed,
                                    const VerifyOptions& opt = {});

}  // namespace advbound
