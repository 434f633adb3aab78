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


#include <gtest/gtest.h>

#include <set>

#include "advbound/report.hpp"
#include "advbound/verify.hpp"

namespace advbound {
namespace {

TEST(Verify, SuiteSeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (const std::string& s : suite_names()) seen.insert(suite_seed(7, s));
  EXPECT_EQ(seen.size(), suite_names().size());
  EXPECT_EQ(suite_seed(7, "duality"), suite_seed(7, "duality"));
  EXPECT_NE(suite_seed(7, "duality"), suite_seed(8, "duality"));
}

TEST(Verify, SpectralGapRunsTwoHundredCases) {
  const SuiteReport r = run_suite("spectral-gap", 1);
  EXPECT_EQ(r.total, 200);
  EXPECT_EQ(r.passed, 200);
}

TEST(Verify, ReportsAreReproducible) {
  const json a = run_suite("composition", 3).to_json();
  const json b = run_suite("composition", 3).to_json();
  EXPECT_EQ(a.dump(), b.dump());
  // The same suite inside "all" draws the same cases.
  const auto all = run_verify("all", 3);
  for (const SuiteReport& s : all) {
    if (s.suite == "composition") EXPECT_EQ(s.to_json().dump(), a.dump());
  }
}

TEST(Verify, FailuresKeepTheInstance) {
  SuiteReport r;
  r.record("check", 1.0, json{{"x", 1}});
  r.record("check", -0.5, json{{"x", 2}});
  EXPECT_FALSE(r.ok());
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0]["instance"]["x"], 2);
  EXPECT_DOUBLE_EQ(r.worst_slack, -0.5);
  EXPECT_EQ(r.checks["check"]["count"], 2);
}

TEST(Verify, UnknownSuiteIsAnInputError) {
  EXPECT_THROW(run_suite("nonsense", 1), InputError);
}

TEST(Report, DigestAndEnvelope) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  Report r;
  r.command = {"gamma2", "x.json"};
  r.status = "optimal";
  r.result = json{{"value", 0.5}};
  const json j = r.to_json();
  EXPECT_EQ(j["exit_code"], 0);
  EXPECT_NE(render_table(j).find("value"), std::string::npos);
}

}  // namespace
}  // namespace advbound
