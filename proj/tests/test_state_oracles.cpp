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

#include <algorithm>
#include <cmath>

#include "advbound/state_oracles.hpp"

namespace advbound {
namespace {

TEST(StateOracles, ReflectionGeneratesTheState) {
  Rng rng(1);
  CVector psi = random_state(4, rng);
  psi(0) = 0.0;
  psi.normalize();
  const CMatrix r = state_reflection(psi);
  EXPECT_LT((r * basis_vector(4, 0) - psi).norm(), 1e-12);
  EXPECT_LT(unitarity_deviation(r), 1e-12);
  EXPECT_LT(hermiticity_deviation(r), 1e-12);
}

TEST(StateOracles, ReflectionDifferenceSpectrum) {
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    const CVector a = random_state(3, rng), b = random_state(3, rng);
    const double s = 2.0 * std::sqrt(1.0 - std::norm(a.dot(b)));
    const Spectrum sp = reflection_difference_spectrum(a, b);
    EXPECT_NEAR(sp.eigenvalues.front().real(), -s, 1e-10);
    EXPECT_NEAR(sp.eigenvalues.back().real(), s, 1e-10);
    EXPECT_NEAR(sp.eigenvalues[1].real(), 0.0, 1e-10);
  }
}

TEST(StateOracles, AmplificationClosedFormAndCertificate) {
  const AmplificationInstance aa = make_amplitude_amplification(2);
  const double target = 1.0 / (1.0 - std::cos(aa.alpha));
  EXPECT_NEAR(aa.alpha, M_PI / 8, 1e-15);
  EXPECT_NEAR(target, 13.1371, 1e-4);
  const Gamma2Instance inst = tadv_instance(aa.problem, TargetKind::states);
  EXPECT_NEAR(entrywise_lower_bound(inst), target, 1e-9);
  EXPECT_LE(factorization_residual(inst, aa.certificate.primal->upsilon, aa.certificate.primal->phi),
            1e-12);
  EXPECT_NEAR(aa.certificate.factor_objective, target, 1e-9);
  EXPECT_NEAR(tadv(aa.problem, TargetKind::states).value(), target, 1e-3);
}

TEST(StateOracles, AmplificationScaling) {
  std::vector<double> tv, rv, al;
  for (int k : {2, 4, 8}) {
    const AmplificationInstance aa = make_amplitude_amplification(k);
    al.push_back(aa.alpha);
    tv.push_back(tadv(aa.problem, TargetKind::states).value());
    const double r = reflection_bound(aa.problem, TargetKind::states).value();
    rv.push_back(r);
    EXPECT_GE(r, 1.0 / (2.0 * std::sin(aa.beta)) - 1e-5);
    EXPECT_LE(r, 8.0 / aa.alpha);
  }
  for (int i = 1; i < 3; ++i) {
    const double t_expect = std::pow(al[i - 1] / al[i], 2);
    EXPECT_NEAR(tv[i] / tv[i - 1] / t_expect, 1.0, 0.15);
    const double r_expect = al[i - 1] / al[i];
    EXPECT_NEAR(rv[i] / rv[i - 1] / r_expect, 1.0, 0.25);
  }
}

TEST(StateOracles, UnitaryTargetsCostMore) {
  const AmplificationInstance aa = make_amplitude_amplification(2);
  EXPECT_GE(tadv(aa.problem, TargetKind::unitaries).value(),
            tadv(aa.problem, TargetKind::states).value() - 1e-5);
}

TEST(StateOracles, StandardOracleBlocks) {
  for (int q = 2; q <= 4; ++q) {
    const StandardOracleCertificate s = standard_oracle_certificate(q);
    EXPECT_LE(s.certificate.residual, 1e-9);
    EXPECT_LE(s.certificate.factor_objective, 2.0 + 1e-12);
    EXPECT_LE(gamma2_value(s.instance), 2.0 + 1e-6);
    const CMatrix o = standard_oracle(q, 1);
    EXPECT_LT(unitarity_deviation(o), 1e-14);
    EXPECT_EQ(o(1, 0), cd(1.0));
  }
}

TEST(StateOracles, TwoBitOrSandwich) {
  const std::vector<int> values = {0, 1, 1, 1};
  const double t = tadv(standard_function_problem(2, 2, 2, values), TargetKind::states).value();
  const double a = adv_state_conversion(standard_conversion_problem(2, 2, 2, values)).value();
  EXPECT_NEAR(t, std::sqrt(2.0), 1e-5);
  EXPECT_GE(a, 0.5 * t - 1e-5);
  EXPECT_LE(a, t + 1e-5);
}

TEST(StateOracles, StringsAndLabels) {
  const auto s = all_strings(3, 2);
  ASSERT_EQ(s.size(), 9u);
  EXPECT_EQ(string_label(s[5]), "12");
}

TEST(StateOracles, KothariParitySmall) {
  const double v2 = tadv(make_kothari_parity(2), TargetKind::states).value();
  const double v3 = tadv(make_kothari_parity(3), TargetKind::states).value();
  EXPECT_LE(v3, 1.5 * v2);
  EXPECT_NEAR(tadv(make_kothari_parity(3, true), TargetKind::states).value(), 0.0, 1e-6);
  EXPECT_THROW(make_kothari_parity(1), InputError);
}

TEST(StateOracles, ParadoxPairForms) {
  std::vector<double> sv, uv;
  for (double a : {M_PI / 8, M_PI / 16, M_PI / 32}) {
    const StateOracleProblem p = make_paradox_pair(a);
    sv.push_back(reflection_bound(p, TargetKind::states).value());
    uv.push_back(reflection_bound(p, TargetKind::unitaries).value());
  }
  EXPECT_LE(*std::max_element(sv.begin(), sv.end()),
            2.0 * *std::min_element(sv.begin(), sv.end()));
  EXPECT_GE(uv[1] / uv[0], 1.3);
  EXPECT_GE(uv[2] / uv[1], 1.3);
}

TEST(StateOracles, ValidationAndJson) {
  const AmplificationInstance aa = make_amplitude_amplification(2);
  const StateOracleProblem back = StateOracleProblem::from_json(aa.problem.to_json());
  EXPECT_EQ(back.labels, aa.problem.labels);
  EXPECT_LT((back.psi[1][0] - aa.problem.psi[1][0]).norm(), 1e-15);
  StateOracleProblem bad = aa.problem;
  bad.psi[0][0] = basis_vector(static_cast<int>(bad.psi[0][0].size()), 0);
  EXPECT_THROW(bad.validate(), InputError);
  json single = aa.problem.to_json();
  single["psi"][aa.problem.labels[0]] = vector_to_json(aa.problem.psi[0][0]);
  EXPECT_THROW(StateOracleProblem::from_json(single), InputError);
}

TEST(StateOracles, ReflectionSandwichAndDominance) {
  // Reflection bound between ½ and 1 times the unitary adversary bound of
  // the reflection completion; tAdv dominates any completion.
  for (const StateOracleProblem& p :
       {make_amplitude_amplification(2).problem, make_paradox_pair(M_PI / 8)}) {
    const double rb = reflection_bound(p, TargetKind::unitaries).value();
    const double au = adv_unitary(unitary_completion(p)).value;
    EXPECT_GE(rb, 0.5 * au - 1e-5);
    EXPECT_LE(rb, au + 1e-5);
    EXPECT_LE(adv_state_conversion(conversion_completion(p)).value(),
              tadv(p, TargetKind::states).value() + 1e-5);
  }
}

}  // namespace
}  // namespace advbound
