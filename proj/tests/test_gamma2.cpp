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

#include <cmath>

#include "advbound/gamma2.hpp"

namespace advbound {
namespace {

CMatrix mat2(cd a, cd b, cd c, cd d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TEST(Gamma2, ReflexiveSingletonIsOne) {
  const Gamma2Instance inst = scalar_instance(CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, 1.0));
  const Gamma2Report r = gamma2_solve(inst);
  EXPECT_NEAR(r.value(), 1.0, 1e-7);
  ASSERT_TRUE(r.dual && r.dual->dual);
  EXPECT_NEAR(r.dual->value, 1.0, 1e-6);
  EXPECT_NEAR(std::abs(r.dual->dual->gamma(0, 0)), 1.0, 1e-5);
}

TEST(Gamma2, ZeroFamilyIsZero) {
  const Gamma2Instance inst = scalar_instance(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2));
  EXPECT_NEAR(gamma2_value(inst), 0.0, 1e-7);
  EXPECT_EQ(crude_bound(inst), 0.0);
}

TEST(Gamma2, SwapInstanceMatchesRankOneSearch) {
  const Gamma2Instance inst = scalar_instance(mat2(0, 1, 1, 0), mat2(0, 2, -2, 0));
  // Independent oracle: rank-one factors with 1 = 2·ū0·v1 and 1 = −2·ū1·v0;
  // scan |u0| and take v1 = 1/(2 u0), and symmetrically for the other pair.
  double best = 1e9;
  for (int k = 1; k <= 400000; ++k) {
    const double u0 = k * 1e-5;
    const double v1 = 1.0 / (2.0 * u0);
    best = std::min(best, std::max(u0 * u0, v1 * v1));
  }
  const Gamma2Report r = gamma2_solve(inst);
  EXPECT_NEAR(r.value(), best, 1e-4);
  EXPECT_NEAR(r.value(), 0.5, 1e-6);
  EXPECT_NEAR(r.dual->value, 0.5, 1e-6);
  EXPECT_LE(r.primal.residual, 1e-6);
}

TEST(Gamma2, LowerTriangleExceedsOne) {
  // Independent oracle: γ₂(M) = max over unit u, v of ‖diag(u) M diag(v)‖_tr,
  // and for a nonnegative M nonnegative u, v suffice; scan both angles.
  const CMatrix m = mat2(1, 0, 1, 1);
  double best = 0.0;
  const int steps = 400;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double a = M_PI / 2 * i / steps, b = M_PI / 2 * j / steps;
      CMatrix s = m;
      s.row(0) *= std::cos(a);
      s.row(1) *= std::sin(a);
      s.col(0) *= std::cos(b);
      s.col(1) *= std::sin(b);
      best = std::max(best, trace_norm(s));
    }
  }
  const double v = gamma2_value(plain_instance(m));
  EXPECT_GT(v, 1.0 + 1e-3);
  EXPECT_NEAR(v, best, 1e-3);
  EXPECT_NEAR(gamma2_dual(plain_instance(m)).value, v, 1e-5);
}

TEST(Gamma2, CrudeAndEntrywiseBracketTheValue) {
  Rng rng(21);
  for (int t = 0; t < 5; ++t) {
    const Gamma2Instance inst = scalar_instance(random_matrix(2, 2, rng), random_matrix(2, 2, rng));
    const double v = gamma2_value(inst);
    EXPECT_LE(entrywise_lower_bound(inst), v + 1e-6);
    EXPECT_GE(crude_bound(inst), v - 1e-6);
  }
  const Gamma2Instance same = scalar_instance(mat2(1, 2, 3, 4), mat2(1, 2, 3, 4));
  EXPECT_DOUBLE_EQ(entrywise_lower_bound(same), 1.0);
  const Gamma2Instance twice = scalar_instance(mat2(2, 4, 6, 8), mat2(1, 2, 3, 4));
  EXPECT_DOUBLE_EQ(entrywise_lower_bound(twice), 2.0);
}

TEST(Gamma2, ScalarReductionMatchesPlainNorm) {
  Rng rng(5);
  const Gamma2Instance inst = scalar_instance(random_matrix(3, 3, rng), random_matrix(3, 3, rng));
  const double v = gamma2_value(inst);
  EXPECT_NEAR(gamma2_value(plain_instance(reduce_scalar(inst))), v, 1e-5 * (1 + v));
  const Gamma2Instance twice = scalar_instance(mat2(2, 2, 2, 2), mat2(1, 1, 1, 1));
  EXPECT_NEAR(gamma2_value(twice), 2.0, 1e-6);
  EXPECT_THROW(reduce_scalar(scalar_instance(mat2(0, 1, 1, 0), mat2(0, 1, 1, 0))), InputError);
}

TEST(Gamma2, InfiniteInstanceNamesThePair) {
  const Gamma2Instance inst = scalar_instance(mat2(0, 1, 1, 0), mat2(0, 0, 1, 0));
  ASSERT_TRUE(inst.infinite_pair());
  EXPECT_EQ(inst.infinite_pair()->first, 0);
  EXPECT_EQ(inst.infinite_pair()->second, 1);
  EXPECT_THROW(gamma2_primal(inst), InputError);
  EXPECT_TRUE(std::isinf(crude_bound(inst)));
}

TEST(Gamma2, MatrixValuedPrimalFactorsReproduceA) {
  Rng rng(13);
  std::vector<std::vector<CMatrix>> a(2, std::vector<CMatrix>(3)), d = a;
  for (auto& r : a) for (CMatrix& m : r) m = random_matrix(2, 2, rng);
  for (auto& r : d) for (CMatrix& m : r) m = random_matrix(2, 3, rng);
  const Gamma2Instance inst = make_instance(a, d);
  const Gamma2Certificate c = gamma2_primal(inst);
  ASSERT_EQ(c.status, SolveStatus::optimal);
  ASSERT_TRUE(c.primal);
  EXPECT_LE(c.residual, 1e-6 * (1 + c.value));
  EXPECT_LE(c.factor_objective, c.value + 1e-6 * (1 + c.value));
  EXPECT_NEAR(factorization_residual(inst, c.primal->upsilon, c.primal->phi), c.residual, 1e-12);
  EXPECT_THROW(gamma2_dual(inst), InputError);
}

TEST(Gamma2, ReflexivityOnMatrixFamilies) {
  Rng rng(31);
  std::vector<std::vector<CMatrix>> d(3, std::vector<CMatrix>(2));
  for (auto& r : d) for (CMatrix& m : r) m = random_matrix(2, 2, rng);
  EXPECT_NEAR(gamma2_value(make_instance(d, d), 1e-9), 1.0, 1e-7);
}

TEST(Gamma2, DualPointPassesIndependentCheck) {
  Rng rng(7);
  const Gamma2Instance inst = scalar_instance(random_matrix(3, 2, rng), random_matrix(3, 2, rng));
  const Gamma2Certificate d = gamma2_dual(inst);
  ASSERT_TRUE(d.dual);
  const DualCheck c = check_dual(inst, d.dual->mu, d.dual->lambda);
  EXPECT_NEAR(c.mu_sum, 1.0, 1e-8);
  EXPECT_GE(c.min_eig, -1e-8);
  EXPECT_NEAR(c.objective, d.value, 1e-8);
  EXPECT_LE(d.dual->gamma_delta_norm, 1.0 + 1e-6);
  EXPECT_GE(d.dual->gamma_a_norm, d.value - 1e-6);
}

TEST(Gamma2, DirectSumWithSharedDeltaIsMax) {
  Rng rng(3);
  const CMatrix dl = random_matrix(2, 2, rng);
  const Gamma2Instance a = scalar_instance(random_matrix(2, 2, rng), dl);
  const Gamma2Instance b = scalar_instance(random_matrix(2, 2, rng), dl);
  const CombineReport r = combine_check(a, b, CombineMode::direct_sum);
  EXPECT_TRUE(r.equality);
  EXPECT_NEAR(r.value_combined, std::max(r.value_a, r.value_b), 1e-5);
}

TEST(Gamma2, TensorOfReflexiveIsAtMostOne) {
  Rng rng(4);
  const CMatrix d1 = random_matrix(2, 2, rng), d2 = random_matrix(2, 2, rng);
  const CombineReport r =
      combine_check(scalar_instance(d1, d1), scalar_instance(d2, d2), CombineMode::tensor);
  EXPECT_LE(r.value_combined, 1.0 + 1e-5);
}

TEST(Gamma2, ComposeRequiresMatchingFamilies) {
  Rng rng(9);
  const Gamma2Instance a = scalar_instance(random_matrix(2, 2, rng), random_matrix(2, 2, rng));
  const Gamma2Instance b = scalar_instance(random_matrix(2, 2, rng), random_matrix(2, 2, rng));
  EXPECT_THROW(combine(a, b, CombineMode::compose), InputError);
  const CMatrix mid = random_matrix(2, 2, rng);
  const CombineReport r = combine_check(scalar_instance(a.a[0][0](0, 0) * CMatrix::Ones(2, 2), mid),
                                        scalar_instance(mid, random_matrix(2, 2, rng)),
                                        CombineMode::compose);
  EXPECT_GE(r.slack, -1e-6);
}

TEST(Gamma2, StrikeAndDuplicate) {
  Rng rng(12);
  const Gamma2Instance inst = scalar_instance(random_matrix(3, 3, rng), random_matrix(3, 3, rng));
  const double v = gamma2_value(inst);
  EXPECT_LE(gamma2_value(strike(inst, {0, 2}, {1})), v + 1e-6);
  EXPECT_NEAR(gamma2_value(duplicate(inst, 2, 1)), v, 1e-5 * (1 + v));
}

TEST(Gamma2, GeometricCertificateClosedForms) {
  const GeometricCertificate zero = geometric_certificate(CMatrix::Zero(2, 2));
  EXPECT_NEAR(zero.cert.value, 1.0, 1e-9);
  EXPECT_LT((zero.y - CMatrix::Ones(2, 2)).norm(), 1e-12);

  const GeometricCertificate half = geometric_certificate(0.5 * CMatrix::Ones(2, 2));
  EXPECT_LT((half.y - 2.0 * CMatrix::Ones(2, 2)).norm(), 1e-12);
  EXPECT_LE(half.cert.value, 2.0 + 1e-6);
  EXPECT_LE(half.cert.tail, 1e-6);
  EXPECT_NEAR(gamma2_value(plain_instance(half.y)), 2.0, 1e-5);
}

TEST(Gamma2, GeometricCertificateBoundAtPointEight) {
  Rng rng(19);
  const CMatrix m = random_matrix(3, 3, rng);
  const CMatrix x = 0.8 / gamma2_value(plain_instance(m), 1e-9) * m;
  const GeometricCertificate g = geometric_certificate(x, 0, 1e-9);
  EXPECT_LE(g.g, 0.8 + 1e-6);
  EXPECT_LE(g.cert.value, 5.0 + g.cert.tail + 1e-6);
  // The truncated series is factored exactly; the SDP of the exact Y is below it.
  EXPECT_LE(factorization_residual(plain_instance(g.y_truncated), g.cert.primal->upsilon,
                                   g.cert.primal->phi),
            1e-9);
  EXPECT_LE(gamma2_value(plain_instance(g.y)), g.cert.value + g.cert.tail * 9 + 1e-5);
  // Larger K, smaller tail.
  const GeometricCertificate g2 = geometric_certificate(x, g.k + 10, 1e-9);
  EXPECT_LT(g2.cert.tail, g.cert.tail);
}

TEST(Gamma2, GeometricCertificateRejectsNormOne) {
  EXPECT_THROW(geometric_certificate(CMatrix::Ones(2, 2)), InputError);
}

TEST(Gamma2, JsonRoundTrip) {
  Rng rng(1);
  const Gamma2Instance inst = scalar_instance(random_matrix(2, 3, rng), random_matrix(2, 3, rng));
  const Gamma2Instance back = Gamma2Instance::from_json(inst.to_json());
  EXPECT_EQ(back.labels1, inst.labels1);
  EXPECT_EQ(back.a[1][2], inst.a[1][2]);
  EXPECT_EQ(back.delta[0][1], inst.delta[0][1]);
  const Gamma2Certificate c = gamma2_primal(inst);
  const Gamma2Certificate cb = certificate_from_json(c.to_json());
  EXPECT_NEAR(factorization_residual(inst, cb.primal->upsilon, cb.primal->phi), c.residual, 1e-12);
}

}  // namespace
}  // namespace advbound
