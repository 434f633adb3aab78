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

#include "advbound/purifiers.hpp"

namespace advbound {
namespace {

// ψ in C^2 (output) ⊗ C^2 (garbage) with ‖Π_1ψ‖² = w1.
CVector binary_state(double w1, Rng& rng) {
  CVector v(4);
  v << std::sqrt(1 - w1) * random_state(2, rng), std::sqrt(w1) * random_state(2, rng);
  return v;
}

PurifierInstance binary_instance(const std::vector<double>& weights, Rng& rng) {
  PurifierInstance p;
  for (size_t x = 0; x < weights.size(); ++x) {
    p.labels.push_back("x" + std::to_string(x));
    p.psi.push_back(binary_state(weights[x], rng));
  }
  return p;
}

double recheck(const PurifierCertificate& c) {
  return factorization_residual(c.instance, c.certificate.primal->upsilon, c.certificate.primal->phi);
}

TEST(Purifiers, BinaryAtTheGapEdge) {
  Rng rng(3);
  const PurifierInstance p = binary_instance({0.25, 0.75, 0.0, 1.0, 0.25}, rng);
  const PurifierCertificate c = purify_function_binary(p);
  EXPECT_LE(recheck(c), 1e-7);
  EXPECT_LE(c.certificate.value, 14.94);
  EXPECT_NEAR(c.bound, 2.0 / (1.0 - std::sqrt(3.0) / 2.0), 1e-12);
  EXPECT_LE(c.base_norm, c.norm_bound + 1e-12);
  EXPECT_EQ(c.classes, (std::vector<int>{0, 1, 0, 1, 0}));
  EXPECT_LE(c.agreement, 1e-12);
  EXPECT_LE(gamma2_value(c.instance), c.certificate.value + 1e-5);
}

TEST(Purifiers, BinaryRejectsWeightsInsideTheGap) {
  Rng rng(4);
  EXPECT_THROW(purify_function_binary(binary_instance({0.2, 0.5}, rng)), InputError);
}

TEST(Purifiers, BinarySingleClassIsFree) {
  Rng rng(5);
  const PurifierCertificate c = purify_function_binary(binary_instance({0.1, 0.2}, rng));
  EXPECT_EQ(c.certificate.value, 0.0);
  EXPECT_LE(recheck(c), 1e-12);
}

TEST(Purifiers, BasisTargetsWithoutNoise) {
  // Noise-free basis states: the instance is (1_{x≠y} | 1_{x≠y}), value 1.
  PurifierInstance p;
  p.labels = {"0", "1"};
  p.psi = {basis_vector(4, 0), basis_vector(4, 2)};
  const PurifierCertificate c = purify_function_binary(p);
  EXPECT_LE(recheck(c), 1e-9);
  EXPECT_NEAR(gamma2_value(c.instance), 1.0, 1e-6);
  EXPECT_LE(c.certificate.value, c.bound);
}

TEST(Purifiers, MultiOutput) {
  Rng rng(6);
  PurifierInstance p;
  p.outputs = 3;
  p.delta = 0.2;
  for (int x = 0; x < 3; ++x) {
    p.labels.push_back(std::to_string(x));
    CVector v = CVector::Zero(6);
    v.segment(2 * x, 2) = std::sqrt(0.8) * random_state(2, rng);
    v.segment(2 * ((x + 1) % 3), 2) = std::sqrt(0.2) * random_state(2, rng);
    p.psi.push_back(v);
  }
  const PurifierCertificate c = purify_function_multi(p);
  EXPECT_LE(recheck(c), 1e-7);
  EXPECT_LE(c.certificate.value, 1.0 / (0.2 * 0.2));
  EXPECT_LE(gamma2_value(c.instance), c.certificate.value + 1e-5);
  // Largest output weight 0.6 < ½ + δ.
  p.psi[0].setZero();
  p.psi[0].segment(0, 2) = std::sqrt(0.6) * random_state(2, rng);
  p.psi[0].segment(2, 2) = std::sqrt(0.4) * random_state(2, rng);
  EXPECT_THROW(purify_function_multi(p), InputError);
}

PurifierInstance general_instance(Rng& rng, double delta) {
  PurifierInstance p;
  p.delta = delta;
  for (int x = 0; x < 4; ++x) {
    p.labels.push_back(std::to_string(x));
    const CMatrix pr = random_projector(3, random_int(rng, 1, 2), rng);
    CVector v;
    do {
      v = random_state(3, rng);
    } while ((pr * v).squaredNorm() < delta);
    p.psi.push_back(v);
    p.projectors.push_back(pr);
  }
  return p;
}

TEST(Purifiers, GeneralTargetsAndCertificate) {
  Rng rng(3);
  for (int t = 0; t < 4; ++t) {
    const PurifierInstance p = general_instance(rng, 0.3);
    const GeneralPurifier g = purify_general(p);
    EXPECT_LE(g.sigma_unit_error, 1e-6);
    EXPECT_LE(g.sigma_support_error, 1e-6);
    EXPECT_LE(g.gram_error, 1e-9);
    const Gamma2Certificate& c = g.purifier.certificate;
    EXPECT_LE(recheck(g.purifier), 1e-7);
    EXPECT_LE(c.tail, 1e-6);
    EXPECT_LE(c.value, 2.0 / p.delta + c.tail);
    EXPECT_LE(gamma2_value(g.purifier.instance), c.value + 1e-5) << t;
  }
}

TEST(Purifiers, GeneralGramMatchesSeries) {
  Rng rng(8);
  const PurifierInstance p = general_instance(rng, 0.3);
  const GeneralPurifier g = purify_general(p);
  for (int x = 0; x < p.size(); ++x) {
    for (int y = 0; y < p.size(); ++y) {
      const CVector gx = p.projectors[x] * p.psi[x], gy = p.projectors[y] * p.psi[y];
      const cd q = (p.psi[x] - gx).dot(p.psi[y] - gy);
      cd term = gx.dot(gy), sum = 0.0;
      for (int k = 0; k < 1000; ++k, term *= q) sum += term;
      EXPECT_LT(std::abs(sum - g.sigma_gram(x, y)), 1e-9);
    }
  }
}

TEST(Purifiers, GeneralTruncationControl) {
  const PurifierInstance p = trend_instance(0.3);
  EXPECT_THROW(purify_general(p, 1), InputError);
  double prev = 1e300;
  for (int k : {30, 40, 60, 80}) {
    const double tail = purify_general(p, k, 1.0).purifier.certificate.tail;
    EXPECT_LT(tail, prev);
    prev = tail;
  }
}

TEST(Purifiers, GeneralRejectsLowSuccessWeight) {
  PurifierInstance p = trend_instance(0.3);
  p.delta = 0.5;
  EXPECT_THROW(purify_general(p), InputError);
}

TEST(Purifiers, TrendDeltaOneAndGrowth) {
  const TrendReport r = purifier_trend_check({1.0, 0.4, 0.2, 0.1});
  EXPECT_LE(r.points.front().value, 2.0 + 1e-6);
  EXPECT_TRUE(r.within_bound);
  for (size_t i = 1; i < r.points.size(); ++i) {
    EXPECT_GE(r.points[i].value, r.points[i - 1].value - 1e-6);
  }
}

TEST(Purifiers, InstanceJsonRoundTrip) {
  Rng rng(2);
  const PurifierInstance p = general_instance(rng, 0.3);
  const PurifierInstance b = PurifierInstance::from_json(p.to_json());
  EXPECT_EQ(b.labels, p.labels);
  EXPECT_LT((b.projectors[2] - p.projectors[2]).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(b.delta, 0.3);
}

}  // namespace
}  // namespace advbound
