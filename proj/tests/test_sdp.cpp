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

#include "advbound/sdp.hpp"

namespace advbound {
namespace {

// Random feasible pair: X0 ≻ 0 gives b = A(X0), Z0 ≻ 0 and y0 give
// C = Z0 + Σ y0_i A_i. Both are strictly feasible, so the optimum has zero gap
// and lies at distance ≤ tol from the interior.
BlockSDP planted(Rng& rng, int n, int m, double& lower, double& upper) {
  BlockSDP p;
  const int blk = p.add_block(BlockKind::psd, n);
  RMatrix g = RMatrix::Random(n, n);
  const RMatrix x0 = g * g.transpose() + RMatrix::Identity(n, n);
  g = RMatrix::Random(n, n);
  const RMatrix z0 = g * g.transpose() + RMatrix::Identity(n, n);
  RMatrix c = z0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double by = 0.0;
  for (int i = 0; i < m; ++i) {
    RMatrix a = RMatrix::Zero(n, n);
    std::vector<Entry> terms;
    for (int r = 0; r < n; ++r) {
      for (int s = r; s < n; ++s) {
        const double v = u(rng);
        terms.push_back({blk, r, s, v});
        a(r, s) = v;
        a(s, r) = v;
      }
    }
    const double b = (a.cwiseProduct(x0)).sum();
    const double y = u(rng);
    c += y * a;
    by += b * y;
    p.add_constraint(std::move(terms), Relation::eq, b);
  }
  for (int r = 0; r < n; ++r) {
    for (int s = r; s < n; ++s) p.objective.push_back({blk, r, s, c(r, s)});
  }
  // Weak duality brackets the optimum: b·y0 ≤ opt ≤ <C, X0>.
  lower = by;
  upper = (c.cwiseProduct(x0)).sum();
  return p;
}

TEST(Sdp, PlantedInstancesReachZeroGap) {
  Rng rng(17);
  std::srand(17);
  for (int trial = 0; trial < 10; ++trial) {
    double lo = 0, hi = 0;
    const BlockSDP p = planted(rng, 2 + trial % 4, 1 + trial % 5, lo, hi);
    const SDPSolution s = solve_sdp(p);
    ASSERT_EQ(s.status, SolveStatus::optimal) << trial;
    EXPECT_LE(std::abs(s.gap), 1e-6 * (1 + std::abs(s.primal_objective)));
    EXPECT_GE(s.primal_objective, lo - 1e-6);
    EXPECT_LE(s.primal_objective, hi + 1e-6);
    // Returned blocks are PSD and satisfy the rows.
    Eigen::SelfAdjointEigenSolver<RMatrix> es(s.primal[0]);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
    for (const LinearConstraint& c : p.constraints) {
      EXPECT_NEAR(evaluate_terms(c.terms, s.primal), c.rhs, 1e-6 * (1 + std::abs(c.rhs)));
    }
  }
}

TEST(Sdp, LinearProgramWithInequality) {
  // min −x1 − 2x2 s.t. x1 + x2 ≤ 1, x ≥ 0 → −2.
  BlockSDP p;
  const int b = p.add_block(BlockKind::nonneg, 2);
  p.objective = {{b, 0, 0, -1.0}, {b, 1, 0, -2.0}};
  p.add_constraint({{b, 0, 0, 1.0}, {b, 1, 0, 1.0}}, Relation::leq, 1.0);
  const SDPSolution s = solve_sdp(p);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.primal_objective, -2.0, 1e-6);
}

TEST(Sdp, MaximisationSense) {
  // max tr X s.t. X_00 + X_11 ≤ 3, X ⪰ 0 → 3.
  BlockSDP p;
  p.sense = Sense::maximize;
  const int b = p.add_block(BlockKind::psd, 2);
  p.objective = {{b, 0, 0, 1.0}, {b, 1, 1, 1.0}};
  p.add_constraint({{b, 0, 0, 1.0}, {b, 1, 1, 1.0}}, Relation::leq, 3.0);
  const SDPSolution s = solve_sdp(p);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.primal_objective, 3.0, 1e-6);
}

TEST(Sdp, DetectsInfeasible) {
  // X_00 = −1 with X ⪰ 0.
  BlockSDP p;
  const int b = p.add_block(BlockKind::psd, 1);
  p.objective = {{b, 0, 0, 1.0}};
  p.add_constraint({{b, 0, 0, 1.0}}, Relation::eq, -1.0);
  EXPECT_EQ(solve_sdp(p).status, SolveStatus::infeasible);
}

TEST(Sdp, DetectsInconsistentRows) {
  BlockSDP p;
  const int b = p.add_block(BlockKind::nonneg, 1);
  p.objective = {{b, 0, 0, 1.0}};
  p.add_constraint({{b, 0, 0, 1.0}}, Relation::eq, 1.0);
  p.add_constraint({{b, 0, 0, 2.0}}, Relation::eq, 3.0);
  EXPECT_EQ(solve_sdp(p).status, SolveStatus::infeasible);
}

TEST(Sdp, DetectsUnbounded) {
  // min −u over a free scalar.
  BlockSDP p;
  const int b = p.add_block(BlockKind::free_scalar, 1);
  const int s = p.add_block(BlockKind::nonneg, 1);
  p.objective = {{b, 0, 0, -1.0}};
  p.add_constraint({{b, 0, 0, 1.0}, {s, 0, 0, -1.0}}, Relation::eq, 0.0);
  EXPECT_EQ(solve_sdp(p).status, SolveStatus::unbounded);
}

TEST(Sdp, NoiseRowsAreTreatedAsZero) {
  // A row of rounding-noise coefficients must not become a unit constraint.
  BlockSDP p;
  const int b = p.add_block(BlockKind::psd, 2);
  p.objective = {{b, 0, 0, 1.0}, {b, 1, 1, 1.0}};
  // Off-diagonal entries are symmetric: this row is 2·X01 = 1, so min tr X = 1.
  p.add_constraint({{b, 0, 1, 1.0}}, Relation::eq, 1.0);
  p.add_constraint({{b, 0, 0, 1e-17}}, Relation::eq, 1e-17);
  const SDPSolution s = solve_sdp(p);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-6);
}

TEST(Sdp, ComplexEmbeddingPreservesTrace) {
  Rng rng(6);
  const CMatrix g = random_matrix(3, 3, rng);
  const CMatrix h = g + g.adjoint();
  const CMatrix x = g * g.adjoint();
  const RMatrix eh = embed_hermitian(h), ex = embed_hermitian(x);
  EXPECT_NEAR(0.5 * (eh.cwiseProduct(ex)).sum(), (h * x).trace().real(), 1e-10);
  EXPECT_LT((extract_hermitian(ex) - x).norm(), 1e-12);
}

TEST(Sdp, ComplexProgramReadsRealAndImaginaryParts) {
  // min tr X s.t. Re X01 = 0, Im X01 = 1 → X = [[1, i], [−i, 1]], value 2.
  ComplexSDP p;
  const int b = p.add_block(BlockKind::psd, 2);
  p.objective = {{b, 0, 0, 1.0}, {b, 1, 1, 1.0}};
  std::vector<HTerm> re, im;
  add_real_part(re, b, 0, 1, 1.0);
  add_imag_part(im, b, 0, 1, 1.0);
  p.add_constraint(re, Relation::eq, 0.0);
  p.add_constraint(im, Relation::eq, 1.0);
  const SDPSolution s = solve_sdp(embed_complex(p));
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.primal_objective, 2.0, 1e-6);
  const CMatrix x = complex_primal(p, s)[b];
  EXPECT_NEAR(x(0, 1).imag(), 1.0, 1e-6);
}

TEST(Sdp, ValidateRejectsOutOfRange) {
  BlockSDP p;
  p.add_block(BlockKind::psd, 2);
  p.objective = {{0, 2, 0, 1.0}};
  EXPECT_THROW(p.validate(), InputError);
}

TEST(Sdp, WeakDualityAndObjectiveScaling) {
  std::srand(23);
  for (int t = 0; t < 5; ++t) {
    // min <C, X> s.t. tr X = 1: the least eigenvalue of C.
    BlockSDP p;
    const int b = p.add_block(BlockKind::psd, 3);
    RMatrix c = RMatrix::Random(3, 3);
    c = (c + c.transpose()).eval();
    std::vector<Entry> trace;
    for (int i = 0; i < 3; ++i) {
      trace.push_back({b, i, i, 1.0});
      for (int j = i; j < 3; ++j) p.objective.push_back({b, i, j, c(i, j)});
    }
    p.add_constraint(trace, Relation::eq, 1.0);
    const SDPSolution s = solve_sdp(p);
    ASSERT_TRUE(s.optimal());
    EXPECT_GE(s.primal_objective, s.dual_objective - 1e-8);
    EXPECT_NEAR(s.primal_objective, Eigen::SelfAdjointEigenSolver<RMatrix>(c).eigenvalues()(0), 1e-6);

    BlockSDP q = p;
    for (Entry& e : q.objective) e.value *= 3.5;
    const SDPSolution sq = solve_sdp(q);
    ASSERT_TRUE(sq.optimal());
    EXPECT_NEAR(sq.primal_objective, 3.5 * s.primal_objective, 1e-6 * (1 + std::abs(sq.primal_objective)));
    EXPECT_NEAR(sq.dual_objective, 3.5 * s.dual_objective, 1e-6 * (1 + std::abs(sq.dual_objective)));
  }
}

TEST(Sdp, ComplexEmbeddingPreservesLeastEigenvalue) {
  Rng rng(24);
  for (int t = 0; t < 10; ++t) {
    const int n = random_int(rng, 1, 4);
    const CMatrix g = random_matrix(n, n, rng);
    // Both signs of the least eigenvalue occur.
    const CMatrix h = g * g.adjoint() - random_uniform(rng, 0.0, 1.0) * identity(n);
    const RMatrix e = embed_hermitian(h);
    const double me = Eigen::SelfAdjointEigenSolver<RMatrix>(e).eigenvalues()(0);
    EXPECT_NEAR(me, min_eigenvalue(h), 1e-9);
  }
}

}  // namespace
}  // namespace advbound
