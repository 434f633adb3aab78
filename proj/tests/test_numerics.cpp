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

#include "advbound/numerics.hpp"

namespace advbound {
namespace {

TEST(Numerics, KronUsesRowMajorIndexing) {
  CMatrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  const CMatrix k = kron(a, b);
  // (i, j) of a paired with (r, s) of b sits at (2i + r, 2j + s).
  EXPECT_EQ(k(1 * 2 + 0, 0 * 2 + 1), a(1, 0) * b(0, 1));
  EXPECT_EQ(k(0 * 2 + 1, 1 * 2 + 0), a(0, 1) * b(1, 0));
  EXPECT_EQ(k(3, 3), a(1, 1) * b(1, 1));
}

TEST(Numerics, SvdReconstructsAndSortsDescending) {
  Rng rng(11);
  const CMatrix m = random_matrix(4, 3, rng);
  const SVDResult s = svd(m);
  for (int i = 1; i < s.singular_values.size(); ++i) {
    EXPECT_GE(s.singular_values(i - 1), s.singular_values(i));
  }
  const CMatrix back = s.left * s.singular_values.cast<cd>().asDiagonal() * s.right.adjoint();
  EXPECT_LT((back - m).norm(), 1e-12);
  EXPECT_NEAR(spectral_norm(m), s.singular_values(0), 1e-12);
  EXPECT_NEAR(trace_norm(m), s.singular_values.sum(), 1e-12);
}

TEST(Numerics, UnitarySpectrumHasUnitModulusAndBranch) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix u = random_unitary(random_int(rng, 1, 5), rng);
    const Spectrum s = eig_unitary(u);
    for (size_t k = 0; k < s.eigenvalues.size(); ++k) {
      EXPECT_NEAR(std::abs(s.eigenvalues[k]), 1.0, 1e-8);
      EXPECT_GT(s.phases[k], -M_PI);
      EXPECT_LE(s.phases[k], M_PI);
    }
    const int n = static_cast<int>(u.rows());
    EXPECT_LT((s.eigenvectors.adjoint() * s.eigenvectors - identity(n)).norm(), 1e-8);
  }
}

TEST(Numerics, PhaseTieAtPiResolvesToPlusPi) {
  const Spectrum s = eig_unitary(-identity(2));
  for (double p : s.phases) EXPECT_DOUBLE_EQ(p, M_PI);
}

TEST(Numerics, DegenerateUnitaryKeepsOrthonormalEigenvectors) {
  CMatrix u = identity(4);
  u(0, 0) = -1.0;
  u(1, 1) = -1.0;
  Rng rng(5);
  const CMatrix v = random_unitary(4, rng);
  const Spectrum s = eig_unitary(v * u * v.adjoint());
  EXPECT_LT((s.eigenvectors.adjoint() * s.eigenvectors - identity(4)).norm(), 1e-8);
}

TEST(Numerics, RejectsNonUnitaryAndNonFinite) {
  CMatrix m = identity(2);
  m(0, 1) = 0.5;
  EXPECT_THROW(eig_unitary(m), InputError);
  CMatrix bad = identity(2);
  bad(1, 1) = std::nan("");
  EXPECT_THROW(require_finite(bad, "bad"), InputError);
}

TEST(Numerics, HermitianEigenvaluesAscending) {
  Rng rng(9);
  const CMatrix g = random_matrix(5, 5, rng);
  const CMatrix h = g + g.adjoint();
  const Spectrum s = eig_hermitian(h);
  for (size_t k = 1; k < s.eigenvalues.size(); ++k) {
    EXPECT_LE(s.eigenvalues[k - 1].real(), s.eigenvalues[k].real());
  }
  EXPECT_NEAR(min_eigenvalue(h), s.eigenvalues.front().real(), 1e-12);
  EXPECT_NEAR(max_eigenvalue(h), s.eigenvalues.back().real(), 1e-12);
}

TEST(Numerics, PsdPartAndGramFactor) {
  Rng rng(2);
  const CMatrix g = random_matrix(3, 4, rng);
  const CMatrix h = g.adjoint() * g;  // rank 3 in dimension 4
  const CMatrix f = gram_factor(h, 1e-10);
  EXPECT_EQ(f.rows(), 3);
  EXPECT_LT((f.adjoint() * f - h).norm(), 1e-10);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  EXPECT_NEAR(min_eigenvalue(psd_part(d)), 0.0, 1e-14);
}

TEST(Numerics, ProjectorsAndReflections) {
  Rng rng(4);
  for (int k = 0; k <= 3; ++k) {
    const CMatrix p = random_projector(3, k, rng);
    EXPECT_LT((p * p - p).norm(), 1e-12);
    EXPECT_NEAR(p.trace().real(), k, 1e-12);
    const CMatrix r = reflection(p);
    EXPECT_LT((r * r - identity(3)).norm(), 1e-12);
  }
  CMatrix cols(3, 1);
  cols << 1, 1, 0;
  const CMatrix pr = range_projector(cols);
  EXPECT_NEAR(pr(0, 1).real(), 0.5, 1e-12);
}

TEST(Numerics, MatrixJsonRoundTrip) {
  Rng rng(8);
  const CMatrix m = random_matrix(2, 3, rng);
  const CMatrix back = matrix_from_json(matrix_to_json(m));
  EXPECT_EQ(back, m);
  const CVector v = random_state(3, rng);
  EXPECT_EQ(vector_from_json(vector_to_json(v)), v);
  EXPECT_THROW(matrix_from_json(json{{"rows", 2}, {"cols", 2}, {"data", json::array()}}),
               InputError);
}

TEST(Numerics, DirectSumAndHadamard) {
  const CMatrix a = CMatrix::Constant(1, 1, 2.0), b = identity(2);
  const CMatrix s = direct_sum(a, b);
  EXPECT_EQ(s.rows(), 3);
  EXPECT_EQ(s(0, 0), cd(2.0));
  EXPECT_EQ(s(0, 1), cd(0.0));
  EXPECT_EQ(hadamard(b, CMatrix::Constant(2, 2, 3.0)), 3.0 * b);
}

TEST(Numerics, SeededGeneratorsAreReproducible) {
  Rng a(42), b(42);
  EXPECT_EQ(random_unitary(3, a), random_unitary(3, b));
}

TEST(Numerics, NormInequalitiesOnRandomMatrices) {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const int n = random_int(rng, 1, 4), k = random_int(rng, 1, 4), m = random_int(rng, 1, 4);
    const CMatrix a = random_matrix(n, k, rng), b = random_matrix(k, m, rng);
    const CMatrix c = random_matrix(m, n, rng);
    EXPECT_LE(spectral_norm(a * b), spectral_norm(a) * spectral_norm(b) + 1e-9);
    EXPECT_NEAR(spectral_norm(kron(a, c)), spectral_norm(a) * spectral_norm(c), 1e-9);
    EXPECT_NEAR(spectral_norm(random_unitary(n, rng)), 1.0, 1e-9);
  }
}

TEST(Numerics, DecompositionsReconstructTheirInput) {
  Rng rng(22);
  for (int t = 0; t < 10; ++t) {
    const int n = random_int(rng, 1, 5);
    const CMatrix g = random_matrix(n, n, rng);
    const CMatrix h = g + g.adjoint();
    const Spectrum sh = eig_hermitian(h);
    CMatrix d = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = sh.eigenvalues[i];
    EXPECT_LT((sh.eigenvectors * d * sh.eigenvectors.adjoint() - h).norm(), 1e-10 * h.norm());

    const CMatrix u = random_unitary(n, rng);
    const Spectrum su = eig_unitary(u);
    for (int i = 0; i < n; ++i) d(i, i) = su.eigenvalues[i];
    EXPECT_LT((su.eigenvectors * d * su.eigenvectors.adjoint() - u).norm(), 1e-10 * u.norm());

    const SVDResult s = svd(g);
    const CMatrix back = s.left * s.singular_values.cast<cd>().asDiagonal() * s.right.adjoint();
    EXPECT_LT((back - g).norm(), 1e-10 * g.norm());
  }
}

}  // namespace
}  // namespace advbound
