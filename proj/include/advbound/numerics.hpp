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
 * @file numerics.hpp
 * Dense complex linear algebra used by every other part of the library.
 *
 * Matrices are Eigen dense types. States are column vectors. Kronecker
 * products use the row-major convention: index (i, j) of A⊗B maps to
 * i * dim(B) + j.
 */
#pragma once

#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace advbound {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using json = nlohmann::json;

/// Raised on malformed numerical input (shape mismatch, non-finite, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SVDResult {
  RVector singular_values;  // descending
  CMatrix left;             // columns u_i
  CMatrix right;            // columns v_i
};

/// Eigenpairs. For unitary input `phases` holds arg(eigenvalue) in (-pi, pi].
struct Spectrum {
  std::vector<cd> eigenvalues;
  std::vector<double> phases;
  CMatrix eigenvectors;  // orthonormal columns
};

void require_finite(const CMatrix& m, const std::string& what);
void require_same_shape(const CMatrix& a, const CMatrix& b,
                        const std::string& what);

SVDResult svd(const CMatrix& m);
double spectral_norm(const CMatrix& m);
double trace_norm(const CMatrix& m);

/// Deviation ‖U*U − I‖ (spectral norm).
double unitarity_deviation(const CMatrix& u);
double hermiticity_deviation(const CMatrix& h);

/// Throws InputError carrying the deviation when ‖U*U − I‖ > tol.
/// Eigenvectors come from a complex Schur form, which is diagonal for normal
/// input, so columns are orthonormal even on degenerate eigenspaces.
Spectrum eig_unitary(const CMatrix& u, double tol = 1e-8);

/// Eigenvalues ascending. Input must be Hermitian to `tol`.
Spectrum eig_hermitian(const CMatrix& h, double tol = 1e-8);
double min_eigenvalue(const CMatrix& h);
double max_eigenvalue(const CMatrix& h);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix direct_sum(const CMatrix& a, const CMatrix& b);
CMatrix direct_sum(const std::vector<CMatrix>& parts);
CMatrix hadamard(const CMatrix& a, const CMatrix& b);
CVector stack(const std::vector<CVector>& parts);

/// Orthonormal basis (columns) of the column span, singular values <= cutoff
/// relative to 1 are dropped.
CMatrix orthonormal_basis(const CMatrix& cols, double cutoff = 1e-10);
/// Orthogonal projector onto the column span.
CMatrix range_projector(const CMatrix& cols, double cutoff = 1e-10);
/// I − 2Π style reflection 2Π − I.
CMatrix reflection(const CMatrix& projector);

/// Projects a Hermitian matrix onto the PSD cone (negative eigenvalues -> 0).
CMatrix psd_part(const CMatrix& h);
/// Factor H ⪰ 0 as G*G with G of shape rank × n; eigenvalues <= cutoff dropped.
CMatrix gram_factor(const CMatrix& h, double cutoff);

/// Standard basis column e_i in dimension n.
CVector basis_vector(int n, int i);
CMatrix identity(int n);

// JSON: {"rows": n, "cols": m, "data": [[re, im], ...]} row-major.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j, const std::string& where = "matrix");
/// Accepts the matrix encoding with one column or a plain [[re, im], ...] list.
CVector vector_from_json(const json& j, const std::string& where = "vector");
json complex_to_json(cd z);
/// List of [re, im] pairs.
json vector_to_json(const CVector& v);

// Seeded generators for property suites.
using Rng = std::mt19937_64;
cd random_complex(Rng& rng);
CMatrix random_matrix(int rows, int cols, Rng& rng);
CVector random_state(int n, Rng& rng);
/// Haar-like unitary from QR of a Gaussian matrix with phase fix.
CMatrix random_unitary(int n, Rng& rng);
/// Uniformly random rank-k orthogonal projector in dimension n.
CMatrix random_projector(int n, int k, Rng& rng);
double random_uniform(Rng& rng, double lo, double hi);
int random_int(Rng& rng, int lo, int hi);  // inclusive

}  // namespace advbound
