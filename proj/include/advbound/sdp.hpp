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
 * @file sdp.hpp
 * Dense semidefinite programs in block standard form and a primal-dual
 * interior-point solver.
 *
 * Primal (minimisation):
 *   min  Σ_k <C_k, X_k>
 *   s.t. Σ_k <A_ik, X_k>  (= or ≤)  b_i
 *        X_k ⪰ 0 (psd), x ≥ 0 (nonneg), u free.
 *
 * Dual multipliers y satisfy C − Σ_i y_i A_i ∈ K* (y_i ≤ 0 on ≤ rows).
 * For maximisation the reported y satisfies Σ_i y_i A_i − C ∈ K*.
 */
#pragma once

#include <string>
#include <vector>

#include "advbound/numerics.hpp"

namespace advbound {

enum class BlockKind { psd, nonneg, free_scalar };
enum class Relation { eq, leq };
enum class Sense { minimize, maximize };
enum class SolveStatus { optimal, infeasible, unbounded, max_iterations };

std::string to_string(SolveStatus s);
std::string to_string(BlockKind k);

struct Block {
  BlockKind kind = BlockKind::psd;
  int dim = 0;
};

/// Coefficient A[row, col] = A[col, row] = value on a psd block; on scalar
/// blocks `row` indexes the scalar and `col` must be 0. Repeated (row, col)
/// pairs accumulate.
struct Entry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct LinearConstraint {
  std::vector<Entry> terms;
  Relation relation = Relation::eq;
  double rhs = 0.0;
};

struct BlockSDP {
  std::vector<Block> blocks;
  std::vector<Entry> objective;
  std::vector<LinearConstraint> constraints;
  Sense sense = Sense::minimize;

  int add_block(BlockKind kind, int dim);
  int add_constraint(std::vector<Entry> terms, Relation rel, double rhs);
  /// Throws InputError on out-of-range entries.
  void validate() const;
  json to_json() const;
};

struct SolverOptions {
  double tol = 1e-7;
  int max_iterations = 200;
};

struct SDPSolution {
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<RMatrix> primal;      // per block; scalar blocks as dim×1
  std::vector<RMatrix> dual_slack;  // Z per block, same layout
  RVector dual;                     // y per constraint
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;  // primal_objective − dual_objective (signed)
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;

  bool optimal() const { return status == SolveStatus::optimal; }
  json to_json() const;
};

/// Mehrotra predictor-corrector with the HKM search direction. Linearly
/// dependent equality rows are removed up front; inconsistent ones give
/// status infeasible.
SDPSolution solve_sdp(const BlockSDP& p, const SolverOptions& opt = {});

/// Value of Σ <A, X> for a list of terms against block values.
double evaluate_terms(const std::vector<Entry>& terms,
                      const std::vector<RMatrix>& x);

// Complex Hermitian programs. On a psd block entry (row, col, v) means
// H[row, col] = v and H[col, row] = conj(v); diagonal entries must be real.

struct HTerm {
  int block = 0;
  int row = 0;
  int col = 0;
  cd value{0.0, 0.0};
};

struct ComplexConstraint {
  std::vector<HTerm> terms;
  Relation relation = Relation::eq;
  double rhs = 0.0;
};

struct ComplexSDP {
  std::vector<Block> blocks;  // psd blocks are complex Hermitian
  std::vector<HTerm> objective;
  std::vector<ComplexConstraint> constraints;
  Sense sense = Sense::minimize;

  int add_block(BlockKind kind, int dim);
  int add_constraint(std::vector<HTerm> terms, Relation rel, double rhs);
};

/// Replaces each complex psd block of size n by the real symmetric 2n×2n
/// block [[Re, −Im], [Im, Re]] with coefficients halved so that
/// tr(H X) = ½ tr(emb(H) emb(X)). Scalar blocks pass through; rejects
/// complex values on scalar blocks and non-real diagonal entries.
BlockSDP embed_complex(const ComplexSDP& p);

/// The real embedding of a Hermitian matrix; rejects non-Hermitian input.
RMatrix embed_hermitian(const CMatrix& h, double tol = 1e-10);
/// Hermitian matrix represented by a real symmetric 2n×2n block
/// (average of the two diagonal copies).
CMatrix extract_hermitian(const RMatrix& y);

/// Appends terms whose value on Hermitian X equals Re(k·X[r,c]) / Im(k·X[r,c]).
void add_real_part(std::vector<HTerm>& terms, int block, int r, int c, cd k);
void add_imag_part(std::vector<HTerm>& terms, int block, int r, int c, cd k);

/// Complex block values recovered from a solution of embed_complex(p).
std::vector<CMatrix> complex_primal(const ComplexSDP& p, const SDPSolution& s);
std::vector<CMatrix> complex_dual_slack(const ComplexSDP& p,
                                        const SDPSolution& s);

}  // namespace advbound
