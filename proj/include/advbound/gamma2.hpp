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
 * @file gamma2.hpp
 * Relative γ₂-norm γ₂(A|Δ): the least max(‖Υ_x‖², ‖Φ_y‖²) over
 * factorizations A_xy = Υ_x*(Δ_xy ⊗ I_W)Φ_y.
 *
 * Gram convention: X = G*G, with one column of G per index (x, i, s) of
 * D1 × X1 × Z1 followed by (y, j, t) of D2 × X2 × Z2, so that
 * A_xy[s,t] = Σ_ij Δ_xy[i,j] X[(x,i,s),(y,j,t)].
 */
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "advbound/numerics.hpp"
#include "advbound/sdp.hpp"

namespace advbound {

struct Gamma2Instance {
  std::vector<std::string> labels1;
  std::vector<std::string> labels2;
  std::vector<std::vector<CMatrix>> a;      // a[x][y]: Z2 -> Z1
  std::vector<std::vector<CMatrix>> delta;  // delta[x][y]: X2 -> X1

  int n1() const { return static_cast<int>(labels1.size()); }
  int n2() const { return static_cast<int>(labels2.size()); }
  int dz1() const { return n1() && n2() ? static_cast<int>(a[0][0].rows()) : 0; }
  int dz2() const { return n1() && n2() ? static_cast<int>(a[0][0].cols()) : 0; }
  int dx1() const { return n1() && n2() ? static_cast<int>(delta[0][0].rows()) : 0; }
  int dx2() const { return n1() && n2() ? static_cast<int>(delta[0][0].cols()) : 0; }
  bool scalar() const { return dz1() == 1 && dz2() == 1; }

  /// Shapes consistent and finite; throws InputError naming the pair.
  void validate() const;
  /// First pair with Δ_xy = 0 but A_xy ≠ 0 (the value is then +∞).
  std::optional<std::pair<int, int>> infinite_pair(double tol = 1e-12) const;

  static Gamma2Instance from_json(const json& j);
  json to_json() const;
};

/// Labels "0".."n-1".
std::vector<std::string> index_labels(int n);
/// Family with a common shape from element-wise generators.
Gamma2Instance make_instance(const std::vector<std::vector<CMatrix>>& a,
                             const std::vector<std::vector<CMatrix>>& delta);
/// Scalar family a_xy = M[x,y], δ_xy = d[x,y].
Gamma2Instance scalar_instance(const CMatrix& a, const CMatrix& d);
/// Plain γ₂(M) = γ₂(M[x,y] | 1).
Gamma2Instance plain_instance(const CMatrix& m);

struct Gamma2Primal {
  std::vector<CMatrix> upsilon;  // Υ_x: Z1 -> X1 ⊗ W
  std::vector<CMatrix> phi;      // Φ_y: Z2 -> X2 ⊗ W
  int workspace = 0;             // |W|
  CMatrix gram;                  // SDP Gram matrix
};

struct Gamma2Dual {
  RVector mu;      // D1 entries then D2 entries
  CMatrix lambda;  // D1 × D2
  CMatrix gamma;   // λ_xy / (√μ_x √μ_y), 0/0 = 0
  double gamma_delta_norm = 0.0;  // ‖Γ∘Δ‖
  double gamma_a_norm = 0.0;      // ‖Γ∘A‖
  double raw_min_eig = 0.0;       // min eig W before repair
  double raw_mu_sum = 0.0;        // Σμ before repair
};

struct Gamma2Certificate {
  double value = 0.0;
  std::optional<Gamma2Primal> primal;
  std::optional<Gamma2Dual> dual;
  double residual = 0.0;  // max ‖A_xy − Υ_x*(Δ⊗I)Φ_y‖, or dual violation
  double factor_objective = 0.0;  // max(‖Υ_x‖², ‖Φ_y‖²)
  double gap = 0.0;               // solver duality gap
  SolveStatus status = SolveStatus::optimal;
  int iterations = 0;
  double tail = 0.0;  // truncation tail for series-built certificates

  json to_json() const;
};

/// Reads the primal factors ("primal": {"upsilon", "phi"}) and the scalar
/// fields written by Gamma2Certificate::to_json; the dual part is ignored.
Gamma2Certificate certificate_from_json(const json& j);

struct Gamma2Options {
  double tol = 1e-7;
  double rank_cutoff = 1e-9;
  BlockSDP* dump = nullptr;  // receives the compiled program when set
};

/// Gram-matrix primal program; handles matrix-valued A.
Gamma2Certificate gamma2_primal(const Gamma2Instance& inst,
                                const Gamma2Options& opt = {});
/// Lagrangian dual for one-dimensional A; λ, μ read from the multipliers and
/// repaired to exact feasibility (uniform μ shift, then renormalization).
Gamma2Certificate gamma2_dual(const Gamma2Instance& inst,
                              const Gamma2Options& opt = {});
/// Primal certificate plus, for one-dimensional A, the dual certificate.
struct Gamma2Report {
  Gamma2Certificate primal;
  std::optional<Gamma2Certificate> dual;
  double value() const { return primal.value; }
  /// |primal − dual| when the dual was solved, else the solver gap.
  double duality_gap() const;
  bool optimal() const;
  json to_json() const;
};
Gamma2Report gamma2_solve(const Gamma2Instance& inst,
                          const Gamma2Options& opt = {});

/// Convenience: primal value.
double gamma2_value(const Gamma2Instance& inst, double tol = 1e-7);

/// Σ ‖A_xy‖_tr / ‖Δ_xy‖ with 0/0 = 0 (+∞ if some Δ = 0 ≠ A).
double crude_bound(const Gamma2Instance& inst);
/// max ‖A_xy‖ / ‖Δ_xy‖ with 0/0 = 0 (+∞ if some Δ = 0 ≠ A).
double entrywise_lower_bound(const Gamma2Instance& inst);
/// Matrix a_xy/δ_xy; rejects zero δ or non-scalar blocks.
CMatrix reduce_scalar(const Gamma2Instance& inst);

/// Independent check of a factorization against an instance.
double factorization_residual(const Gamma2Instance& inst,
                              const std::vector<CMatrix>& upsilon,
                              const std::vector<CMatrix>& phi);
double factorization_objective(const std::vector<CMatrix>& upsilon,
                               const std::vector<CMatrix>& phi);
/// Factors from a Gram matrix in the convention above.
Gamma2Primal factor_gram(const Gamma2Instance& inst, const CMatrix& gram,
                         double cutoff);
/// Independent check of a dual point (exact W(λ, μ) ⪰ 0, Σμ = 1).
struct DualCheck {
  double mu_sum = 0.0;
  double min_eig = 0.0;
  double objective = 0.0;
};
DualCheck check_dual(const Gamma2Instance& inst, const RVector& mu,
                     const CMatrix& lambda);
CMatrix dual_matrix(const Gamma2Instance& inst, const RVector& mu,
                    const CMatrix& lambda);

enum class CombineMode { compose, direct_sum, tensor, hadamard_scale };
CombineMode combine_mode_from_string(const std::string& s);

/// compose: a = (A|B), b = (B|Δ) -> (A|Δ).
/// direct_sum: (A⊕B | Δ) when both Δ families agree, else (A⊕B | Δ⊕E).
/// tensor: (A⊗B | Δ⊗E).
/// hadamard_scale: a = plain matrix B (Δ ≡ 1), b = (A|Δ) -> (B[x,y]A_xy | Δ).
Gamma2Instance combine(const Gamma2Instance& a, const Gamma2Instance& b,
                       CombineMode mode);

struct CombineReport {
  double value_a = 0.0;
  double value_b = 0.0;
  double value_combined = 0.0;
  double bound = 0.0;  // product or max
  bool equality = false;  // direct_sum with a shared Δ
  double slack = 0.0;     // bound − combined (≥ −tol expected)
  json to_json() const;
};
CombineReport combine_check(const Gamma2Instance& a, const Gamma2Instance& b,
                            CombineMode mode, double tol = 1e-7);

/// Sub-instance on the given row and column subsets.
Gamma2Instance strike(const Gamma2Instance& inst, const std::vector<int>& rows,
                      const std::vector<int>& cols);
/// Each row label repeated r times and each column label c times.
Gamma2Instance duplicate(const Gamma2Instance& inst, int r, int c);

/// Certificate for Y[i,j] = 1/(1 − X[i,j]) built from Hadamard powers
/// X^{∘k}, k ≤ K, of a factorization of X with max squared norm g < 1.
/// value = (1 − g^{K+1})/(1 − g); tail = g^{K+1}/(1 − g) bounds the
/// entrywise truncation error. K ≤ 0 selects the least K with tail ≤ 1e-6.
struct GeometricCertificate {
  Gamma2Certificate cert;  // factors certify the truncated series Y_K
  double g = 0.0;          // squared-norm bound of the base factorization
  int k = 0;
  CMatrix y;               // exact 1/(1 − X)
  CMatrix y_truncated;     // Σ_{k ≤ K} X^{∘k}
};
GeometricCertificate geometric_certificate(const CMatrix& x, int k = 0,
                                           double tol = 1e-7);
/// Same, from an explicit factorization X[i,j] = ⟨u_i, v_j⟩ (columns).
GeometricCertificate geometric_certificate_from_factors(const CMatrix& u,
                                                        const CMatrix& v,
                                                        int k = 0);

}  // namespace advbound
