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
 * @file conversion.hpp
 * Simulation of the converter built from a feasible adversary solution:
 * phase detection on U_x = (2Π_x − I)(2Λ − I) followed by a swap of Z and S.
 *
 * State space Z ⊕ S ⊕ A ⊕ B with S ≅ Z and A ≅ B ≅ X ⊗ W. Phase detection
 * is idealized as 2P_0 − I with P_0 the exact eigenphase-0 projector.
 */
#pragma once

#include <string>
#include <vector>

#include "advbound/adversary.hpp"

namespace advbound {

struct ConverterModel {
  StateConversionProblem problem;
  std::vector<CVector> u;  // u_x in X ⊗ W
  std::vector<CVector> v;  // v_x in X ⊗ W
  int dim_w = 0;
  double w = 0.0;          // objective bound W used by the construction
  double epsilon = 0.0;
  double epsilon_prime = 0.0;  // ε/4
  double delta = 0.0;          // ε′²/W
  CMatrix lambda;              // projector onto span{ψ_x}^⊥
  std::vector<CMatrix> pi;     // Π_x
  std::vector<CMatrix> unitary;  // U_x
  std::vector<CVector> t_plus, t_minus, psi;

  int dim() const { return static_cast<int>(lambda.rows()); }
  int dim_z() const { return problem.dim_z(); }
  int label_index(const std::string& label) const;
};

/// Rejects certificates whose residual against the difference-form
/// instance exceeds 1e-7 and ε ≤ 0. W is max(factor objective, ε), so a zero
/// certificate still yields a well-defined model.
ConverterModel build_converter(const StateConversionProblem& p,
                               const Gamma2Certificate& cert, double epsilon);

struct ConverterRun {
  CVector final_state;
  double error = 0.0;  // ‖final − |Z>σ_x‖ over the whole space
  // Terms of the error chain: ‖P̃t+ − t+‖/√2 and ‖P̃t− + t−‖/√2.
  double term_plus = 0.0;
  double term_minus = 0.0;
  json to_json() const;
};
ConverterRun run_converter(const ConverterModel& m, int x);

struct ClaimReport {
  double fixed_residual = 0.0;      // ‖U_xφ − φ‖
  double overlap = 0.0;             // ⟨t+, φ⟩²/‖φ‖²
  double overlap_bound = 0.0;       // 1 − ε′²
  double p0_perp_t_plus = 0.0;      // ‖P_0^⊥ t+‖
  double p_delta_t_minus = 0.0;     // ‖P_δ t−‖
  double t_minus_bound = 0.0;       // (δ/2)√(1 + W²/ε′²)
  bool claim_plus = false;
  bool claim_minus = false;
  json to_json() const;
};
ClaimReport verify_claims(const ConverterModel& m, int x, double tol = 1e-7);

/// ‖P_δ Π₂ w‖ − (δ/2)‖w‖ for P_δ the eigenphase-|θ| ≤ δ projector of
/// (2Π₂ − I)(2Π₁ − I). Requires Π₁w = 0 to 1e-9.
double effective_gap_check(const CMatrix& pi1, const CMatrix& pi2,
                           const CVector& w, double delta);

/// Projector onto eigenvectors of a unitary with |θ| ≤ threshold.
CMatrix phase_projector(const CMatrix& u, double threshold);

}  // namespace advbound
