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
 * @file state_oracles.hpp
 * Bounds for oracles fixed only by the states they generate from the marked
 * vector e_0 (basis vector 0 of X), possibly n of them in direct sum.
 */
#pragma once

#include <string>
#include <vector>

#include "advbound/adversary.hpp"

namespace advbound {

enum class TargetKind { states, unitaries };

struct StateOracleProblem {
  std::vector<std::string> labels;
  std::vector<std::vector<CVector>> psi;  // psi[x][j], unit, ⟂ e_0
  // Targets: either start/target states or unitaries (or both).
  std::vector<CVector> rho;
  std::vector<CVector> sigma;
  std::vector<CMatrix> unitaries;

  int size() const { return static_cast<int>(labels.size()); }
  int oracle_count() const { return psi.empty() ? 0 : static_cast<int>(psi[0].size()); }
  int dim_x() const { return oracle_count() ? static_cast<int>(psi[0][0].size()) : 0; }
  bool has(TargetKind k) const {
    return k == TargetKind::states ? !rho.empty() : !unitaries.empty();
  }
  void validate() const;
  static StateOracleProblem from_json(const json& j);
  json to_json() const;
};

/// R(ψ) = I − (e_0 − ψ)(e_0 − ψ)*; sends e_0 to ψ when ψ ⟂ e_0.
CMatrix state_reflection(const CVector& psi);

/// Target family: ⟨ρ_x,ρ_y⟩ − ⟨σ_x,σ_y⟩ (1×1) or V_x − V_y.
std::vector<std::vector<CMatrix>> target_family(const StateOracleProblem& p,
                                                TargetKind kind);

/// Δ_xy = diag_j(1 − ⟨ψ_{x,j}, ψ_{y,j}⟩).
Gamma2Instance tadv_instance(const StateOracleProblem& p, TargetKind kind);
Gamma2Report tadv(const StateOracleProblem& p, TargetKind kind,
                  const Gamma2Options& opt = {});

/// Δ_xy = ⊕_j (R(ψ_{x,j}) − R(ψ_{y,j})).
Gamma2Instance reflection_instance(const StateOracleProblem& p, TargetKind kind);
Gamma2Report reflection_bound(const StateOracleProblem& p, TargetKind kind,
                              const Gamma2Options& opt = {});

/// Concrete oracles O_x = ⊕_j R(ψ_{x,j}) on J ⊗ X.
std::vector<CMatrix> reflection_completion(const StateOracleProblem& p);
StateConversionProblem conversion_completion(const StateOracleProblem& p);
UnitaryProblem unitary_completion(const StateOracleProblem& p);

/// Nonzero eigenvalues ±2 sin α of (I − 2ψψ*) − (I − 2φφ*), cos α = |⟨ψ,φ⟩|.
Spectrum reflection_difference_spectrum(const CVector& psi, const CVector& phi);

/// Standard oracle |b> -> |b + a mod q> on C^q.
CMatrix standard_oracle(int q, int a);
/// Instance (O_a − O_b | 1_{a≠b}) over a ∈ [q] with the explicit blocks
/// Υ_a = [O_a*; I], Φ_b = [I; −O_b] attached (objective 2).
struct StandardOracleCertificate {
  Gamma2Instance instance;
  Gamma2Certificate certificate;
};
StandardOracleCertificate standard_oracle_certificate(int q);

/// Strings over [q] of length n, as labels "x_0 x_1 ..." without separators.
std::vector<std::vector<int>> all_strings(int q, int n);
std::string string_label(const std::vector<int>& s);

/// Standard-oracle problem on [q]^n: ψ_{x,j} = e_{1+x_j} in C^{q+1}, with a
/// fixed start ρ = e_0 and targets σ_x = e_{f(x)} in C^m.
StateOracleProblem standard_function_problem(int q, int n, int m,
                                             const std::vector<int>& values);
/// Concrete standard oracles ⊕_j O_{x_j} for the same strings.
StateConversionProblem standard_conversion_problem(int q, int n, int m,
                                                   const std::vector<int>& values);

/// α = π/(4k); ⟨ψ_x, ψ_0⟩ = cos α, σ_x ⟂ σ_0, σ_x = σ_y for x, y ≠ 0, and
/// unitary targets V_0 = I, V_x = swap of the two target states.
struct AmplificationInstance {
  StateOracleProblem problem;
  double alpha = 0.0;
  Gamma2Certificate certificate;  // explicit tAdv solution, objective 1/(1−cos α)
  double beta = 0.0;              // angle between (e_0−ψ_x)/√2 and (e_0−ψ_0)/√2
};
AmplificationInstance make_amplitude_amplification(int k, int extra_labels = 1);

/// Two labels with ⟨ψ_0,ψ_1⟩ = cos α and ⟨σ_0,σ_1⟩ = cos γ, 1 − cos γ = sin α;
/// V_0 = I and V_1 the rotation by γ taking σ_0 to σ_1.
StateOracleProblem make_paradox_pair(double alpha);

/// Standard-oracle state generation over {0,1}^n with
/// σ_x = √(1−1/n)|A> + √(1/n)|B, parity(x)>; parity replaced by 0 when
/// `constant` is set.
StateOracleProblem make_kothari_parity(int n, bool constant = false);

}  // namespace advbound
