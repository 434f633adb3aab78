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
 * @file adversary.hpp
 * Adversary bounds of state conversion, unitary implementation and
 * fractional-query problems as relative γ₂ instances, and feasible solutions
 * extracted from exact query algorithms.
 */
#pragma once

#include <string>
#include <vector>

#include "advbound/gamma2.hpp"
#include "advbound/query.hpp"

namespace advbound {

/// Oracles O_x on X; start and target unit vectors in Z.
struct StateConversionProblem {
  std::vector<std::string> labels;
  std::vector<CMatrix> oracles;
  std::vector<CVector> rho;
  std::vector<CVector> sigma;

  int size() const { return static_cast<int>(labels.size()); }
  int dim_x() const { return oracles.empty() ? 0 : static_cast<int>(oracles[0].rows()); }
  int dim_z() const { return rho.empty() ? 0 : static_cast<int>(rho[0].size()); }
  void validate() const;
  static StateConversionProblem from_json(const json& j);
  json to_json() const;
};

/// Oracles O_x on X; target unitaries V_x on Z.
struct UnitaryProblem {
  std::vector<std::string> labels;
  std::vector<CMatrix> oracles;
  std::vector<CMatrix> targets;

  int size() const { return static_cast<int>(labels.size()); }
  int dim_z() const { return targets.empty() ? 0 : static_cast<int>(targets[0].rows()); }
  void validate() const;
  static UnitaryProblem from_json(const json& j);
  json to_json() const;
};

/// Oracle difference family: O_x − O_y, or I − O_x*O_y.
enum class DeltaForm { difference, inner };
DeltaForm delta_form_from_string(const std::string& s);

Gamma2Instance state_conversion_instance(const StateConversionProblem& p,
                                         DeltaForm form = DeltaForm::difference);
Gamma2Instance unitary_instance(const UnitaryProblem& p);
/// γ₂(V_x − V_y | H_x − H_y); rejects non-Hermitian H_x.
Gamma2Instance fractional_instance(const std::vector<std::string>& labels,
                                   const std::vector<CMatrix>& hamiltonians,
                                   const std::vector<CMatrix>& targets);

Gamma2Report adv_state_conversion(const StateConversionProblem& p,
                                  DeltaForm form = DeltaForm::difference,
                                  const Gamma2Options& opt = {});
/// Primal only; the certificate's gap is the solver's.
Gamma2Certificate adv_unitary(const UnitaryProblem& p,
                              const Gamma2Options& opt = {});
Gamma2Certificate adv_fractional(const std::vector<std::string>& labels,
                                 const std::vector<CMatrix>& hamiltonians,
                                 const std::vector<CMatrix>& targets,
                                 const Gamma2Options& opt = {});

/// Feasible solution u_x = ⊕_i u_x^(i), v_y = ⊕_i v_y^(i) built from the
/// state sequence of an exact algorithm. Per slot with a = Π U_i ρ^(i):
/// direct queries give u = (O_x ⊗ I)a, v = a; inverse queries give
/// u = −a, v = (O_y* ⊗ I)a. Rejects algorithms that miss σ_x by > 1e-6.
Gamma2Certificate feasible_from_algorithm(const QueryAlgorithm& alg,
                                          const StateConversionProblem& p);
/// Υ_x = Υ'_x V_x*, Φ_y assembled from runs on the basis states of Z.
Gamma2Certificate unitary_feasible_from_algorithm(const QueryAlgorithm& alg,
                                                  const UnitaryProblem& p);

/// One query: ρ = e_0 is sent to (e_0 ± e_1)/√2 under the oracle ±1.
QueryAlgorithm distinguisher_algorithm();
/// Two queries (inverse then direct) implementing R(ψ) = I − (e_0−ψ)(e_0−ψ)*
/// on Z = X for any oracle with O e_0 = ψ ⊥ e_0. S is a copy of X, W = C.
QueryAlgorithm reflection_algorithm(int dim_x);

}  // namespace advbound
