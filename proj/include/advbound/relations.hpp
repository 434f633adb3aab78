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
 * @file relations.hpp
 * Lower bounds for evaluating a relation r: D -> subsets of [m] with input
 * oracles O_x, in the worst-case error, exact and average-error settings.
 *
 * Each setting has a minimisation program over a Gram matrix X (as in
 * gamma2.hpp, workspace-free) and output Grams Y_a[x,y] = ⟨σ_{x,a}, σ_{y,a}⟩:
 *
 *   min t  s.t.  tr X_zz ≤ t,
 *                1 − Σ_a Y_a[x,y] = Σ_ij Δ_xy[i,j] X[(x,i),(y',j)],
 *                plus the error rows of the setting,
 *
 * and a maximisation program over multipliers (μ, η, λ) solved on its own:
 *
 *   max 2(Σ Re λ_xy − ε Σ η)  s.t.  Σμ = 1, W(λ, μ) ⪰ 0,
 *                                   2 H∘E_a − conj(Λ + Λ*) ⪰ 0.
 *
 * The oracle family enters only through Δ_xy, which must satisfy
 * Δ_yx = Δ_xy*. The default is Δ_xy = I − O_x*O_y.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "advbound/gamma2.hpp"

namespace advbound {

enum class RelationMode { approx, exact, average };
RelationMode relation_mode_from_string(const std::string& s);
std::string to_string(RelationMode m);

struct RelationProblem {
  std::vector<std::string> labels;
  std::vector<std::vector<CMatrix>> delta;  // delta[x][y], Δ_yx = Δ_xy*
  int m = 1;
  std::vector<std::vector<int>> relation;   // allowed outputs per label
  double epsilon = 0.0;
  std::vector<double> prior;                // empty when absent

  int size() const { return static_cast<int>(labels.size()); }
  int dim_x() const { return delta.empty() ? 0 : static_cast<int>(delta[0][0].rows()); }
  bool allowed(int x, int a) const;
  /// r⁻¹(a) in label order.
  std::vector<int> preimage(int a) const;

  void validate() const;
  /// Keys: "oracles" (label -> matrix) or "strings" {q, n} for standard
  /// oracles, or "delta" (label -> label -> matrix) as written by to_json;
  /// "m"; "relation" (label -> list of outputs); "epsilon";
  /// optional "prior" (label -> probability).
  static RelationProblem from_json(const json& j);
  json to_json() const;
};

/// Δ_xy = I − O_x*O_y.
RelationProblem relation_from_oracles(const std::vector<std::string>& labels,
                                      const std::vector<CMatrix>& oracles, int m,
                                      const std::vector<std::vector<int>>& relation,
                                      double epsilon = 0.0);
/// Standard oracles over [q]^n with Δ_xy = diag_j(1_{x_j ≠ y_j}); labels as
/// in all_strings / string_label.
RelationProblem relation_from_strings(int q, int n, int m,
                                      const std::vector<std::vector<int>>& relation,
                                      double epsilon = 0.0);
/// r(x) = {f(x)}.
std::vector<std::vector<int>> function_relation(const std::vector<int>& values);

struct RelationOptions {
  double tol = 1e-7;
  bool symmetrize = true;   // impose λ_xy = conj λ_yx and μ_x = μ_x'
  BlockSDP* dump = nullptr;
};

struct RelationDual {
  RVector mu;          // D then D'
  RVector eta;         // per label (approx), one entry (average), empty (exact)
  CMatrix lambda;
  CMatrix gamma;       // λ_xy / (√μ_x √μ_y) on unflagged rows
  RVector nu;          // η_x / μ_x (approx only)
  std::vector<int> flagged;  // labels with μ_x ≤ 1e-6
  std::optional<double> simplified;  // λ_max(Γ − εN), λ_max(Γ) or u*Γu − εη
  double gamma_delta_norm = 0.0;     // ‖Γ∘Δ‖
  double w_min_eig = 0.0;            // W(λ, μ) after repair
  double output_min_eig = 0.0;       // least eigenvalue of the output blocks
};

struct RelationBound {
  RelationMode mode = RelationMode::approx;
  double value = 0.0;
  double residual = 0.0;  // worst dual-feasibility violation after repair
  double gap = 0.0;
  SolveStatus status = SolveStatus::optimal;
  int iterations = 0;
  RelationDual dual;
  json to_json() const;
};

/// Approximate setting; ε = 0 is handled by relation_bound_exact.
RelationBound relation_bound_approx(const RelationProblem& p,
                                    const RelationOptions& opt = {});
RelationBound relation_bound_exact(const RelationProblem& p,
                                   const RelationOptions& opt = {});
/// Requires a prior.
RelationBound relation_bound_average(const RelationProblem& p,
                                     const RelationOptions& opt = {});
RelationBound relation_bound(const RelationProblem& p, RelationMode mode,
                             const RelationOptions& opt = {});

struct RelationPrimal {
  double value = 0.0;
  double residual = 0.0;       // constraint violation of the returned blocks
  double gap = 0.0;
  SolveStatus status = SolveStatus::optimal;
  int iterations = 0;
  CMatrix gram;                // X
  std::vector<CMatrix> outputs;  // Y_a (restricted to r⁻¹(a) when exact)
  json to_json() const;
};

/// Gram form; σ_{x,a} can be read off Y_a with dim ℋ ≤ |D|.
RelationPrimal relation_primal(const RelationProblem& p, RelationMode mode,
                               const RelationOptions& opt = {});

struct FunctionAdversary {
  Gamma2Certificate primal;  // γ₂(1_{f(x)≠f(y)} | Δ)
  RelationBound dual;        // max λ_max(Γ) with Γ[f⁻¹(a), f⁻¹(a)] = 0
  double value() const { return primal.value; }
  json to_json() const;
};
/// `p.relation` must be a function (one output per label); ε is ignored.
FunctionAdversary function_adversary(const RelationProblem& p,
                                     const RelationOptions& opt = {});

}  // namespace advbound
