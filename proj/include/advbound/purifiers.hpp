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
 * @file purifiers.hpp
 * Explicit γ₂ certificates turning noisy output states ψ_x into exact
 * targets σ_x at bounded cost.
 *
 * Function case: ψ_x ∈ Y ⊗ H with Y = C^n and Π_i = e_ie_i* ⊗ I_H; the
 * target is the basis vector singled out by the measurement gap. The
 * certificate is for γ₂(1_{σ_x≠σ_y} | 1 − ⟨ψ_x,ψ_y⟩).
 *
 * General case: projectors Π_x with ‖Π_xψ_x‖² ≥ δ and targets
 * σ_x = Π_xψ_x ⊗ τ_x, ⟨τ_x,τ_y⟩ = 1/(1 − ⟨Π_x^⊥ψ_x, Π_y^⊥ψ_y⟩). The
 * certificate is for γ₂(1 − ⟨σ_x,σ_y⟩ | (1 − ⟨ψ_x,ψ_y⟩) ⊕ (R_x − R_y)),
 * R_x = I − 2Π_x.
 *
 * Every series 1/(1 − X) is truncated at K terms; K defaults to the least
 * value with tail g^{K+1}/(1 − g) ≤ 1e-9.
 */
#pragma once

#include <string>
#include <vector>

#include "advbound/gamma2.hpp"

namespace advbound {

struct PurifierInstance {
  std::vector<std::string> labels;
  std::vector<CVector> psi;
  int outputs = 2;            // dim Y in the function case
  double c = 0.5;             // binary threshold
  double delta = 0.25;        // gap, margin or success probability
  std::vector<CMatrix> projectors;  // Π_x, general case only

  int size() const { return static_cast<int>(labels.size()); }
  int dim() const { return psi.empty() ? 0 : static_cast<int>(psi[0].size()); }
  /// ‖Π_i ψ_x‖² in the function case.
  double weight(int x, int i) const;

  /// Keys "psi" (label -> vector), "outputs", "c", "delta",
  /// "projectors" (label -> matrix).
  static PurifierInstance from_json(const json& j);
  json to_json() const;
};

struct PurifierCertificate {
  Gamma2Instance instance;
  Gamma2Certificate certificate;  // value = factor objective, tail reported
  double bound = 0.0;        // analytic bound from the construction
  double base_norm = 0.0;    // g: largest squared norm in the base family
  double norm_bound = 0.0;   // analytic bound on g
  double agreement = 0.0;    // max |X_xy − ⟨ψ_x,ψ_y⟩| over pairs with σ_x ≠ σ_y
  std::vector<int> classes;  // σ_x = e_{classes[x]} (function case)
  int k = 0;                 // truncation
  json to_json() const;
};

/// Rejects labels inside the gap (c − δ, c + δ).
PurifierCertificate purify_function_binary(const PurifierInstance& inst, int k = 0);
/// Rejects labels without an output of weight ≥ ½ + δ.
PurifierCertificate purify_function_multi(const PurifierInstance& inst, int k = 0);

struct GeneralPurifier {
  CMatrix sigma_gram;               // ⟨σ_x, σ_y⟩, closed form
  std::vector<CVector> sigma;       // σ_x ∈ Z ⊗ C^|D|
  double sigma_unit_error = 0.0;    // max |‖σ_x‖ − 1|
  double sigma_support_error = 0.0; // max ‖(Π_x ⊗ I)σ_x − σ_x‖
  double gram_error = 0.0;          // max |⟨σ_x,σ_y⟩ − closed form|
  PurifierCertificate purifier;
  json to_json() const;
};
/// Rejects ‖Π_xψ_x‖² < δ, and an explicit K whose tail exceeds `max_tail`
/// (the message names the least sufficient K).
GeneralPurifier purify_general(const PurifierInstance& inst, int k = 0,
                               double max_tail = 1e-6);

/// Two labels, Z = C³, one projector Π = diag(1, 1, 0) and
/// ψ_x = √δ e_x + √(1−δ) e_2: the targets are orthogonal and only the
/// oracle term distinguishes the inputs.
PurifierInstance trend_instance(double delta);

struct TrendPoint {
  double delta = 0.0;
  double value = 0.0;      // SDP value with Δ = (O_x − O_y) ⊕ (R_x − R_y)
  double certified = 0.0;  // purify_general value on the same instance
  double tail = 0.0;
};
struct TrendReport {
  std::vector<TrendPoint> points;
  std::vector<double> ratios;  // value(δ/2) / value(δ) for consecutive grid points
  bool within_bound = true;    // every halving ratio ≤ √2 · 1.25
  json to_json() const;
};
/// O_x is the reflection completion of ψ_x (embedded after a marked e_0).
TrendReport purifier_trend_check(const std::vector<double>& deltas);

}  // namespace advbound
