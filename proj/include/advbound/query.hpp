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
 * @file query.hpp
 * Query algorithms U_0, Õ^{±1}, U_1, ..., U_T on the state space S ⊕ (X ⊗ W)
 * and their exact state-vector simulation. Õ = I_S ⊕ (O ⊗ I_W).
 *
 * A problem space Z embeds into the leading dim Z coordinates of the state
 * space (S first).
 */
#pragma once

#include <vector>

#include "advbound/numerics.hpp"

namespace advbound {

enum class QueryDirection { direct, inverse };

struct QueryAlgorithm {
  int dim_s = 0;
  int dim_x = 1;
  int dim_w = 1;
  std::vector<CMatrix> unitaries;         // U_0 .. U_T
  std::vector<QueryDirection> directions;  // T entries

  int dim() const { return dim_s + dim_x * dim_w; }
  int queries() const { return static_cast<int>(directions.size()); }
  /// Unitarity of every U_i to 1e-8 and consistent dimensions.
  void validate() const;
  /// The algorithm reversed: U_T*, inverted queries, ..., U_0*.
  QueryAlgorithm reversed() const;

  static QueryAlgorithm from_json(const json& j);
  json to_json() const;
};

/// Õ^{±1} for a given oracle.
CMatrix query_operator(const QueryAlgorithm& alg, const CMatrix& oracle,
                       QueryDirection d);

/// Final state U_T Õ ... Õ U_0 |input>; input of dimension alg.dim().
CVector simulate(const QueryAlgorithm& alg, const CMatrix& oracle,
                 const CVector& input);

/// States ρ^{(i)} just before each U_i, i = 0..T, followed by the final
/// state (T + 2 entries).
std::vector<CVector> trajectory(const QueryAlgorithm& alg,
                                const CMatrix& oracle, const CVector& input);

/// Embeds a vector of Z into the state space, or reads it back (the
/// remaining coordinates are dropped).
CVector embed_state(const QueryAlgorithm& alg, const CVector& z);

}  // namespace advbound
