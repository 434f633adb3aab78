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

#include "advbound/query.hpp"

#include <string>

namespace advbound {

void QueryAlgorithm::validate() const {
  if (dim_s < 0 || dim_x < 1 || dim_w < 1) {
    throw InputError("query algorithm: register dimensions must be positive");
  }
  if (unitaries.size() != directions.size() + 1) {
    throw InputError("query algorithm: need T + 1 unitaries for T queries");
  }
  for (size_t i = 0; i < unitaries.size(); ++i) {
    const std::string where = "query algorithm U_" + std::to_string(i);
    const CMatrix& u = unitaries[i];
    if (u.rows() != dim() || u.cols() != dim()) {
      throw InputError(where + ": expected " + std::to_string(dim()) + "x" +
                       std::to_string(dim()));
    }
    require_finite(u, where);
    const double dev = unitarity_deviation(u);
    if (dev > 1e-8) {
      throw InputError(where + ": not unitary (deviation " + std::to_string(dev) + ")");
    }
  }
}

QueryAlgorithm QueryAlgorithm::reversed() const {
  QueryAlgorithm r = *this;
  r.unitaries.clear();
  r.directions.clear();
  for (auto it = unitaries.rbegin(); it != unitaries.rend(); ++it) {
    r.unitaries.push_back(it->adjoint());
  }
  for (auto it = directions.rbegin(); it != directions.rend(); ++it) {
    r.directions.push_back(*it == QueryDirection::direct ? QueryDirection::inverse
                                                          : QueryDirection::direct);
  }
  return r;
}

QueryAlgorithm QueryAlgorithm::from_json(const json& j) {
  QueryAlgorithm a;
  if (!j.is_object()) throw InputError("query algorithm: expected an object");
  a.dim_s = j.value("dim_s", 0);
  a.dim_x = j.value("dim_x", 1);
  a.dim_w = j.value("dim_w", 1);
  if (!j.contains("unitaries")) throw InputError("query algorithm: missing 'unitaries'");
  int i = 0;
  for (const json& u : j.at("unitaries")) {
    a.unitaries.push_back(matrix_from_json(u, "U_" + std::to_string(i++)));
  }
  for (const json& d : j.value("directions", json::array())) {
    const std::string s = d.get<std::string>();
    if (s == "direct") {
      a.directions.push_back(QueryDirection::direct);
    } else if (s == "inverse") {
      a.directions.push_back(QueryDirection::inverse);
    } else {
      throw InputError("query algorithm: unknown direction '" + s + "'");
    }
  }
  a.validate();
  return a;
}

json QueryAlgorithm::to_json() const {
  json j;
  j["dim_s"] = dim_s;
  j["dim_x"] = dim_x;
  j["dim_w"] = dim_w;
  json us = json::array();
  for (const CMatrix& u : unitaries) us.push_back(matrix_to_json(u));
  j["unitaries"] = us;
  json ds = json::array();
  for (QueryDirection d : directions) {
    ds.push_back(d == QueryDirection::direct ? "direct" : "inverse");
  }
  j["directions"] = ds;
  return j;
}

CMatrix query_operator(const QueryAlgorithm& alg, const CMatrix& oracle,
                       QueryDirection d) {
  if (oracle.rows() != alg.dim_x || oracle.cols() != alg.dim_x) {
    throw InputError("query: oracle dimension does not match the algorithm");
  }
  const CMatrix o = d == QueryDirection::direct ? oracle : CMatrix(oracle.adjoint());
  return direct_sum(identity(alg.dim_s), kron(o, identity(alg.dim_w)));
}

std::vector<CVector> trajectory(const QueryAlgorithm& alg,
                                const CMatrix& oracle, const CVector& input) {
  if (input.size() != alg.dim()) {
    throw InputError("simulate: input dimension does not match the algorithm");
  }
  std::vector<CVector> out{input};
  CVector s = input;
  for (int i = 0; i < alg.queries(); ++i) {
    s = query_operator(alg, oracle, alg.directions[i]) * (alg.unitaries[i] * s);
    out.push_back(s);
  }
  out.push_back(alg.unitaries.back() * s);
  return out;
}

CVector simulate(const QueryAlgorithm& alg, const CMatrix& oracle,
                 const CVector& input) {
  return trajectory(alg, oracle, input).back();
}

CVector embed_state(const QueryAlgorithm& alg, const CVector& z) {
  if (z.size() > alg.dim()) {
    throw InputError("embed_state: problem space larger than the state space");
  }
  CVector out = CVector::Zero(alg.dim());
  out.head(z.size()) = z;
  return out;
}

}  // namespace advbound
