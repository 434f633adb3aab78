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

#include "advbound/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "advbound/labels.hpp"

namespace advbound {

namespace {

void require_unitary(const CMatrix& u, const std::string& where) {
  require_finite(u, where);
  if (u.rows() != u.cols()) throw InputError(where + ": not square");
  const double dev = unitarity_deviation(u);
  if (dev > 1e-8) {
    throw InputError(where + ": not unitary (deviation " + std::to_string(dev) + ")");
  }
}

void require_unit(const CVector& v, const std::string& where) {
  require_finite(v, where);
  if (std::abs(v.norm() - 1.0) > 1e-8) {
    throw InputError(where + ": not a unit vector (norm " + std::to_string(v.norm()) + ")");
  }
}

template <typename T>
void require_count(const std::vector<T>& v, size_t n, const std::string& what) {
  if (v.size() != n) throw InputError(what + ": one entry per label required");
}

}  // namespace

void StateConversionProblem::validate() const {
  require_count(oracles, labels.size(), "state conversion oracles");
  require_count(rho, labels.size(), "state conversion rho");
  require_count(sigma, labels.size(), "state conversion sigma");
  for (int x = 0; x < size(); ++x) {
    const std::string l = "label " + labels[x];
    require_unitary(oracles[x], "oracle of " + l);
    require_same_shape(oracles[x], oracles[0], "oracle of " + l);
    require_unit(rho[x], "rho of " + l);
    require_unit(sigma[x], "sigma of " + l);
    if (rho[x].size() != rho[0].size() || sigma[x].size() != rho[0].size()) {
      throw InputError("state conversion " + l + ": rho and sigma must share one space");
    }
  }
}

StateConversionProblem StateConversionProblem::from_json(const json& j) {
  StateConversionProblem p;
  p.labels = labels_of(j, "oracles");
  for (const std::string& l : p.labels) {
    p.oracles.push_back(matrix_from_json(field(j, "oracles", l), "oracles[" + l + "]"));
    p.rho.push_back(vector_from_json(field(j, "rho", l), "rho[" + l + "]"));
    p.sigma.push_back(vector_from_json(field(j, "sigma", l), "sigma[" + l + "]"));
  }
  p.validate();
  return p;
}

json StateConversionProblem::to_json() const {
  json j;
  j["labels"] = labels;
  for (int x = 0; x < size(); ++x) {
    j["oracles"][labels[x]] = matrix_to_json(oracles[x]);
    j["rho"][labels[x]] = vector_to_json(rho[x]);
    j["sigma"][labels[x]] = vector_to_json(sigma[x]);
  }
  return j;
}

void UnitaryProblem::validate() const {
  require_count(oracles, labels.size(), "unitary problem oracles");
  require_count(targets, labels.size(), "unitary problem targets");
  for (int x = 0; x < size(); ++x) {
    const std::string l = "label " + labels[x];
    require_unitary(oracles[x], "oracle of " + l);
    require_same_shape(oracles[x], oracles[0], "oracle of " + l);
    require_unitary(targets[x], "target of " + l);
    require_same_shape(targets[x], targets[0], "target of " + l);
  }
}

UnitaryProblem UnitaryProblem::from_json(const json& j) {
  UnitaryProblem p;
  p.labels = labels_of(j, "oracles");
  for (const std::string& l : p.labels) {
    p.oracles.push_back(matrix_from_json(field(j, "oracles", l), "oracles[" + l + "]"));
    p.targets.push_back(matrix_from_json(field(j, "targets", l), "targets[" + l + "]"));
  }
  p.validate();
  return p;
}

json UnitaryProblem::to_json() const {
  json j;
  j["labels"] = labels;
  for (int x = 0; x < size(); ++x) {
    j["oracles"][labels[x]] = matrix_to_json(oracles[x]);
    j["targets"][labels[x]] = matrix_to_json(targets[x]);
  }
  return j;
}

DeltaForm delta_form_from_string(const std::string& s) {
  if (s == "difference") return DeltaForm::difference;
  if (s == "inner") return DeltaForm::inner;
  throw InputError("unknown oracle form '" + s + "' (expected difference|inner)");
}

namespace {

CMatrix oracle_delta(const CMatrix& ox, const CMatrix& oy, DeltaForm form) {
  if (form == DeltaForm::difference) return ox - oy;
  return identity(static_cast<int>(ox.rows())) - ox.adjoint() * oy;
}

Gamma2Instance labelled(std::vector<std::string> labels,
                        std::vector<std::vector<CMatrix>> a,
                        std::vector<std::vector<CMatrix>> d) {
  Gamma2Instance inst;
  inst.labels1 = labels;
  inst.labels2 = std::move(labels);
  inst.a = std::move(a);
  inst.delta = std::move(d);
  inst.validate();
  return inst;
}

}  // namespace

Gamma2Instance state_conversion_instance(const StateConversionProblem& p,
                                         DeltaForm form) {
  p.validate();
  const int n = p.size();
  std::vector<std::vector<CMatrix>> a(n, std::vector<CMatrix>(n)), d = a;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const cd v = p.rho[x].dot(p.rho[y]) - p.sigma[x].dot(p.sigma[y]);
      a[x][y] = CMatrix::Constant(1, 1, v);
      d[x][y] = oracle_delta(p.oracles[x], p.oracles[y], form);
    }
  }
  return labelled(p.labels, std::move(a), std::move(d));
}

Gamma2Instance unitary_instance(const UnitaryProblem& p) {
  p.validate();
  const int n = p.size();
  std::vector<std::vector<CMatrix>> a(n, std::vector<CMatrix>(n)), d = a;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      a[x][y] = p.targets[x] - p.targets[y];
      d[x][y] = p.oracles[x] - p.oracles[y];
    }
  }
  return labelled(p.labels, std::move(a), std::move(d));
}

Gamma2Instance fractional_instance(const std::vector<std::string>& labels,
                                   const std::vector<CMatrix>& hamiltonians,
                                   const std::vector<CMatrix>& targets) {
  require_count(hamiltonians, labels.size(), "fractional hamiltonians");
  require_count(targets, labels.size(), "fractional targets");
  const int n = static_cast<int>(labels.size());
  for (int x = 0; x < n; ++x) {
    require_finite(hamiltonians[x], "hamiltonian of " + labels[x]);
    if (hamiltonians[x].rows() != hamiltonians[x].cols() ||
        hermiticity_deviation(hamiltonians[x]) > 1e-8) {
      throw InputError("hamiltonian of " + labels[x] + " is not Hermitian");
    }
    require_unitary(targets[x], "target of " + labels[x]);
  }
  std::vector<std::vector<CMatrix>> a(n, std::vector<CMatrix>(n)), d = a;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      a[x][y] = targets[x] - targets[y];
      d[x][y] = hamiltonians[x] - hamiltonians[y];
    }
  }
  return labelled(labels, std::move(a), std::move(d));
}

Gamma2Report adv_state_conversion(const StateConversionProblem& p,
                                  DeltaForm form, const Gamma2Options& opt) {
  return gamma2_solve(state_conversion_instance(p, form), opt);
}

Gamma2Certificate adv_unitary(const UnitaryProblem& p, const Gamma2Options& opt) {
  return gamma2_primal(unitary_instance(p), opt);
}

Gamma2Certificate adv_fractional(const std::vector<std::string>& labels,
                                 const std::vector<CMatrix>& hamiltonians,
                                 const std::vector<CMatrix>& targets,
                                 const Gamma2Options& opt) {
  return gamma2_primal(fractional_instance(labels, hamiltonians, targets), opt);
}

namespace {

struct SlotVectors {
  std::vector<CVector> u;  // one per slot, in X ⊗ W
  std::vector<CVector> v;
};

// Per-slot pieces for one run with oracle o; states from trajectory().
SlotVectors slot_vectors(const QueryAlgorithm& alg, const CMatrix& o,
                         const std::vector<CVector>& states) {
  SlotVectors out;
  const int xw = alg.dim_x * alg.dim_w;
  const CMatrix ow = kron(o, identity(alg.dim_w));
  for (int i = 0; i < alg.queries(); ++i) {
    const CVector a = (alg.unitaries[i] * states[i]).tail(xw);
    if (alg.directions[i] == QueryDirection::direct) {
      out.u.push_back(ow * a);
      out.v.push_back(a);
    } else {
      out.u.push_back(-a);
      out.v.push_back(ow.adjoint() * a);
    }
  }
  return out;
}

// ⊕_i over slots, as a vector of X ⊗ (slot, W).
CVector stack_slots(const QueryAlgorithm& alg, const std::vector<CVector>& parts) {
  const int t = static_cast<int>(parts.size());
  CVector out = CVector::Zero(alg.dim_x * t * alg.dim_w);
  for (int s = 0; s < t; ++s) {
    for (int i = 0; i < alg.dim_x; ++i) {
      for (int w = 0; w < alg.dim_w; ++w) {
        out((i * t + s) * alg.dim_w + w) = parts[s](i * alg.dim_w + w);
      }
    }
  }
  return out;
}

struct Extracted {
  CVector u, v;
};

Extracted extract_run(const QueryAlgorithm& alg, const CMatrix& oracle,
                      const CVector& rho, const CVector& sigma,
                      const std::string& where, double& worst) {
  const std::vector<CVector> states = trajectory(alg, oracle, embed_state(alg, rho));
  const double miss = (states.back() - embed_state(alg, sigma)).norm();
  worst = std::max(worst, miss);
  if (miss > 1e-6) {
    throw InputError("algorithm does not solve the problem at " + where +
                     " (deviation " + std::to_string(miss) + ")");
  }
  const SlotVectors sv = slot_vectors(alg, oracle, states);
  return {stack_slots(alg, sv.u), stack_slots(alg, sv.v)};
}

void check_shapes(const QueryAlgorithm& alg, int dim_x, int dim_z) {
  alg.validate();
  if (alg.dim_x != dim_x) {
    throw InputError("algorithm oracle register does not match the problem's oracles");
  }
  if (dim_z > alg.dim()) {
    throw InputError("problem space does not fit into the algorithm's state space");
  }
}

}  // namespace

Gamma2Certificate feasible_from_algorithm(const QueryAlgorithm& alg,
                                          const StateConversionProblem& p) {
  p.validate();
  check_shapes(alg, p.dim_x(), p.dim_z());
  Gamma2Primal prim;
  prim.workspace = alg.queries() * alg.dim_w;
  double worst = 0.0;
  for (int x = 0; x < p.size(); ++x) {
    const Extracted e = extract_run(alg, p.oracles[x], p.rho[x], p.sigma[x],
                                    "label " + p.labels[x], worst);
    prim.upsilon.push_back(e.u);
    prim.phi.push_back(e.v);
  }
  Gamma2Certificate c;
  const Gamma2Instance inst = state_conversion_instance(p);
  c.residual = factorization_residual(inst, prim.upsilon, prim.phi);
  c.factor_objective = factorization_objective(prim.upsilon, prim.phi);
  c.value = c.factor_objective;
  c.primal = std::move(prim);
  return c;
}

Gamma2Certificate unitary_feasible_from_algorithm(const QueryAlgorithm& alg,
                                                  const UnitaryProblem& p) {
  p.validate();
  const int dz = p.dim_z();
  check_shapes(alg, static_cast<int>(p.oracles[0].rows()), dz);
  Gamma2Primal prim;
  prim.workspace = alg.queries() * alg.dim_w;
  const int rows = alg.dim_x * prim.workspace;
  double worst = 0.0;
  for (int x = 0; x < p.size(); ++x) {
    CMatrix up(rows, dz), ph(rows, dz);
    for (int k = 0; k < dz; ++k) {
      const CVector e = basis_vector(dz, k);
      const Extracted r = extract_run(alg, p.oracles[x], e, p.targets[x] * e,
                                      "label " + p.labels[x] + " basis " +
                                          std::to_string(k), worst);
      up.col(k) = r.u;
      ph.col(k) = r.v;
    }
    prim.upsilon.push_back(up * p.targets[x].adjoint());
    prim.phi.push_back(ph);
  }
  Gamma2Certificate c;
  const Gamma2Instance inst = unitary_instance(p);
  c.residual = factorization_residual(inst, prim.upsilon, prim.phi);
  c.factor_objective = factorization_objective(prim.upsilon, prim.phi);
  c.value = c.factor_objective;
  c.primal = std::move(prim);
  return c;
}

QueryAlgorithm distinguisher_algorithm() {
  QueryAlgorithm a;
  a.dim_s = 1;
  a.dim_x = 1;
  a.dim_w = 1;
  CMatrix h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  a.unitaries = {h, identity(2)};
  a.directions = {QueryDirection::direct};
  return a;
}

QueryAlgorithm reflection_algorithm(int dim_x) {
  if (dim_x < 2) throw InputError("reflection_algorithm: need dim X >= 2");
  QueryAlgorithm a;
  a.dim_s = dim_x;
  a.dim_x = dim_x;
  a.dim_w = 1;
  const int n = 2 * dim_x;
  // Swap of the e_0-orthogonal parts of S and B (B = X ⊗ W).
  CMatrix swap = CMatrix::Zero(n, n);
  swap(0, 0) = 1.0;
  swap(dim_x, dim_x) = 1.0;
  for (int k = 1; k < dim_x; ++k) {
    swap(k, dim_x + k) = 1.0;
    swap(dim_x + k, k) = 1.0;
  }
  // Rotation sending S e_0 to (S e_0 − B e_0)/√2.
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix g = identity(n);
  g(0, 0) = r;
  g(0, dim_x) = r;
  g(dim_x, 0) = -r;
  g(dim_x, dim_x) = r;
  CMatrix refl = identity(n);
  refl(0, 0) = -1.0;
  // Q = swap · Õ · g sends S e_0 to S (e_0 − ψ)/√2; R = Q refl Q*.
  a.unitaries = {swap.adjoint(), g * refl * g.adjoint(), swap};
  a.directions = {QueryDirection::inverse, QueryDirection::direct};
  return a;
}

}  // namespace advbound
