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

#include "advbound/state_oracles.hpp"

#include <cmath>
#include <numbers>

#include "advbound/labels.hpp"

namespace advbound {

void StateOracleProblem::validate() const {
  if (psi.size() != labels.size()) {
    throw InputError("state oracle problem: one state list per label required");
  }
  for (int x = 0; x < size(); ++x) {
    if (static_cast<int>(psi[x].size()) != oracle_count() || oracle_count() == 0) {
      throw InputError("state oracle problem: label " + labels[x] +
                       " has the wrong number of states");
    }
    for (int j = 0; j < oracle_count(); ++j) {
      const CVector& v = psi[x][j];
      const std::string where = "psi[" + labels[x] + "][" + std::to_string(j) + "]";
      require_finite(v, where);
      if (v.size() != dim_x() || dim_x() < 2) {
        throw InputError(where + ": all states must share one space of dimension >= 2");
      }
      if (std::abs(v.norm() - 1.0) > 1e-8) throw InputError(where + ": not a unit vector");
      if (std::abs(v(0)) > 1e-8) throw InputError(where + ": not orthogonal to e_0");
    }
  }
  if (!rho.empty() || !sigma.empty()) {
    if (rho.size() != labels.size() || sigma.size() != labels.size()) {
      throw InputError("state oracle problem: rho and sigma need one entry per label");
    }
    for (int x = 0; x < size(); ++x) {
      if (std::abs(rho[x].norm() - 1.0) > 1e-8 || std::abs(sigma[x].norm() - 1.0) > 1e-8 ||
          rho[x].size() != rho[0].size() || sigma[x].size() != rho[0].size()) {
        throw InputError("state oracle problem: rho/sigma of " + labels[x] +
                         " must be unit vectors of one space");
      }
    }
  }
  if (!unitaries.empty()) {
    if (unitaries.size() != labels.size()) {
      throw InputError("state oracle problem: one target unitary per label required");
    }
    for (int x = 0; x < size(); ++x) {
      require_same_shape(unitaries[x], unitaries[0], "target of " + labels[x]);
      if (unitarity_deviation(unitaries[x]) > 1e-8) {
        throw InputError("state oracle problem: target of " + labels[x] + " is not unitary");
      }
    }
  }
  if (rho.empty() && unitaries.empty()) {
    throw InputError("state oracle problem: no targets given");
  }
}

StateOracleProblem StateOracleProblem::from_json(const json& j) {
  StateOracleProblem p;
  p.labels = labels_of(j, "psi");
  for (const std::string& l : p.labels) {
    const json& e = field(j, "psi", l);
    std::vector<CVector> states;
    // Always a list of vectors, one per oracle; a bare vector would be
    // ambiguous with the [re, im] entry encoding.
    if (!e.is_array() || e.empty()) {
      throw InputError("psi[" + l + "]: expected a list of states, one per oracle");
    }
    for (const json& s : e) states.push_back(vector_from_json(s, "psi[" + l + "]"));
    p.psi.push_back(states);
    if (j.contains("rho")) {
      p.rho.push_back(vector_from_json(field(j, "rho", l), "rho[" + l + "]"));
      p.sigma.push_back(vector_from_json(field(j, "sigma", l), "sigma[" + l + "]"));
    }
    if (j.contains("targets")) {
      p.unitaries.push_back(matrix_from_json(field(j, "targets", l), "targets[" + l + "]"));
    }
  }
  p.validate();
  return p;
}

json StateOracleProblem::to_json() const {
  json j;
  j["labels"] = labels;
  for (int x = 0; x < size(); ++x) {
    json ps = json::array();
    for (const CVector& v : psi[x]) ps.push_back(vector_to_json(v));
    j["psi"][labels[x]] = ps;
    if (!rho.empty()) {
      j["rho"][labels[x]] = vector_to_json(rho[x]);
      j["sigma"][labels[x]] = vector_to_json(sigma[x]);
    }
    if (!unitaries.empty()) j["targets"][labels[x]] = matrix_to_json(unitaries[x]);
  }
  return j;
}

CMatrix state_reflection(const CVector& psi) {
  const int n = static_cast<int>(psi.size());
  const CVector d = basis_vector(n, 0) - psi;
  return identity(n) - d * d.adjoint();
}

std::vector<std::vector<CMatrix>> target_family(const StateOracleProblem& p,
                                                TargetKind kind) {
  if (!p.has(kind)) {
    throw InputError(kind == TargetKind::states
                         ? "state oracle problem: no rho/sigma targets"
                         : "state oracle problem: no unitary targets");
  }
  const int n = p.size();
  std::vector<std::vector<CMatrix>> a(n, std::vector<CMatrix>(n));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (kind == TargetKind::states) {
        a[x][y] = CMatrix::Constant(
            1, 1, p.rho[x].dot(p.rho[y]) - p.sigma[x].dot(p.sigma[y]));
      } else {
        a[x][y] = p.unitaries[x] - p.unitaries[y];
      }
    }
  }
  return a;
}

namespace {

Gamma2Instance with_labels(const StateOracleProblem& p,
                           std::vector<std::vector<CMatrix>> a,
                           std::vector<std::vector<CMatrix>> d) {
  Gamma2Instance inst;
  inst.labels1 = p.labels;
  inst.labels2 = p.labels;
  inst.a = std::move(a);
  inst.delta = std::move(d);
  inst.validate();
  return inst;
}

}  // namespace

Gamma2Instance tadv_instance(const StateOracleProblem& p, TargetKind kind) {
  p.validate();
  const int n = p.size(), m = p.oracle_count();
  std::vector<std::vector<CMatrix>> d(n, std::vector<CMatrix>(n));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      d[x][y] = CMatrix::Zero(m, m);
      for (int j = 0; j < m; ++j) d[x][y](j, j) = 1.0 - p.psi[x][j].dot(p.psi[y][j]);
    }
  }
  return with_labels(p, target_family(p, kind), std::move(d));
}

Gamma2Report tadv(const StateOracleProblem& p, TargetKind kind,
                  const Gamma2Options& opt) {
  return gamma2_solve(tadv_instance(p, kind), opt);
}

std::vector<CMatrix> reflection_completion(const StateOracleProblem& p) {
  p.validate();
  std::vector<CMatrix> out;
  for (int x = 0; x < p.size(); ++x) {
    std::vector<CMatrix> parts;
    for (const CVector& v : p.psi[x]) parts.push_back(state_reflection(v));
    out.push_back(direct_sum(parts));
  }
  return out;
}

Gamma2Instance reflection_instance(const StateOracleProblem& p, TargetKind kind) {
  const std::vector<CMatrix> o = reflection_completion(p);
  const int n = p.size();
  std::vector<std::vector<CMatrix>> d(n, std::vector<CMatrix>(n));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) d[x][y] = o[x] - o[y];
  }
  return with_labels(p, target_family(p, kind), std::move(d));
}

Gamma2Report reflection_bound(const StateOracleProblem& p, TargetKind kind,
                              const Gamma2Options& opt) {
  return gamma2_solve(reflection_instance(p, kind), opt);
}

StateConversionProblem conversion_completion(const StateOracleProblem& p) {
  if (!p.has(TargetKind::states)) throw InputError("conversion_completion: no rho/sigma");
  StateConversionProblem q;
  q.labels = p.labels;
  q.oracles = reflection_completion(p);
  q.rho = p.rho;
  q.sigma = p.sigma;
  return q;
}

UnitaryProblem unitary_completion(const StateOracleProblem& p) {
  if (!p.has(TargetKind::unitaries)) throw InputError("unitary_completion: no targets");
  UnitaryProblem q;
  q.labels = p.labels;
  q.oracles = reflection_completion(p);
  q.targets = p.unitaries;
  return q;
}

Spectrum reflection_difference_spectrum(const CVector& psi, const CVector& phi) {
  if (psi.size() != phi.size()) throw InputError("reflection_difference_spectrum: sizes differ");
  if (std::abs(psi.norm() - 1.0) > 1e-8 || std::abs(phi.norm() - 1.0) > 1e-8) {
    throw InputError("reflection_difference_spectrum: unit vectors required");
  }
  const int n = static_cast<int>(psi.size());
  const CMatrix d = (identity(n) - 2.0 * psi * psi.adjoint()) -
                    (identity(n) - 2.0 * phi * phi.adjoint());
  return eig_hermitian(d);
}

CMatrix standard_oracle(int q, int a) {
  if (q < 2 || a < 0 || a >= q) throw InputError("standard_oracle: need q >= 2 and 0 <= a < q");
  CMatrix o = CMatrix::Zero(q, q);
  for (int b = 0; b < q; ++b) o((b + a) % q, b) = 1.0;
  return o;
}

StandardOracleCertificate standard_oracle_certificate(int q) {
  if (q < 2) throw InputError("standard_oracle_certificate: q must be at least 2");
  std::vector<std::vector<CMatrix>> a(q, std::vector<CMatrix>(q)), d = a;
  for (int x = 0; x < q; ++x) {
    for (int y = 0; y < q; ++y) {
      a[x][y] = standard_oracle(q, x) - standard_oracle(q, y);
      d[x][y] = CMatrix::Constant(1, 1, x == y ? 0.0 : 1.0);
    }
  }
  StandardOracleCertificate out;
  out.instance = make_instance(a, d);
  Gamma2Primal prim;
  prim.workspace = 2 * q;
  for (int x = 0; x < q; ++x) {
    CMatrix u(2 * q, q), v(2 * q, q);
    u << standard_oracle(q, x).adjoint(), identity(q);
    v << identity(q), -standard_oracle(q, x);
    prim.upsilon.push_back(u);
    prim.phi.push_back(v);
  }
  Gamma2Certificate& c = out.certificate;
  c.residual = factorization_residual(out.instance, prim.upsilon, prim.phi);
  c.factor_objective = factorization_objective(prim.upsilon, prim.phi);
  c.value = c.factor_objective;
  c.primal = std::move(prim);
  return out;
}

std::vector<std::vector<int>> all_strings(int q, int n) {
  std::vector<std::vector<int>> out{{}};
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<int>> next;
    for (const auto& s : out) {
      for (int a = 0; a < q; ++a) {
        auto t = s;
        t.push_back(a);
        next.push_back(t);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::string string_label(const std::vector<int>& s) {
  std::string out;
  for (int a : s) out += std::to_string(a);
  return out;
}

namespace {

void check_values(int q, int n, int m, const std::vector<int>& values) {
  if (q < 2 || n < 1 || m < 1) throw InputError("standard problem: need q >= 2, n >= 1, m >= 1");
  if (values.size() != all_strings(q, n).size()) {
    throw InputError("standard problem: one function value per input string required");
  }
  for (int v : values) {
    if (v < 0 || v >= m) throw InputError("standard problem: function value out of range");
  }
}

}  // namespace

StateOracleProblem standard_function_problem(int q, int n, int m,
                                             const std::vector<int>& values) {
  check_values(q, n, m, values);
  StateOracleProblem p;
  const auto xs = all_strings(q, n);
  for (size_t i = 0; i < xs.size(); ++i) {
    p.labels.push_back(string_label(xs[i]));
    std::vector<CVector> states;
    for (int a : xs[i]) states.push_back(basis_vector(q + 1, 1 + a));
    p.psi.push_back(states);
    p.rho.push_back(basis_vector(m, 0));
    p.sigma.push_back(basis_vector(m, values[i]));
  }
  p.validate();
  return p;
}

StateConversionProblem standard_conversion_problem(int q, int n, int m,
                                                   const std::vector<int>& values) {
  check_values(q, n, m, values);
  StateConversionProblem p;
  const auto xs = all_strings(q, n);
  for (size_t i = 0; i < xs.size(); ++i) {
    p.labels.push_back(string_label(xs[i]));
    std::vector<CMatrix> parts;
    for (int a : xs[i]) parts.push_back(standard_oracle(q, a));
    p.oracles.push_back(direct_sum(parts));
    p.rho.push_back(basis_vector(m, 0));
    p.sigma.push_back(basis_vector(m, values[i]));
  }
  p.validate();
  return p;
}

AmplificationInstance make_amplitude_amplification(int k, int extra_labels) {
  if (k < 1) throw InputError("amplitude amplification: k must be positive");
  if (extra_labels < 1) throw InputError("amplitude amplification: need at least one extra label");
  AmplificationInstance out;
  const double alpha = std::numbers::pi / (4.0 * k);
  out.alpha = alpha;
  const int m = extra_labels;
  const int dx = m + 2;  // e_0, then f_0 .. f_m
  StateOracleProblem& p = out.problem;
  const CVector e0 = basis_vector(2, 0), e1 = basis_vector(2, 1);
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  for (int x = 0; x <= m; ++x) {
    p.labels.push_back(std::to_string(x));
    CVector psi;
    if (x == 0) {
      psi = basis_vector(dx, 1);
    } else {
      psi = std::cos(alpha) * basis_vector(dx, 1) + std::sin(alpha) * basis_vector(dx, 1 + x);
    }
    p.psi.push_back({psi});
    p.rho.push_back(e0);
    p.sigma.push_back(x == 0 ? e0 : e1);
    p.unitaries.push_back(x == 0 ? identity(2) : swap);
  }
  p.validate();

  // Υ_0 = Φ_x = (s, 0), Φ_0 = Υ_x = (0, s), s = 1/√(1 − cos α).
  const double s = 1.0 / std::sqrt(1.0 - std::cos(alpha));
  Gamma2Primal prim;
  prim.workspace = 2;
  for (int x = 0; x <= m; ++x) {
    CMatrix first(2, 1), second(2, 1);
    first << s, 0;
    second << 0, s;
    prim.upsilon.push_back(x == 0 ? first : second);
    prim.phi.push_back(x == 0 ? second : first);
  }
  const Gamma2Instance inst = tadv_instance(p, TargetKind::states);
  out.certificate.residual = factorization_residual(inst, prim.upsilon, prim.phi);
  out.certificate.factor_objective = factorization_objective(prim.upsilon, prim.phi);
  out.certificate.value = out.certificate.factor_objective;
  out.certificate.primal = std::move(prim);
  out.beta = std::acos((1.0 + std::cos(alpha)) / 2.0);
  return out;
}

StateOracleProblem make_paradox_pair(double alpha) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi / 2)) {
    throw InputError("paradox pair: alpha must lie in (0, pi/2)");
  }
  const double gamma = std::acos(1.0 - std::sin(alpha));
  StateOracleProblem p;
  p.labels = {"0", "1"};
  p.psi = {{basis_vector(3, 1)},
           {CVector(std::cos(alpha) * basis_vector(3, 1) + std::sin(alpha) * basis_vector(3, 2))}};
  const CVector e0 = basis_vector(2, 0), e1 = basis_vector(2, 1);
  p.rho = {e0, e0};
  p.sigma = {e0, CVector(std::cos(gamma) * e0 + std::sin(gamma) * e1)};
  CMatrix rot(2, 2);
  rot << std::cos(gamma), -std::sin(gamma), std::sin(gamma), std::cos(gamma);
  p.unitaries = {identity(2), rot};
  p.validate();
  return p;
}

StateOracleProblem make_kothari_parity(int n, bool constant) {
  if (n < 2 || n > 5) throw InputError("kothari parity: n must be in [2, 5]");
  StateOracleProblem p;
  const double a = std::sqrt(1.0 - 1.0 / n), b = std::sqrt(1.0 / n);
  for (const auto& s : all_strings(2, n)) {
    p.labels.push_back(string_label(s));
    std::vector<CVector> states;
    int parity = 0;
    for (int bit : s) {
      states.push_back(basis_vector(3, 1 + bit));
      parity ^= bit;
    }
    if (constant) parity = 0;
    p.psi.push_back(states);
    p.rho.push_back(basis_vector(3, 0));
    p.sigma.push_back(a * basis_vector(3, 0) + b * basis_vector(3, 1 + parity));
  }
  p.validate();
  return p;
}

}  // namespace advbound
