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

#include "advbound/purifiers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "advbound/labels.hpp"
#include "advbound/state_oracles.hpp"

namespace advbound {

namespace {

constexpr double kDefaultTail = 1e-9;
// Slack when classifying measured weights against the gap.
constexpr double kGapSlack = 1e-12;

int truncation_for(double g, double tail) {
  if (g <= 0.0) return 1;
  int k = 1;
  while (std::pow(g, k + 1) / (1.0 - g) > tail) ++k;
  return k;
}

double series_tail(double g, int k) { return std::pow(g, k + 1) / (1.0 - g); }

// Factors of 1_{c_x ≠ c_y}: e_{c_x} against e_{1−c_y} for two classes
// (objective 1), (1, e_{c_x}) against (1, −e_{c_y}) otherwise (objective 2).
struct IndicatorFactors {
  std::vector<CVector> a, b;
  double value = 0.0;
};

IndicatorFactors indicator_factors(const std::vector<int>& classes) {
  std::map<int, int> ids;
  for (int c : classes) ids.emplace(c, static_cast<int>(ids.size()));
  IndicatorFactors f;
  const int n = static_cast<int>(classes.size());
  if (ids.size() <= 1) {
    for (int x = 0; x < n; ++x) {
      f.a.push_back(CVector::Zero(1));
      f.b.push_back(CVector::Zero(1));
    }
    return f;
  }
  if (ids.size() == 2) {
    for (int x = 0; x < n; ++x) {
      const int c = ids.at(classes[x]);
      f.a.push_back(basis_vector(2, c));
      f.b.push_back(basis_vector(2, 1 - c));
    }
    f.value = 1.0;
    return f;
  }
  const int m = static_cast<int>(ids.size());
  for (int x = 0; x < n; ++x) {
    const int c = ids.at(classes[x]);
    CVector a = CVector::Zero(m + 1), b = CVector::Zero(m + 1);
    a(0) = 1.0;
    b(0) = 1.0;
    a(1 + c) = 1.0;
    b(1 + c) = -1.0;
    f.a.push_back(a);
    f.b.push_back(b);
  }
  f.value = 2.0;
  return f;
}

CVector block_part(const CVector& v, int blocks, int i) {
  const int h = static_cast<int>(v.size()) / blocks;
  CVector out = CVector::Zero(v.size());
  out.segment(i * h, h) = v.segment(i * h, h);
  return out;
}

void check_states(const PurifierInstance& inst) {
  if (inst.size() == 0) throw InputError("purifier: no labels");
  if (inst.psi.size() != inst.labels.size()) throw InputError("purifier: one state per label");
  for (int x = 0; x < inst.size(); ++x) {
    require_finite(inst.psi[x], "psi[" + inst.labels[x] + "]");
    if (inst.psi[x].size() != inst.dim()) throw InputError("purifier: states differ in dimension");
    if (std::abs(inst.psi[x].norm() - 1.0) > 1e-8) {
      throw InputError("purifier: psi[" + inst.labels[x] + "] is not a unit vector");
    }
  }
}

void check_function_shape(const PurifierInstance& inst) {
  check_states(inst);
  if (inst.outputs < 1 || inst.dim() % inst.outputs != 0) {
    throw InputError("purifier: state dimension must be a multiple of the output count");
  }
}

// Combines the base family X = U*V (columns) through the series 1/(1 − X)
// and the Hadamard product with the outer factors: Υ_x = outer_u_x ⊗ y_x.
PurifierCertificate assemble(const Gamma2Instance& inst, const CMatrix& u, const CMatrix& v,
                             const std::vector<CVector>& outer_u,
                             const std::vector<CVector>& outer_v, double outer_value, int k) {
  PurifierCertificate out;
  out.instance = inst;
  double g = 0.0;
  for (int i = 0; i < u.cols(); ++i) g = std::max(g, u.col(i).squaredNorm());
  for (int i = 0; i < v.cols(); ++i) g = std::max(g, v.col(i).squaredNorm());
  out.base_norm = g;
  out.k = k > 0 ? k : truncation_for(g, kDefaultTail / std::max(1.0, outer_value));
  const GeometricCertificate geo = geometric_certificate_from_factors(u, v, out.k);
  Gamma2Primal prim;
  for (int x = 0; x < inst.n1(); ++x) prim.upsilon.push_back(kron(outer_u[x], geo.cert.primal->upsilon[x]));
  for (int y = 0; y < inst.n2(); ++y) prim.phi.push_back(kron(outer_v[y], geo.cert.primal->phi[y]));
  prim.workspace = static_cast<int>(geo.cert.primal->upsilon[0].rows());
  Gamma2Certificate& c = out.certificate;
  c.residual = factorization_residual(inst, prim.upsilon, prim.phi);
  c.factor_objective = factorization_objective(prim.upsilon, prim.phi);
  c.value = c.factor_objective;
  c.tail = outer_value * series_tail(g, out.k);
  c.primal = std::move(prim);
  return out;
}

PurifierCertificate zero_certificate(const Gamma2Instance& inst) {
  PurifierCertificate out;
  out.instance = inst;
  Gamma2Primal prim;
  prim.workspace = 1;
  for (int x = 0; x < inst.n1(); ++x) prim.upsilon.push_back(CMatrix::Zero(inst.dx1(), 1));
  for (int y = 0; y < inst.n2(); ++y) prim.phi.push_back(CMatrix::Zero(inst.dx2(), 1));
  out.certificate.residual = factorization_residual(inst, prim.upsilon, prim.phi);
  out.certificate.primal = std::move(prim);
  return out;
}

// Instance (1_{σ_x≠σ_y} | 1 − ⟨ψ_x,ψ_y⟩) for the function case.
Gamma2Instance function_instance(const PurifierInstance& p, const std::vector<int>& classes) {
  const int n = p.size();
  std::vector<std::vector<CMatrix>> a(n, std::vector<CMatrix>(n)), d = a;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      a[x][y] = CMatrix::Constant(1, 1, classes[x] != classes[y] ? 1.0 : 0.0);
      d[x][y] = CMatrix::Constant(1, 1, 1.0 - p.psi[x].dot(p.psi[y]));
    }
  }
  Gamma2Instance inst = make_instance(a, d);
  inst.labels1 = inst.labels2 = p.labels;
  return inst;
}

double agreement(const PurifierInstance& p, const std::vector<int>& classes,
                 const CMatrix& x) {
  double worst = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    for (int j = 0; j < p.size(); ++j) {
      if (classes[i] == classes[j]) continue;
      worst = std::max(worst, std::abs(x(i, j) - p.psi[i].dot(p.psi[j])));
    }
  }
  return worst;
}

}  // namespace

double PurifierInstance::weight(int x, int i) const {
  const int h = dim() / outputs;
  return psi[x].segment(i * h, h).squaredNorm();
}

PurifierInstance PurifierInstance::from_json(const json& j) {
  PurifierInstance p;
  p.labels = labels_of(j, "psi");
  for (const std::string& l : p.labels) {
    p.psi.push_back(vector_from_json(field(j, "psi", l), "psi[" + l + "]"));
    if (j.contains("projectors")) {
      p.projectors.push_back(matrix_from_json(field(j, "projectors", l), "projectors[" + l + "]"));
    }
  }
  p.outputs = j.value("outputs", 2);
  p.c = j.value("c", 0.5);
  p.delta = j.value("delta", 0.25);
  check_states(p);
  return p;
}

json PurifierInstance::to_json() const {
  json j;
  j["labels"] = labels;
  j["outputs"] = outputs;
  j["c"] = c;
  j["delta"] = delta;
  for (int x = 0; x < size(); ++x) {
    j["psi"][labels[x]] = vector_to_json(psi[x]);
    if (!projectors.empty()) j["projectors"][labels[x]] = matrix_to_json(projectors[x]);
  }
  return j;
}

json PurifierCertificate::to_json() const {
  return json{{"value", certificate.value},
              {"residual", certificate.residual},
              {"tail", certificate.tail},
              {"bound", bound},
              {"base_norm", base_norm},
              {"norm_bound", norm_bound},
              {"agreement", agreement},
              {"classes", classes},
              {"k", k}};
}

PurifierCertificate purify_function_binary(const PurifierInstance& p, int k) {
  check_function_shape(p);
  if (p.outputs != 2) throw InputError("purifier (binary): expected two outputs");
  const double c = p.c, d = p.delta;
  if (!(0.0 < c - d && c + d < 1.0 && d > 0.0)) {
    throw InputError("purifier (binary): need 0 < c - delta < c + delta < 1");
  }
  const double alpha = std::sqrt((1.0 - c - d) / (1.0 - c + d));
  const double beta = std::sqrt((c + d) / (c - d));
  const int n = p.size();
  std::vector<int> classes(n);
  CMatrix phi(p.dim(), n);
  for (int x = 0; x < n; ++x) {
    const double w1 = p.weight(x, 1);
    const CVector p0 = block_part(p.psi[x], 2, 0), p1 = block_part(p.psi[x], 2, 1);
    if (w1 <= c - d + kGapSlack) {
      classes[x] = 0;
      phi.col(x) = std::sqrt(alpha) * p0 + std::sqrt(beta) * p1;
    } else if (w1 >= c + d - kGapSlack) {
      classes[x] = 1;
      phi.col(x) = p0 / std::sqrt(alpha) + p1 / std::sqrt(beta);
    } else {
      throw InputError("purifier (binary): label " + p.labels[x] + " has weight " +
                       std::to_string(w1) + " inside the gap");
    }
  }
  const Gamma2Instance inst = function_instance(p, classes);
  const IndicatorFactors ind = indicator_factors(classes);
  PurifierCertificate out = ind.value == 0.0
                                ? zero_certificate(inst)
                                : assemble(inst, phi, phi, ind.a, ind.b, ind.value, k);
  out.classes = classes;
  out.norm_bound = std::sqrt((1 - c) * (1 - c) - d * d) + std::sqrt(c * c - d * d);
  out.bound = 2.0 / (1.0 - out.norm_bound);
  out.agreement = agreement(p, classes, phi.adjoint() * phi);
  if (ind.value == 0.0) {
    for (int x = 0; x < n; ++x) out.base_norm = std::max(out.base_norm, phi.col(x).squaredNorm());
  }
  return out;
}

PurifierCertificate purify_function_multi(const PurifierInstance& p, int k) {
  check_function_shape(p);
  const double d = p.delta;
  if (!(d > 0.0 && d <= 0.5)) throw InputError("purifier (multi): delta must lie in (0, 1/2]");
  const int n = p.size(), m = p.outputs;
  const double s = std::sqrt(2.0 * d);
  CVector a(3), b(3), a2(3), b2(3);
  a << 1.0, s, 0.0;
  a /= 1.0 + 2.0 * d;
  b << 1.0, 0.0, s;
  a2 << 1.0, 0.0, s;
  a2 /= 1.0 + 2.0 * d;
  b2 << 1.0, s, 0.0;
  std::vector<int> classes(n);
  CMatrix u = CMatrix::Zero(3 * p.dim(), n), v = u;
  for (int x = 0; x < n; ++x) {
    int best = 0;
    for (int i = 1; i < m; ++i) {
      if (p.weight(x, i) > p.weight(x, best)) best = i;
    }
    if (p.weight(x, best) < 0.5 + d - kGapSlack) {
      throw InputError("purifier (multi): label " + p.labels[x] + " has no output of weight >= 1/2 + delta");
    }
    classes[x] = best;
    for (int j = 0; j < m; ++j) {
      const CVector part = block_part(p.psi[x], m, j);
      u.col(x) += kron(j == best ? a : b, part);
      v.col(x) += kron(j == best ? a2 : b2, part);
    }
  }
  const Gamma2Instance inst = function_instance(p, classes);
  const IndicatorFactors ind = indicator_factors(classes);
  PurifierCertificate out = ind.value == 0.0 ? zero_certificate(inst)
                                             : assemble(inst, u, v, ind.a, ind.b, ind.value, k);
  out.classes = classes;
  out.norm_bound = 1.0 - 2.0 * d * d;
  out.bound = 2.0 / (2.0 * d * d);
  out.agreement = agreement(p, classes, u.adjoint() * v);
  if (ind.value == 0.0) {
    for (int x = 0; x < n; ++x) {
      out.base_norm = std::max({out.base_norm, u.col(x).squaredNorm(), v.col(x).squaredNorm()});
    }
  }
  return out;
}

json GeneralPurifier::to_json() const {
  return json{{"sigma_gram", matrix_to_json(sigma_gram)},
              {"sigma_unit_error", sigma_unit_error},
              {"sigma_support_error", sigma_support_error},
              {"gram_error", gram_error},
              {"certificate", purifier.to_json()}};
}

GeneralPurifier purify_general(const PurifierInstance& p, int k, double max_tail) {
  check_states(p);
  const int n = p.size(), dz = p.dim();
  if (static_cast<int>(p.projectors.size()) != n) {
    throw InputError("purifier (general): one projector per label required");
  }
  if (!(p.delta > 0.0 && p.delta <= 1.0)) throw InputError("purifier (general): delta must lie in (0, 1]");
  std::vector<CVector> good(n), bad(n);
  for (int x = 0; x < n; ++x) {
    const CMatrix& pr = p.projectors[x];
    const std::string where = "projectors[" + p.labels[x] + "]";
    require_finite(pr, where);
    if (pr.rows() != dz || pr.cols() != dz || hermiticity_deviation(pr) > 1e-9 ||
        (pr * pr - pr).cwiseAbs().maxCoeff() > 1e-9) {
      throw InputError(where + ": not an orthogonal projector on the state space");
    }
    good[x] = pr * p.psi[x];
    bad[x] = p.psi[x] - good[x];
    if (good[x].squaredNorm() < p.delta - kGapSlack) {
      throw InputError("purifier (general): label " + p.labels[x] + " has success weight " +
                       std::to_string(good[x].squaredNorm()) + " below delta");
    }
  }

  GeneralPurifier out;
  CMatrix pg(n, n), qg(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      pg(x, y) = good[x].dot(good[y]);
      qg(x, y) = bad[x].dot(bad[y]);
    }
  }
  const CMatrix tg = (CMatrix::Ones(n, n) - qg).cwiseInverse();
  out.sigma_gram = pg.cwiseProduct(tg);

  // τ_x from T = τ*τ; drift below zero is clipped.
  const Spectrum sp = eig_hermitian((tg + tg.adjoint()) / 2.0);
  if (sp.eigenvalues.front().real() < -1e-8) {
    throw InputError("purifier (general): series Gram is not positive semidefinite");
  }
  CMatrix root = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    root.row(i) = std::sqrt(std::max(0.0, sp.eigenvalues[i].real())) * sp.eigenvectors.col(i).adjoint();
  }
  for (int x = 0; x < n; ++x) {
    const CVector sig = kron(good[x], root.col(x));
    out.sigma.push_back(sig);
    out.sigma_unit_error = std::max(out.sigma_unit_error, std::abs(sig.norm() - 1.0));
    const CVector proj = kron(p.projectors[x], identity(n)) * sig;
    out.sigma_support_error = std::max(out.sigma_support_error, (proj - sig).norm());
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      out.gram_error = std::max(out.gram_error, std::abs(out.sigma[x].dot(out.sigma[y]) - out.sigma_gram(x, y)));
    }
  }

  // Instance (1 − ⟨σ_x,σ_y⟩ | (1 − ⟨ψ_x,ψ_y⟩) ⊕ (R_x − R_y)).
  std::vector<std::vector<CMatrix>> a(n, std::vector<CMatrix>(n)), d = a;
  std::vector<CMatrix> refl(n);
  for (int x = 0; x < n; ++x) refl[x] = identity(dz) - 2.0 * p.projectors[x];
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      a[x][y] = CMatrix::Constant(1, 1, 1.0 - out.sigma_gram(x, y));
      d[x][y] = direct_sum(CMatrix::Constant(1, 1, 1.0 - p.psi[x].dot(p.psi[y])), refl[x] - refl[y]);
    }
  }
  Gamma2Instance inst = make_instance(a, d);
  inst.labels1 = inst.labels2 = p.labels;

  // Numerator 1 − P − Q = (1 − ⟨ψ_x,ψ_y⟩) − ½ w_x*(R_x − R_y)ψ_y with
  // w_x = (2Π_x − I)ψ_x, factored as (1, w_x/√2) against (1, −ψ_y/√2).
  std::vector<CVector> ou(n), ov(n);
  CMatrix bu(dz, n);
  for (int x = 0; x < n; ++x) {
    const CVector w = good[x] - bad[x];
    ou[x] = CVector(1 + dz);
    ou[x] << 1.0, w / std::sqrt(2.0);
    ov[x] = CVector(1 + dz);
    ov[x] << 1.0, -p.psi[x] / std::sqrt(2.0);
    bu.col(x) = bad[x];
  }
  const double outer = 1.5;
  double g = 0.0;
  for (int x = 0; x < n; ++x) g = std::max(g, bad[x].squaredNorm());
  if (k > 0 && outer * series_tail(g, k) > max_tail) {
    throw InputError("purifier (general): K = " + std::to_string(k) + " leaves tail " +
                     std::to_string(outer * series_tail(g, k)) + "; use K >= " +
                     std::to_string(truncation_for(g, max_tail / outer)));
  }
  if (g == 0.0) {
    // Every ψ_x already lies in its target space; the series is the constant 1.
    Gamma2Primal prim;
    prim.workspace = 1;
    for (int x = 0; x < n; ++x) {
      prim.upsilon.push_back(CMatrix(ou[x]));
      prim.phi.push_back(CMatrix(ov[x]));
    }
    out.purifier.instance = inst;
    out.purifier.k = 0;
    Gamma2Certificate& c = out.purifier.certificate;
    c.residual = factorization_residual(inst, prim.upsilon, prim.phi);
    c.factor_objective = factorization_objective(prim.upsilon, prim.phi);
    c.value = c.factor_objective;
    c.primal = std::move(prim);
  } else {
    out.purifier = assemble(inst, bu, bu, ou, ov, outer, k);
  }
  out.purifier.norm_bound = 1.0 - p.delta;
  out.purifier.bound = 2.0 / p.delta;
  return out;
}

PurifierInstance trend_instance(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InputError("trend instance: delta must lie in (0, 1]");
  PurifierInstance p;
  p.labels = {"0", "1"};
  p.delta = delta;
  CMatrix pr = CMatrix::Zero(3, 3);
  pr(0, 0) = 1.0;
  pr(1, 1) = 1.0;
  for (int x = 0; x < 2; ++x) {
    p.psi.push_back(std::sqrt(delta) * basis_vector(3, x) + std::sqrt(1.0 - delta) * basis_vector(3, 2));
    p.projectors.push_back(pr);
  }
  return p;
}

json TrendReport::to_json() const {
  json pts = json::array();
  for (const TrendPoint& t : points) {
    pts.push_back({{"delta", t.delta}, {"value", t.value}, {"certified", t.certified}, {"tail", t.tail}});
  }
  return json{{"points", pts}, {"ratios", ratios}, {"within_bound", within_bound}};
}

TrendReport purifier_trend_check(const std::vector<double>& deltas) {
  TrendReport rep;
  for (double d : deltas) {
    const PurifierInstance p = trend_instance(d);
    const GeneralPurifier gp = purify_general(p);
    const int n = p.size(), dz = p.dim();
    std::vector<CMatrix> oracle(n), refl(n);
    for (int x = 0; x < n; ++x) {
      CVector e(dz + 1);
      e << 0.0, p.psi[x];
      oracle[x] = state_reflection(e);
      refl[x] = identity(dz) - 2.0 * p.projectors[x];
    }
    std::vector<std::vector<CMatrix>> a(n, std::vector<CMatrix>(n)), dl = a;
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        a[x][y] = CMatrix::Constant(1, 1, 1.0 - gp.sigma_gram(x, y));
        dl[x][y] = direct_sum(oracle[x] - oracle[y], refl[x] - refl[y]);
      }
    }
    TrendPoint tp;
    tp.delta = d;
    tp.value = gamma2_solve(make_instance(a, dl)).value();
    tp.certified = gp.purifier.certificate.value;
    tp.tail = gp.purifier.certificate.tail;
    rep.points.push_back(tp);
  }
  for (size_t i = 1; i < rep.points.size(); ++i) {
    const TrendPoint& prev = rep.points[i - 1];
    const TrendPoint& cur = rep.points[i];
    const double r = prev.value > 0 ? cur.value / prev.value : 0.0;
    rep.ratios.push_back(r);
    // δ^{−1/2} growth with 25% slack, for any spacing of the grid.
    if (r > std::sqrt(prev.delta / cur.delta) * 1.25) rep.within_bound = false;
  }
  return rep;
}

}  // namespace advbound
