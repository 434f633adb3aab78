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

#include "advbound/conversion.hpp"

#include <algorithm>
#include <cmath>

namespace advbound {

namespace {

// Eigenphases within this distance of 0 count as fixed points.
constexpr double kPhaseZero = 1e-9;

struct Registers {
  int z, xw;
  int s_off() const { return z; }
  int a_off() const { return 2 * z; }
  int b_off() const { return 2 * z + xw; }
  int total() const { return 2 * z + 2 * xw; }
};

}  // namespace

int ConverterModel::label_index(const std::string& label) const {
  const auto& ls = problem.labels;
  const auto it = std::find(ls.begin(), ls.end(), label);
  if (it == ls.end()) throw InputError("converter: unknown label '" + label + "'");
  return static_cast<int>(it - ls.begin());
}

CMatrix phase_projector(const CMatrix& u, double threshold) {
  const Spectrum s = eig_unitary(u);
  const int n = static_cast<int>(u.rows());
  CMatrix p = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (std::abs(s.phases[k]) <= threshold) {
      p += s.eigenvectors.col(k) * s.eigenvectors.col(k).adjoint();
    }
  }
  return p;
}

ConverterModel build_converter(const StateConversionProblem& p,
                               const Gamma2Certificate& cert, double epsilon) {
  p.validate();
  if (!(epsilon > 0.0)) throw InputError("converter: epsilon must be positive");
  if (!cert.primal) throw InputError("converter: certificate has no primal factorization");
  const Gamma2Primal& prim = *cert.primal;
  if (static_cast<int>(prim.upsilon.size()) != p.size() ||
      static_cast<int>(prim.phi.size()) != p.size()) {
    throw InputError("converter: certificate does not match the problem labels");
  }
  const Gamma2Instance inst = state_conversion_instance(p);
  const double res = factorization_residual(inst, prim.upsilon, prim.phi);
  if (res > 1e-7) {
    throw InputError("converter: certificate infeasible (residual " + std::to_string(res) + ")");
  }

  ConverterModel m;
  m.problem = p;
  const int dx = p.dim_x();
  const int rows = static_cast<int>(prim.upsilon[0].rows());
  if (rows % dx != 0) throw InputError("converter: certificate workspace mismatch");
  m.dim_w = rows / dx;
  for (int x = 0; x < p.size(); ++x) {
    m.u.push_back(prim.upsilon[x].col(0));
    m.v.push_back(prim.phi[x].col(0));
  }
  m.w = std::max(factorization_objective(prim.upsilon, prim.phi), epsilon);
  m.epsilon = epsilon;
  m.epsilon_prime = epsilon / 4.0;
  m.delta = m.epsilon_prime * m.epsilon_prime / m.w;

  const Registers r{p.dim_z(), rows};
  const int n = r.total();
  const double scale = std::sqrt(m.w / 2.0) / m.epsilon_prime;
  CMatrix span(n, p.size());
  for (int x = 0; x < p.size(); ++x) {
    CVector tp = CVector::Zero(n), tm = CVector::Zero(n);
    tp.head(r.z) = p.rho[x] / std::sqrt(2.0);
    tm.head(r.z) = p.rho[x] / std::sqrt(2.0);
    tp.segment(r.s_off(), r.z) = p.sigma[x] / std::sqrt(2.0);
    tm.segment(r.s_off(), r.z) = -p.sigma[x] / std::sqrt(2.0);
    const CMatrix ow = kron(p.oracles[x], identity(m.dim_w));
    CVector ps = tm;
    ps.segment(r.a_off(), rows) += scale * m.v[x];
    ps.segment(r.b_off(), rows) -= scale * (ow * m.v[x]);
    m.t_plus.push_back(tp);
    m.t_minus.push_back(tm);
    m.psi.push_back(ps);
    span.col(x) = ps;
  }
  m.lambda = identity(n) - range_projector(span, 1e-10);
  const CMatrix refl_l = reflection(m.lambda);
  for (int x = 0; x < p.size(); ++x) {
    // Range of A v − B (O_x ⊗ I) v, v ∈ X ⊗ W, has orthonormal basis
    // (e_k, −O e_k)/√2.
    const CMatrix ow = kron(p.oracles[x], identity(m.dim_w));
    CMatrix basis = CMatrix::Zero(n, rows);
    basis.block(r.a_off(), 0, rows, rows) = identity(rows) / std::sqrt(2.0);
    basis.block(r.b_off(), 0, rows, rows) = -ow / std::sqrt(2.0);
    const CMatrix pix = identity(n) - basis * basis.adjoint();
    m.pi.push_back(pix);
    m.unitary.push_back(reflection(pix) * refl_l);
  }
  return m;
}

namespace {

CVector swap_zs(const CVector& s, int dz) {
  CVector out = s;
  out.head(dz) = s.segment(dz, dz);
  out.segment(dz, dz) = s.head(dz);
  return out;
}

void check_label(const ConverterModel& m, int x) {
  if (x < 0 || x >= m.problem.size()) throw InputError("converter: label index out of range");
}

}  // namespace

json ConverterRun::to_json() const {
  return json{{"error", error}, {"term_plus", term_plus}, {"term_minus", term_minus}};
}

ConverterRun run_converter(const ConverterModel& m, int x) {
  check_label(m, x);
  const int n = m.dim(), dz = m.dim_z();
  const CMatrix p0 = phase_projector(m.unitary[x], kPhaseZero);
  const CMatrix detect = 2.0 * p0 - identity(n);
  CVector start = CVector::Zero(n);
  start.head(dz) = m.problem.rho[x];
  CVector target = CVector::Zero(n);
  target.head(dz) = m.problem.sigma[x];
  ConverterRun run;
  run.final_state = swap_zs(detect * start, dz);
  run.error = (run.final_state - target).norm();
  run.term_plus = (detect * m.t_plus[x] - m.t_plus[x]).norm() / std::sqrt(2.0);
  run.term_minus = (detect * m.t_minus[x] + m.t_minus[x]).norm() / std::sqrt(2.0);
  return run;
}

json ClaimReport::to_json() const {
  return json{{"fixed_residual", fixed_residual},
              {"overlap", overlap},
              {"overlap_bound", overlap_bound},
              {"p0_perp_t_plus", p0_perp_t_plus},
              {"p_delta_t_minus", p_delta_t_minus},
              {"t_minus_bound", t_minus_bound},
              {"claim_plus", claim_plus},
              {"claim_minus", claim_minus}};
}

ClaimReport verify_claims(const ConverterModel& m, int x, double tol) {
  check_label(m, x);
  const int dz = m.dim_z();
  const int rows = static_cast<int>(m.u[x].size());
  const double ep = m.epsilon_prime;
  const CMatrix ow = kron(m.problem.oracles[x], identity(m.dim_w));
  CVector phi = m.t_plus[x];
  const double k = ep / std::sqrt(2.0 * m.w);
  phi.segment(2 * dz, rows) -= k * (ow.adjoint() * m.u[x]);
  phi.segment(2 * dz + rows, rows) -= k * m.u[x];

  ClaimReport rep;
  rep.fixed_residual = (m.unitary[x] * phi - phi).norm();
  rep.overlap = std::norm(m.t_plus[x].dot(phi)) / phi.squaredNorm();
  rep.overlap_bound = 1.0 - ep * ep;
  const CMatrix p0 = phase_projector(m.unitary[x], kPhaseZero);
  const CMatrix pd = phase_projector(m.unitary[x], m.delta);
  rep.p0_perp_t_plus = (m.t_plus[x] - p0 * m.t_plus[x]).norm();
  rep.p_delta_t_minus = (pd * m.t_minus[x]).norm();
  rep.t_minus_bound = m.delta / 2.0 * std::sqrt(1.0 + m.w * m.w / (ep * ep));
  rep.claim_plus = rep.fixed_residual <= tol && rep.overlap >= rep.overlap_bound - tol &&
                   rep.p0_perp_t_plus <= ep + tol;
  rep.claim_minus = rep.p_delta_t_minus <= rep.t_minus_bound + tol;
  return rep;
}

double effective_gap_check(const CMatrix& pi1, const CMatrix& pi2,
                           const CVector& w, double delta) {
  for (const CMatrix* p : {&pi1, &pi2}) {
    require_finite(*p, "effective_gap_check");
    if (p->rows() != p->cols() || p->rows() != w.size()) {
      throw InputError("effective_gap_check: dimension mismatch");
    }
    if (hermiticity_deviation(*p) > 1e-9 || (*p * *p - *p).cwiseAbs().maxCoeff() > 1e-9) {
      throw InputError("effective_gap_check: not an orthogonal projector");
    }
  }
  if ((pi1 * w).norm() > 1e-9 * std::max(1.0, w.norm())) {
    throw InputError("effective_gap_check: requires Pi1 w = 0");
  }
  if (!(delta >= 0.0)) throw InputError("effective_gap_check: delta must be nonnegative");
  const CMatrix u = reflection(pi2) * reflection(pi1);
  const CMatrix pd = phase_projector(u, delta);
  return (pd * (pi2 * w)).norm() - delta / 2.0 * w.norm();
}

}  // namespace advbound
