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

#include "advbound/gamma2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace advbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string pair_name(const Gamma2Instance& inst, int x, int y) {
  return "(" + inst.labels1[x] + "," + inst.labels2[y] + ")";
}

bool is_zero(const CMatrix& m, double tol) {
  return m.size() == 0 || m.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

void Gamma2Instance::validate() const {
  if (static_cast<int>(a.size()) != n1() ||
      static_cast<int>(delta.size()) != n1()) {
    throw InputError("gamma2 instance: row count does not match labels1");
  }
  for (int x = 0; x < n1(); ++x) {
    if (static_cast<int>(a[x].size()) != n2() ||
        static_cast<int>(delta[x].size()) != n2()) {
      throw InputError("gamma2 instance: column count does not match labels2");
    }
    for (int y = 0; y < n2(); ++y) {
      const std::string where = "gamma2 instance " + pair_name(*this, x, y);
      require_finite(a[x][y], where + " A");
      require_finite(delta[x][y], where + " Delta");
      require_same_shape(a[x][y], a[0][0], where + " A");
      require_same_shape(delta[x][y], delta[0][0], where + " Delta");
    }
  }
}

std::optional<std::pair<int, int>> Gamma2Instance::infinite_pair(
    double tol) const {
  for (int x = 0; x < n1(); ++x) {
    for (int y = 0; y < n2(); ++y) {
      if (is_zero(delta[x][y], tol) && !is_zero(a[x][y], tol)) {
        return std::make_pair(x, y);
      }
    }
  }
  return std::nullopt;
}

namespace {

std::vector<std::string> labels_from_json(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InputError(std::string("gamma2 instance: missing array '") + key + "'");
  }
  std::vector<std::string> out;
  for (const json& e : j.at(key)) {
    out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
  }
  return out;
}

CMatrix block_from_json(const json& e, const std::string& where) {
  if (e.is_object()) return matrix_from_json(e, where);
  CMatrix m(1, 1);
  m(0, 0) = vector_from_json(json::array({e}), where)(0);
  return m;
}

}  // namespace

Gamma2Instance Gamma2Instance::from_json(const json& j) {
  if (!j.is_object()) throw InputError("gamma2 instance: expected an object");
  Gamma2Instance inst;
  inst.labels1 = labels_from_json(j, "labels1");
  inst.labels2 = labels_from_json(j, "labels2");
  for (const char* key : {"A", "Delta"}) {
    if (!j.contains(key) || !j.at(key).is_object()) {
      throw InputError(std::string("gamma2 instance: missing object '") + key + "'");
    }
  }
  inst.a.assign(inst.n1(), std::vector<CMatrix>(inst.n2()));
  inst.delta.assign(inst.n1(), std::vector<CMatrix>(inst.n2()));
  for (int x = 0; x < inst.n1(); ++x) {
    for (int y = 0; y < inst.n2(); ++y) {
      const std::string k = inst.labels1[x] + "," + inst.labels2[y];
      for (const char* key : {"A", "Delta"}) {
        const json& fam = j.at(key);
        if (!fam.contains(k)) {
          throw InputError(std::string("gamma2 instance: ") + key +
                           " missing pair \"" + k + "\"");
        }
        CMatrix m = block_from_json(fam.at(k), std::string(key) + "[" + k + "]");
        (std::string(key) == "A" ? inst.a : inst.delta)[x][y] = m;
      }
    }
  }
  inst.validate();
  return inst;
}

json Gamma2Instance::to_json() const {
  json j;
  j["labels1"] = labels1;
  j["labels2"] = labels2;
  json ja = json::object(), jd = json::object();
  for (int x = 0; x < n1(); ++x) {
    for (int y = 0; y < n2(); ++y) {
      const std::string k = labels1[x] + "," + labels2[y];
      ja[k] = matrix_to_json(a[x][y]);
      jd[k] = matrix_to_json(delta[x][y]);
    }
  }
  j["A"] = ja;
  j["Delta"] = jd;
  return j;
}

std::vector<std::string> index_labels(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

Gamma2Instance make_instance(const std::vector<std::vector<CMatrix>>& a,
                             const std::vector<std::vector<CMatrix>>& delta) {
  Gamma2Instance inst;
  inst.labels1 = index_labels(static_cast<int>(a.size()));
  inst.labels2 = index_labels(a.empty() ? 0 : static_cast<int>(a[0].size()));
  inst.a = a;
  inst.delta = delta;
  inst.validate();
  return inst;
}

Gamma2Instance scalar_instance(const CMatrix& a, const CMatrix& d) {
  require_same_shape(a, d, "scalar_instance");
  std::vector<std::vector<CMatrix>> am(a.rows()), dm(a.rows());
  for (Eigen::Index x = 0; x < a.rows(); ++x) {
    for (Eigen::Index y = 0; y < a.cols(); ++y) {
      am[x].push_back(CMatrix::Constant(1, 1, a(x, y)));
      dm[x].push_back(CMatrix::Constant(1, 1, d(x, y)));
    }
  }
  return make_instance(am, dm);
}

Gamma2Instance plain_instance(const CMatrix& m) {
  return scalar_instance(m, CMatrix::Ones(m.rows(), m.cols()));
}

json Gamma2Certificate::to_json() const {
  json j;
  j["value"] = value;
  j["residual"] = residual;
  j["factor_objective"] = factor_objective;
  j["gap"] = gap;
  j["status"] = advbound::to_string(status);
  j["iterations"] = iterations;
  if (tail != 0.0) j["tail"] = tail;
  if (primal) {
    json p;
    p["workspace"] = primal->workspace;
    json ups = json::array(), phs = json::array();
    for (const CMatrix& m : primal->upsilon) ups.push_back(matrix_to_json(m));
    for (const CMatrix& m : primal->phi) phs.push_back(matrix_to_json(m));
    p["upsilon"] = ups;
    p["phi"] = phs;
    j["primal"] = p;
  }
  if (dual) {
    json d;
    d["mu"] = std::vector<double>(dual->mu.data(), dual->mu.data() + dual->mu.size());
    d["lambda"] = matrix_to_json(dual->lambda);
    d["gamma"] = matrix_to_json(dual->gamma);
    d["gamma_delta_norm"] = dual->gamma_delta_norm;
    d["gamma_a_norm"] = dual->gamma_a_norm;
    d["raw_min_eig"] = dual->raw_min_eig;
    d["raw_mu_sum"] = dual->raw_mu_sum;
    j["dual"] = d;
  }
  return j;
}

namespace {

struct Layout {
  int n1, n2, x1, x2, z1, z2, off2, total;
  int idx1(int x, int i, int s) const { return (x * x1 + i) * z1 + s; }
  int idx2(int y, int j, int t) const { return off2 + (y * x2 + j) * z2 + t; }
};

Layout layout_of(const Gamma2Instance& inst) {
  Layout l{};
  l.n1 = inst.n1();
  l.n2 = inst.n2();
  l.x1 = inst.dx1();
  l.x2 = inst.dx2();
  l.z1 = inst.dz1();
  l.z2 = inst.dz2();
  l.off2 = l.n1 * l.x1 * l.z1;
  l.total = l.off2 + l.n2 * l.x2 * l.z2;
  return l;
}

void require_finite_value(const Gamma2Instance& inst) {
  if (auto p = inst.infinite_pair()) {
    throw InputError("gamma2: infinite instance, Delta = 0 but A != 0 at pair " +
                     pair_name(inst, p->first, p->second));
  }
}

// Adds G_z ⪯ t·I for one diagonal Gram block (indices idx(i, s)).
template <typename Idx>
void add_norm_constraint(ComplexSDP& p, int g, int t, int xd, int zd, Idx idx) {
  if (zd == 1) {
    std::vector<HTerm> terms;
    for (int i = 0; i < xd; ++i) terms.push_back({g, idx(i, 0), idx(i, 0), 1.0});
    terms.push_back({t, 0, 0, -1.0});
    p.add_constraint(std::move(terms), Relation::leq, 0.0);
    return;
  }
  const int s_blk = p.add_block(BlockKind::psd, zd);
  for (int s = 0; s < zd; ++s) {
    for (int u = s; u < zd; ++u) {
      std::vector<HTerm> re, im;
      for (int i = 0; i < xd; ++i) {
        add_real_part(re, g, idx(i, s), idx(i, u), 1.0);
        add_imag_part(im, g, idx(i, s), idx(i, u), 1.0);
      }
      add_real_part(re, s_blk, s, u, 1.0);
      add_imag_part(im, s_blk, s, u, 1.0);
      if (s == u) {
        re.push_back({t, 0, 0, -1.0});
        p.add_constraint(std::move(re), Relation::eq, 0.0);
      } else {
        p.add_constraint(std::move(re), Relation::eq, 0.0);
        p.add_constraint(std::move(im), Relation::eq, 0.0);
      }
    }
  }
}

}  // namespace

Gamma2Primal factor_gram(const Gamma2Instance& inst, const CMatrix& gram,
                         double cutoff) {
  const Layout l = layout_of(inst);
  Gamma2Primal out;
  out.gram = gram;
  const CMatrix g = gram_factor(gram, cutoff);
  const int r = static_cast<int>(g.rows());
  out.workspace = r;
  for (int x = 0; x < l.n1; ++x) {
    CMatrix u = CMatrix::Zero(l.x1 * r, l.z1);
    for (int i = 0; i < l.x1; ++i) {
      for (int s = 0; s < l.z1; ++s) {
        u.block(i * r, s, r, 1) = g.col(l.idx1(x, i, s));
      }
    }
    out.upsilon.push_back(u);
  }
  for (int y = 0; y < l.n2; ++y) {
    CMatrix v = CMatrix::Zero(l.x2 * r, l.z2);
    for (int j = 0; j < l.x2; ++j) {
      for (int t = 0; t < l.z2; ++t) {
        v.block(j * r, t, r, 1) = g.col(l.idx2(y, j, t));
      }
    }
    out.phi.push_back(v);
  }
  return out;
}

double factorization_residual(const Gamma2Instance& inst,
                              const std::vector<CMatrix>& upsilon,
                              const std::vector<CMatrix>& phi) {
  double worst = 0.0;
  for (int x = 0; x < inst.n1(); ++x) {
    for (int y = 0; y < inst.n2(); ++y) {
      const CMatrix& d = inst.delta[x][y];
      const long w = d.rows() ? upsilon[x].rows() / d.rows() : 0;
      if (w * d.cols() != phi[y].rows()) {
        throw InputError("factorization_residual: workspace dimensions disagree");
      }
      const CMatrix prod =
          upsilon[x].adjoint() * kron(d, identity(static_cast<int>(w))) * phi[y];
      worst = std::max(worst, spectral_norm(inst.a[x][y] - prod));
    }
  }
  return worst;
}

double factorization_objective(const std::vector<CMatrix>& upsilon,
                               const std::vector<CMatrix>& phi) {
  double m = 0.0;
  for (const CMatrix& u : upsilon) m = std::max(m, std::pow(spectral_norm(u), 2));
  for (const CMatrix& v : phi) m = std::max(m, std::pow(spectral_norm(v), 2));
  return m;
}

Gamma2Certificate gamma2_primal(const Gamma2Instance& inst,
                                const Gamma2Options& opt) {
  inst.validate();
  require_finite_value(inst);
  const Layout l = layout_of(inst);
  Gamma2Certificate cert;
  if (l.n1 == 0 || l.n2 == 0) {
    cert.primal = Gamma2Primal{};
    return cert;
  }

  ComplexSDP p;
  const int g = p.add_block(BlockKind::psd, l.total);
  const int t = p.add_block(BlockKind::free_scalar, 1);
  p.objective.push_back({t, 0, 0, 1.0});
  for (int x = 0; x < l.n1; ++x) {
    add_norm_constraint(p, g, t, l.x1, l.z1,
                        [&](int i, int s) { return l.idx1(x, i, s); });
  }
  for (int y = 0; y < l.n2; ++y) {
    add_norm_constraint(p, g, t, l.x2, l.z2,
                        [&](int j, int s) { return l.idx2(y, j, s); });
  }
  for (int x = 0; x < l.n1; ++x) {
    for (int y = 0; y < l.n2; ++y) {
      const CMatrix& d = inst.delta[x][y];
      const CMatrix& am = inst.a[x][y];
      for (int s = 0; s < l.z1; ++s) {
        for (int u = 0; u < l.z2; ++u) {
          std::vector<HTerm> re, im;
          for (int i = 0; i < l.x1; ++i) {
            for (int j = 0; j < l.x2; ++j) {
              if (d(i, j) == cd(0.0, 0.0)) continue;
              add_real_part(re, g, l.idx1(x, i, s), l.idx2(y, j, u), d(i, j));
              add_imag_part(im, g, l.idx1(x, i, s), l.idx2(y, j, u), d(i, j));
            }
          }
          p.add_constraint(std::move(re), Relation::eq, am(s, u).real());
          p.add_constraint(std::move(im), Relation::eq, am(s, u).imag());
        }
      }
    }
  }

  const BlockSDP real = embed_complex(p);
  if (opt.dump) *opt.dump = real;
  SolverOptions so;
  so.tol = opt.tol;
  const SDPSolution sol = solve_sdp(real, so);
  cert.status = sol.status;
  cert.iterations = sol.iterations;
  cert.gap = sol.gap;
  cert.value = sol.primal_objective;
  const std::vector<CMatrix> blocks = complex_primal(p, sol);
  Gamma2Primal prim = factor_gram(inst, psd_part(blocks[g]), opt.rank_cutoff);
  cert.residual = factorization_residual(inst, prim.upsilon, prim.phi);
  cert.factor_objective = factorization_objective(prim.upsilon, prim.phi);
  cert.primal = std::move(prim);
  return cert;
}

CMatrix dual_matrix(const Gamma2Instance& inst, const RVector& mu,
                    const CMatrix& lambda) {
  const Layout l = layout_of(inst);
  CMatrix w = CMatrix::Zero(l.total, l.total);
  for (int x = 0; x < l.n1; ++x) {
    for (int i = 0; i < l.x1; ++i) w(l.idx1(x, i, 0), l.idx1(x, i, 0)) = mu(x);
  }
  for (int y = 0; y < l.n2; ++y) {
    for (int j = 0; j < l.x2; ++j) {
      w(l.idx2(y, j, 0), l.idx2(y, j, 0)) = mu(l.n1 + y);
    }
  }
  // Block (x, y) is −conj(λ_xy Δ_xy) in the Gram convention of this file.
  for (int x = 0; x < l.n1; ++x) {
    for (int y = 0; y < l.n2; ++y) {
      const CMatrix blk = -(lambda(x, y) * inst.delta[x][y]).conjugate();
      for (int i = 0; i < l.x1; ++i) {
        for (int j = 0; j < l.x2; ++j) {
          w(l.idx1(x, i, 0), l.idx2(y, j, 0)) = blk(i, j);
          w(l.idx2(y, j, 0), l.idx1(x, i, 0)) = std::conj(blk(i, j));
        }
      }
    }
  }
  return w;
}

DualCheck check_dual(const Gamma2Instance& inst, const RVector& mu,
                     const CMatrix& lambda) {
  DualCheck c;
  c.mu_sum = mu.sum();
  c.min_eig = min_eigenvalue(dual_matrix(inst, mu, lambda));
  double obj = 0.0;
  for (int x = 0; x < inst.n1(); ++x) {
    for (int y = 0; y < inst.n2(); ++y) {
      obj += 2.0 * (lambda(x, y) * inst.a[x][y](0, 0)).real();
    }
  }
  c.objective = obj;
  return c;
}

Gamma2Certificate gamma2_dual(const Gamma2Instance& inst,
                              const Gamma2Options& opt) {
  inst.validate();
  if (!inst.scalar()) {
    throw InputError("gamma2_dual: the dual program is stated for one-dimensional A only");
  }
  require_finite_value(inst);
  const Layout l = layout_of(inst);
  Gamma2Certificate cert;
  if (l.n1 == 0 || l.n2 == 0) return cert;

  // Dual LMI W(λ, μ) ⪰ 0, Σμ = 1 realized as the multiplier side of a
  // program in standard form: row per variable μ_z, Re λ_xy, Im λ_xy.
  ComplexSDP p;
  const int g = p.add_block(BlockKind::psd, l.total);
  const int u = p.add_block(BlockKind::free_scalar, 1);
  p.objective.push_back({u, 0, 0, 1.0});
  std::vector<int> mu_row(l.n1 + l.n2);
  for (int z = 0; z < l.n1 + l.n2; ++z) {
    std::vector<HTerm> terms;
    const int xd = z < l.n1 ? l.x1 : l.x2;
    for (int i = 0; i < xd; ++i) {
      const int id = z < l.n1 ? l.idx1(z, i, 0) : l.idx2(z - l.n1, i, 0);
      terms.push_back({g, id, id, -1.0});
    }
    terms.push_back({u, 0, 0, 1.0});
    mu_row[z] = p.add_constraint(std::move(terms), Relation::eq, 0.0);
  }
  std::vector<std::vector<int>> re_row(l.n1, std::vector<int>(l.n2));
  std::vector<std::vector<int>> im_row(l.n1, std::vector<int>(l.n2));
  for (int x = 0; x < l.n1; ++x) {
    for (int y = 0; y < l.n2; ++y) {
      const CMatrix& d = inst.delta[x][y];
      const cd a = inst.a[x][y](0, 0);
      std::vector<HTerm> re, im;
      for (int i = 0; i < l.x1; ++i) {
        for (int j = 0; j < l.x2; ++j) {
          if (d(i, j) == cd(0.0, 0.0)) continue;
          re.push_back({g, l.idx1(x, i, 0), l.idx2(y, j, 0), std::conj(d(i, j))});
          im.push_back({g, l.idx1(x, i, 0), l.idx2(y, j, 0),
                        cd(0.0, -1.0) * std::conj(d(i, j))});
        }
      }
      re_row[x][y] = p.add_constraint(std::move(re), Relation::eq, 2.0 * a.real());
      im_row[x][y] = p.add_constraint(std::move(im), Relation::eq, -2.0 * a.imag());
    }
  }
  const BlockSDP real = embed_complex(p);
  if (opt.dump) *opt.dump = real;
  SolverOptions so;
  so.tol = opt.tol;
  const SDPSolution sol = solve_sdp(real, so);
  cert.status = sol.status;
  cert.iterations = sol.iterations;
  cert.gap = sol.gap;

  Gamma2Dual dual;
  dual.mu = RVector(l.n1 + l.n2);
  for (int z = 0; z < l.n1 + l.n2; ++z) dual.mu(z) = sol.dual(mu_row[z]);
  dual.lambda = CMatrix(l.n1, l.n2);
  for (int x = 0; x < l.n1; ++x) {
    for (int y = 0; y < l.n2; ++y) {
      dual.lambda(x, y) = cd(sol.dual(re_row[x][y]), sol.dual(im_row[x][y]));
    }
  }
  // Repair: W(λ, μ + s) = W(λ, μ) + sI, then rescale to Σμ = 1.
  const DualCheck raw = check_dual(inst, dual.mu, dual.lambda);
  dual.raw_min_eig = raw.min_eig;
  dual.raw_mu_sum = raw.mu_sum;
  if (raw.min_eig < 0) dual.mu.array() += -raw.min_eig;
  dual.mu = dual.mu.cwiseMax(0.0);
  const double total = dual.mu.sum();
  if (total > 0) {
    dual.mu /= total;
    dual.lambda /= total;
  }
  const DualCheck fixed = check_dual(inst, dual.mu, dual.lambda);
  cert.value = fixed.objective;
  cert.residual =
      std::max(std::abs(fixed.mu_sum - 1.0), std::max(0.0, -fixed.min_eig));

  dual.gamma = CMatrix::Zero(l.n1, l.n2);
  const double mu_floor = 1e-12;
  for (int x = 0; x < l.n1; ++x) {
    for (int y = 0; y < l.n2; ++y) {
      const double mx = dual.mu(x), my = dual.mu(l.n1 + y);
      if (mx > mu_floor && my > mu_floor) {
        dual.gamma(x, y) = dual.lambda(x, y) / (std::sqrt(mx) * std::sqrt(my));
      }
    }
  }
  CMatrix gd = CMatrix::Zero(l.n1 * l.x1, l.n2 * l.x2);
  CMatrix ga = CMatrix::Zero(l.n1, l.n2);
  for (int x = 0; x < l.n1; ++x) {
    for (int y = 0; y < l.n2; ++y) {
      gd.block(x * l.x1, y * l.x2, l.x1, l.x2) = dual.gamma(x, y) * inst.delta[x][y];
      ga(x, y) = dual.gamma(x, y) * inst.a[x][y](0, 0);
    }
  }
  dual.gamma_delta_norm = spectral_norm(gd);
  dual.gamma_a_norm = spectral_norm(ga);
  cert.dual = std::move(dual);
  return cert;
}

double Gamma2Report::duality_gap() const {
  return dual ? std::abs(primal.value - dual->value) : std::abs(primal.gap);
}

bool Gamma2Report::optimal() const {
  return primal.status == SolveStatus::optimal &&
         (!dual || dual->status == SolveStatus::optimal);
}

Gamma2Certificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw InputError("certificate: expected a JSON object");
  Gamma2Certificate c;
  c.value = j.value("value", 0.0);
  c.residual = j.value("residual", 0.0);
  c.factor_objective = j.value("factor_objective", 0.0);
  c.gap = j.value("gap", 0.0);
  c.tail = j.value("tail", 0.0);
  c.iterations = j.value("iterations", 0);
  if (j.contains("primal")) {
    const json& p = j.at("primal");
    if (!p.contains("upsilon") || !p.contains("phi")) {
      throw InputError("certificate: primal needs 'upsilon' and 'phi'");
    }
    Gamma2Primal prim;
    int k = 0;
    for (const json& m : p.at("upsilon")) {
      prim.upsilon.push_back(matrix_from_json(m, "upsilon[" + std::to_string(k++) + "]"));
    }
    k = 0;
    for (const json& m : p.at("phi")) {
      prim.phi.push_back(matrix_from_json(m, "phi[" + std::to_string(k++) + "]"));
    }
    prim.workspace = p.value("workspace", 0);
    c.primal = std::move(prim);
  }
  return c;
}

json Gamma2Report::to_json() const {
  json j;
  j["value"] = primal.value;
  j["primal"] = primal.to_json();
  if (dual) {
    j["dual_value"] = dual->value;
    j["dual"] = dual->to_json();
  }
  j["duality_gap"] = duality_gap();
  return j;
}

Gamma2Report gamma2_solve(const Gamma2Instance& inst, const Gamma2Options& opt) {
  Gamma2Report r;
  r.primal = gamma2_primal(inst, opt);
  if (inst.scalar()) {
    Gamma2Options o = opt;
    o.dump = nullptr;
    r.dual = gamma2_dual(inst, o);
  }
  return r;
}

double gamma2_value(const Gamma2Instance& inst, double tol) {
  Gamma2Options o;
  o.tol = tol;
  return gamma2_primal(inst, o).value;
}

double crude_bound(const Gamma2Instance& inst) {
  double s = 0.0;
  for (int x = 0; x < inst.n1(); ++x) {
    for (int y = 0; y < inst.n2(); ++y) {
      const double na = trace_norm(inst.a[x][y]);
      const double nd = spectral_norm(inst.delta[x][y]);
      if (na == 0.0) continue;
      if (nd == 0.0) return kInf;
      s += na / nd;
    }
  }
  return s;
}

double entrywise_lower_bound(const Gamma2Instance& inst) {
  double m = 0.0;
  for (int x = 0; x < inst.n1(); ++x) {
    for (int y = 0; y < inst.n2(); ++y) {
      const double na = spectral_norm(inst.a[x][y]);
      const double nd = spectral_norm(inst.delta[x][y]);
      if (na == 0.0) continue;
      if (nd == 0.0) return kInf;
      m = std::max(m, na / nd);
    }
  }
  return m;
}

CMatrix reduce_scalar(const Gamma2Instance& inst) {
  if (!inst.scalar() || inst.dx1() != 1 || inst.dx2() != 1) {
    throw InputError("reduce_scalar: all blocks must be one-dimensional");
  }
  CMatrix out(inst.n1(), inst.n2());
  for (int x = 0; x < inst.n1(); ++x) {
    for (int y = 0; y < inst.n2(); ++y) {
      const cd d = inst.delta[x][y](0, 0);
      if (d == cd(0.0, 0.0)) {
        throw InputError("reduce_scalar: zero delta at pair " + pair_name(inst, x, y));
      }
      out(x, y) = inst.a[x][y](0, 0) / d;
    }
  }
  return out;
}

CombineMode combine_mode_from_string(const std::string& s) {
  if (s == "compose") return CombineMode::compose;
  if (s == "direct_sum" || s == "direct-sum") return CombineMode::direct_sum;
  if (s == "tensor") return CombineMode::tensor;
  if (s == "hadamard-scale" || s == "hadamard_scale") return CombineMode::hadamard_scale;
  throw InputError("unknown combine mode: " + s);
}

namespace {

bool same_family(const std::vector<std::vector<CMatrix>>& p,
                 const std::vector<std::vector<CMatrix>>& q) {
  if (p.size() != q.size()) return false;
  for (size_t x = 0; x < p.size(); ++x) {
    if (p[x].size() != q[x].size()) return false;
    for (size_t y = 0; y < p[x].size(); ++y) {
      if (p[x][y].rows() != q[x][y].rows() || p[x][y].cols() != q[x][y].cols()) {
        return false;
      }
      if (p[x][y].size() && (p[x][y] - q[x][y]).cwiseAbs().maxCoeff() > 1e-12) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

Gamma2Instance combine(const Gamma2Instance& a, const Gamma2Instance& b,
                       CombineMode mode) {
  a.validate();
  b.validate();
  if (a.n1() != b.n1() || a.n2() != b.n2()) {
    throw InputError("combine: label sets differ in size");
  }
  Gamma2Instance out;
  out.labels1 = a.labels1;
  out.labels2 = a.labels2;
  out.a.assign(a.n1(), std::vector<CMatrix>(a.n2()));
  out.delta.assign(a.n1(), std::vector<CMatrix>(a.n2()));
  const bool shared = same_family(a.delta, b.delta);
  if (mode == CombineMode::compose && !same_family(a.delta, b.a)) {
    throw InputError("combine compose: first Delta family must equal second A family");
  }
  if (mode == CombineMode::hadamard_scale) {
    if (!a.scalar() || a.dx1() != 1 || a.dx2() != 1) {
      throw InputError("combine hadamard-scale: first instance must be a plain matrix");
    }
    for (int x = 0; x < a.n1(); ++x) {
      for (int y = 0; y < a.n2(); ++y) {
        if (std::abs(a.delta[x][y](0, 0) - cd(1.0, 0.0)) > 1e-12) {
          throw InputError("combine hadamard-scale: first Delta must be all ones");
        }
      }
    }
  }
  for (int x = 0; x < a.n1(); ++x) {
    for (int y = 0; y < a.n2(); ++y) {
      switch (mode) {
        case CombineMode::compose:
          out.a[x][y] = a.a[x][y];
          out.delta[x][y] = b.delta[x][y];
          break;
        case CombineMode::direct_sum:
          out.a[x][y] = direct_sum(a.a[x][y], b.a[x][y]);
          out.delta[x][y] = shared ? a.delta[x][y]
                                   : direct_sum(a.delta[x][y], b.delta[x][y]);
          break;
        case CombineMode::tensor:
          out.a[x][y] = kron(a.a[x][y], b.a[x][y]);
          out.delta[x][y] = kron(a.delta[x][y], b.delta[x][y]);
          break;
        case CombineMode::hadamard_scale:
          out.a[x][y] = a.a[x][y](0, 0) * b.a[x][y];
          out.delta[x][y] = b.delta[x][y];
          break;
      }
    }
  }
  out.validate();
  return out;
}

json CombineReport::to_json() const {
  return json{{"value_a", value_a},         {"value_b", value_b},
              {"value_combined", value_combined}, {"bound", bound},
              {"equality", equality},       {"slack", slack}};
}

CombineReport combine_check(const Gamma2Instance& a, const Gamma2Instance& b,
                            CombineMode mode, double tol) {
  CombineReport r;
  const Gamma2Instance c = combine(a, b, mode);
  r.value_a = gamma2_value(a, tol);
  r.value_b = gamma2_value(b, tol);
  r.value_combined = gamma2_value(c, tol);
  switch (mode) {
    case CombineMode::direct_sum:
      r.bound = std::max(r.value_a, r.value_b);
      r.equality = same_family(a.delta, b.delta);
      break;
    default:
      r.bound = r.value_a * r.value_b;
  }
  r.slack = r.bound - r.value_combined;
  return r;
}

Gamma2Instance strike(const Gamma2Instance& inst, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
  Gamma2Instance out;
  for (int x : rows) out.labels1.push_back(inst.labels1.at(x));
  for (int y : cols) out.labels2.push_back(inst.labels2.at(y));
  for (int x : rows) {
    std::vector<CMatrix> ar, dr;
    for (int y : cols) {
      ar.push_back(inst.a[x][y]);
      dr.push_back(inst.delta[x][y]);
    }
    out.a.push_back(ar);
    out.delta.push_back(dr);
  }
  return out;
}

Gamma2Instance duplicate(const Gamma2Instance& inst, int r, int c) {
  std::vector<int> rows, cols;
  for (int x = 0; x < inst.n1(); ++x) {
    for (int k = 0; k < r; ++k) rows.push_back(x);
  }
  for (int y = 0; y < inst.n2(); ++y) {
    for (int k = 0; k < c; ++k) cols.push_back(y);
  }
  Gamma2Instance out = strike(inst, rows, cols);
  for (size_t i = 0; i < out.labels1.size(); ++i) {
    out.labels1[i] += "#" + std::to_string(i % r);
  }
  for (size_t j = 0; j < out.labels2.size(); ++j) {
    out.labels2[j] += "#" + std::to_string(j % c);
  }
  return out;
}

GeometricCertificate geometric_certificate_from_factors(const CMatrix& u,
                                                        const CMatrix& v,
                                                        int k) {
  if (u.rows() != v.rows()) {
    throw InputError("geometric_certificate: factor dimensions disagree");
  }
  GeometricCertificate out;
  const int n1 = static_cast<int>(u.cols()), n2 = static_cast<int>(v.cols());
  double g = 0.0;
  for (int i = 0; i < n1; ++i) g = std::max(g, u.col(i).squaredNorm());
  for (int j = 0; j < n2; ++j) g = std::max(g, v.col(j).squaredNorm());
  if (g >= 1.0) throw InputError("geometric_certificate: requires gamma2(X) < 1");
  out.g = g;
  if (k <= 0) {
    k = 1;
    while (std::pow(g, k + 1) / (1.0 - g) > 1e-6) ++k;
  }
  out.k = k;
  CMatrix f(u.rows(), n1 + n2);
  f << u, v;
  const CMatrix gram = f.adjoint() * f;
  CMatrix acc = CMatrix::Ones(n1 + n2, n1 + n2);
  CMatrix power = CMatrix::Ones(n1 + n2, n1 + n2);
  for (int i = 1; i <= k; ++i) {
    power = power.cwiseProduct(gram);
    acc += power;
  }
  const CMatrix x = u.adjoint() * v;
  out.y = (CMatrix::Ones(n1, n2) - x).cwiseInverse();
  out.y_truncated = acc.topRightCorner(n1, n2);

  const Gamma2Instance yinst = plain_instance(out.y);
  Gamma2Primal prim = factor_gram(yinst, acc, 1e-12);
  Gamma2Certificate& cert = out.cert;
  cert.residual = factorization_residual(yinst, prim.upsilon, prim.phi);
  cert.factor_objective = factorization_objective(prim.upsilon, prim.phi);
  cert.tail = std::pow(g, k + 1) / (1.0 - g);
  cert.value = (1.0 - std::pow(g, k + 1)) / (1.0 - g);
  cert.primal = std::move(prim);
  return out;
}

GeometricCertificate geometric_certificate(const CMatrix& x, int k,
                                           double tol) {
  Gamma2Options o;
  o.tol = tol;
  const Gamma2Instance inst = plain_instance(x);
  const Gamma2Certificate base = gamma2_primal(inst, o);
  if (base.value >= 1.0) {
    throw InputError("geometric_certificate: requires gamma2(X) < 1");
  }
  const Gamma2Primal& p = *base.primal;
  CMatrix u(p.workspace, inst.n1()), v(p.workspace, inst.n2());
  for (int i = 0; i < inst.n1(); ++i) u.col(i) = p.upsilon[i].col(0);
  for (int j = 0; j < inst.n2(); ++j) v.col(j) = p.phi[j].col(0);
  // Base factors reproduce X only to solver accuracy; Y is built from them.
  return geometric_certificate_from_factors(u, v, k);
}

}  // namespace advbound
