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

#include "advbound/relations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "advbound/labels.hpp"
#include "advbound/state_oracles.hpp"

namespace advbound {

namespace {

// Labels whose μ_x falls below this are excluded from the Γ/N recovery.
constexpr double kMuFloor = 1e-6;

}  // namespace

RelationMode relation_mode_from_string(const std::string& s) {
  if (s == "approx") return RelationMode::approx;
  if (s == "exact") return RelationMode::exact;
  if (s == "average") return RelationMode::average;
  throw InputError("unknown relation mode '" + s + "' (expected approx, exact or average)");
}

std::string to_string(RelationMode m) {
  switch (m) {
    case RelationMode::approx: return "approx";
    case RelationMode::exact: return "exact";
    case RelationMode::average: return "average";
  }
  return "?";
}

bool RelationProblem::allowed(int x, int a) const {
  const auto& r = relation[x];
  return std::find(r.begin(), r.end(), a) != r.end();
}

std::vector<int> RelationProblem::preimage(int a) const {
  std::vector<int> out;
  for (int x = 0; x < size(); ++x) {
    if (allowed(x, a)) out.push_back(x);
  }
  return out;
}

void RelationProblem::validate() const {
  const int n = size();
  if (n == 0) throw InputError("relation: no labels");
  if (m < 1) throw InputError("relation: m must be at least 1");
  if (static_cast<int>(delta.size()) != n || static_cast<int>(relation.size()) != n) {
    throw InputError("relation: delta and relation need one entry per label");
  }
  for (int x = 0; x < n; ++x) {
    if (static_cast<int>(delta[x].size()) != n) throw InputError("relation: delta row size");
    for (int y = 0; y < n; ++y) {
      const std::string where = "delta[" + labels[x] + "][" + labels[y] + "]";
      require_finite(delta[x][y], where);
      if (delta[x][y].rows() != dim_x() || delta[x][y].cols() != dim_x()) {
        throw InputError(where + ": blocks must be square of one size");
      }
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if ((delta[x][y] - delta[y][x].adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        throw InputError("relation: delta must satisfy delta[y][x] = delta[x][y]* (pair " +
                         labels[x] + ", " + labels[y] + ")");
      }
    }
    if (relation[x].empty()) throw InputError("relation: r(" + labels[x] + ") is empty");
    for (int a : relation[x]) {
      if (a < 0 || a >= m) {
        throw InputError("relation: output " + std::to_string(a) + " of " + labels[x] +
                         " outside [0, m)");
      }
    }
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InputError("relation: epsilon must lie in [0, 1)");
  if (!prior.empty()) {
    if (static_cast<int>(prior.size()) != n) throw InputError("relation: prior size");
    double s = 0.0;
    for (double p : prior) {
      if (!(p >= 0.0)) throw InputError("relation: prior entries must be nonnegative");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-10) throw InputError("relation: prior must sum to 1");
  }
}

RelationProblem relation_from_oracles(const std::vector<std::string>& labels,
                                      const std::vector<CMatrix>& oracles, int m,
                                      const std::vector<std::vector<int>>& relation,
                                      double epsilon) {
  if (oracles.size() != labels.size()) throw InputError("relation: one oracle per label");
  for (size_t x = 0; x < oracles.size(); ++x) {
    require_same_shape(oracles[x], oracles[0], "oracle " + labels[x]);
    if (unitarity_deviation(oracles[x]) > 1e-8) {
      throw InputError("relation: oracle " + labels[x] + " is not unitary");
    }
  }
  RelationProblem p;
  p.labels = labels;
  p.m = m;
  p.relation = relation;
  p.epsilon = epsilon;
  const int n = static_cast<int>(labels.size());
  p.delta.assign(n, std::vector<CMatrix>(n));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const int d = static_cast<int>(oracles[x].rows());
      p.delta[x][y] = identity(d) - oracles[x].adjoint() * oracles[y];
    }
  }
  p.validate();
  return p;
}

RelationProblem relation_from_strings(int q, int n, int m,
                                      const std::vector<std::vector<int>>& relation,
                                      double epsilon) {
  if (q < 2 || n < 1) throw InputError("relation: need q >= 2 and n >= 1");
  const auto xs = all_strings(q, n);
  RelationProblem p;
  for (const auto& s : xs) p.labels.push_back(string_label(s));
  p.m = m;
  p.relation = relation;
  p.epsilon = epsilon;
  const int k = static_cast<int>(xs.size());
  p.delta.assign(k, std::vector<CMatrix>(k));
  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < k; ++y) {
      CMatrix d = CMatrix::Zero(n, n);
      for (int j = 0; j < n; ++j) d(j, j) = xs[x][j] != xs[y][j] ? 1.0 : 0.0;
      p.delta[x][y] = d;
    }
  }
  p.validate();
  return p;
}

std::vector<std::vector<int>> function_relation(const std::vector<int>& values) {
  std::vector<std::vector<int>> r;
  for (int v : values) r.push_back({v});
  return r;
}

RelationProblem RelationProblem::from_json(const json& j) {
  if (!j.is_object()) throw InputError("relation: expected a JSON object");
  if (!j.contains("m")) throw InputError("relation: missing 'm'");
  const int m = j.at("m").get<int>();
  const double eps = j.value("epsilon", 0.0);
  std::vector<std::string> labels;
  RelationProblem p;
  auto read_relation = [&](const std::vector<std::string>& ls) {
    std::vector<std::vector<int>> r;
    for (const std::string& l : ls) {
      const json& e = field(j, "relation", l);
      if (!e.is_array()) throw InputError("relation[" + l + "]: expected a list of outputs");
      r.push_back(e.get<std::vector<int>>());
    }
    return r;
  };
  if (j.contains("strings")) {
    const json& s = j.at("strings");
    const int q = s.at("q").get<int>(), n = s.at("n").get<int>();
    std::vector<std::string> ls;
    for (const auto& x : all_strings(q, n)) ls.push_back(string_label(x));
    p = relation_from_strings(q, n, m, read_relation(ls), eps);
  } else if (j.contains("delta")) {
    // Replay form written by to_json.
    p.labels = labels_of(j, "delta");
    const int n = p.size();
    p.delta.assign(n, std::vector<CMatrix>(n));
    for (int x = 0; x < n; ++x) {
      const json& row = field(j, "delta", p.labels[x]);
      for (int y = 0; y < n; ++y) {
        const std::string& ly = p.labels[y];
        if (!row.contains(ly)) {
          throw InputError("relation: delta[" + p.labels[x] + "] has no entry for '" + ly + "'");
        }
        p.delta[x][y] = matrix_from_json(row.at(ly), "delta[" + p.labels[x] + "][" + ly + "]");
      }
    }
    p.m = m;
    p.relation = read_relation(p.labels);
    p.epsilon = eps;
  } else {
    labels = labels_of(j, "oracles");
    std::vector<CMatrix> o;
    for (const std::string& l : labels) {
      o.push_back(matrix_from_json(field(j, "oracles", l), "oracles[" + l + "]"));
    }
    p = relation_from_oracles(labels, o, m, read_relation(labels), eps);
  }
  if (j.contains("prior")) {
    for (const std::string& l : p.labels) p.prior.push_back(field(j, "prior", l).get<double>());
  }
  p.validate();
  return p;
}

json RelationProblem::to_json() const {
  json j;
  j["labels"] = labels;
  j["m"] = m;
  j["epsilon"] = epsilon;
  for (int x = 0; x < size(); ++x) {
    j["relation"][labels[x]] = relation[x];
    if (!prior.empty()) j["prior"][labels[x]] = prior[x];
    for (int y = 0; y < size(); ++y) j["delta"][labels[x]][labels[y]] = matrix_to_json(delta[x][y]);
  }
  return j;
}

namespace {

// Gram columns: (x, i) for x ∈ D, then (y', j) for the copy D'.
struct Layout {
  int n, dx;
  int idx1(int x, int i) const { return x * dx + i; }
  int idx2(int y, int j) const { return (n + y) * dx + j; }
  int total() const { return 2 * n * dx; }
};

Gamma2Instance delta_instance(const RelationProblem& p) {
  std::vector<std::vector<CMatrix>> a(p.size(), std::vector<CMatrix>(p.size(), CMatrix::Zero(1, 1)));
  Gamma2Instance inst;
  inst.labels1 = p.labels;
  inst.labels2 = p.labels;
  inst.a = std::move(a);
  inst.delta = p.delta;
  return inst;
}

// Output constraints of the multiplier program.
enum class OutputRule {
  error_rows,   // 2H∘E_a − conj(Λ + Λ*) ⪰ 0 for every a
  preimages,    // −conj(Λ + Λ*)[r⁻¹(a)] ⪰ 0
  zero_blocks,  // Λ[f⁻¹(a), f⁻¹(a)] = 0
};

struct OutputBlock {
  int block = -1;
  std::vector<int> members;  // labels indexed by the block
  int a = 0;
};

struct DualProgram {
  ComplexSDP sdp;
  int mu = -1, eta = -1, lam = -1, w = -1;
  std::vector<OutputBlock> outputs;
};

// λ_xy occupies entries 2(x n + y) (real) and 2(x n + y) + 1 (imaginary)
// of the free block.
int lre(int n, int x, int y) { return 2 * (x * n + y); }
int lim(int n, int x, int y) { return 2 * (x * n + y) + 1; }

DualProgram build_dual(const RelationProblem& p, RelationMode mode, OutputRule rule,
                       bool symmetrize) {
  const int n = p.size();
  const Layout l{n, p.dim_x()};
  DualProgram d;
  ComplexSDP& s = d.sdp;
  s.sense = Sense::maximize;
  d.mu = s.add_block(BlockKind::nonneg, 2 * n);
  const bool has_eta = rule == OutputRule::error_rows;
  if (has_eta) d.eta = s.add_block(BlockKind::nonneg, mode == RelationMode::average ? 1 : n);
  d.lam = s.add_block(BlockKind::free_scalar, 2 * n * n);
  d.w = s.add_block(BlockKind::psd, l.total());

  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) s.objective.push_back({d.lam, lre(n, x, y), 0, 2.0});
  }
  if (has_eta) {
    if (mode == RelationMode::average) {
      s.objective.push_back({d.eta, 0, 0, -2.0 * p.epsilon});
    } else {
      for (int x = 0; x < n; ++x) s.objective.push_back({d.eta, x, 0, -2.0 * p.epsilon});
    }
  }

  // Σμ = 1.
  std::vector<HTerm> norm;
  for (int z = 0; z < 2 * n; ++z) norm.push_back({d.mu, z, 0, 1.0});
  s.add_constraint(std::move(norm), Relation::eq, 1.0);

  // Slack S_W = W(λ, μ) entrywise: μ_z on the diagonal of block z and
  // −conj(λ_xy Δ_xy) between (x, i) and (y', j); everything else zero.
  for (int r = 0; r < l.total(); ++r) {
    for (int c = r; c < l.total(); ++c) {
      std::vector<HTerm> re, im;
      add_real_part(re, d.w, r, c, 1.0);
      if (r != c) add_imag_part(im, d.w, r, c, 1.0);
      if (r == c) re.push_back({d.mu, r / l.dx, 0, -1.0});
      if (r < n * l.dx && c >= n * l.dx) {
        const int x = r / l.dx, i = r % l.dx;
        const int y = c / l.dx - n, j = c % l.dx;
        const cd dl = p.delta[x][y](i, j);
        // Re(−conj(λΔ)) = −(λr dr − λi di); Im(−conj(λΔ)) = λr di + λi dr.
        if (dl.real() != 0.0) {
          re.push_back({d.lam, lre(n, x, y), 0, dl.real()});
          im.push_back({d.lam, lim(n, x, y), 0, -dl.real()});
        }
        if (dl.imag() != 0.0) {
          re.push_back({d.lam, lim(n, x, y), 0, -dl.imag()});
          im.push_back({d.lam, lre(n, x, y), 0, -dl.imag()});
        }
      }
      s.add_constraint(std::move(re), Relation::eq, 0.0);
      if (r != c) s.add_constraint(std::move(im), Relation::eq, 0.0);
    }
  }

  // Output blocks S = 2H∘E − conj(Λ + Λ*) restricted to `members`:
  // Re S[x,y] = 2η E δ_xy − (λr_xy + λr_yx), Im S[x,y] = λi_xy − λi_yx.
  auto add_output = [&](const std::vector<int>& members, int a) {
    OutputBlock ob;
    ob.members = members;
    ob.a = a;
    ob.block = s.add_block(BlockKind::psd, static_cast<int>(members.size()));
    for (size_t pi = 0; pi < members.size(); ++pi) {
      for (size_t qi = pi; qi < members.size(); ++qi) {
        const int x = members[pi], y = members[qi];
        std::vector<HTerm> re, im;
        add_real_part(re, ob.block, static_cast<int>(pi), static_cast<int>(qi), 1.0);
        re.push_back({d.lam, lre(n, x, y), 0, 1.0});
        re.push_back({d.lam, lre(n, y, x), 0, 1.0});
        if (x == y && has_eta && !p.allowed(x, a)) {
          re.push_back({d.eta, mode == RelationMode::average ? 0 : x, 0,
                        mode == RelationMode::average ? -2.0 * p.prior[x] : -2.0});
        }
        s.add_constraint(std::move(re), Relation::eq, 0.0);
        if (x != y) {
          add_imag_part(im, ob.block, static_cast<int>(pi), static_cast<int>(qi), 1.0);
          im.push_back({d.lam, lim(n, x, y), 0, -1.0});
          im.push_back({d.lam, lim(n, y, x), 0, 1.0});
          s.add_constraint(std::move(im), Relation::eq, 0.0);
        }
      }
    }
    d.outputs.push_back(std::move(ob));
  };
  std::vector<int> everyone(n);
  std::iota(everyone.begin(), everyone.end(), 0);
  for (int a = 0; a < p.m; ++a) {
    const std::vector<int> pre = p.preimage(a);
    switch (rule) {
      case OutputRule::error_rows:
        add_output(everyone, a);
        break;
      case OutputRule::preimages:
        if (!pre.empty()) add_output(pre, a);
        break;
      case OutputRule::zero_blocks:
        for (int x : pre) {
          for (int y : pre) {
            s.add_constraint({{d.lam, lre(n, x, y), 0, 1.0}}, Relation::eq, 0.0);
            s.add_constraint({{d.lam, lim(n, x, y), 0, 1.0}}, Relation::eq, 0.0);
          }
        }
        break;
    }
  }

  if (symmetrize) {
    for (int x = 0; x < n; ++x) {
      s.add_constraint({{d.mu, x, 0, 1.0}, {d.mu, n + x, 0, -1.0}}, Relation::eq, 0.0);
      for (int y = x; y < n; ++y) {
        if (x == y) {
          s.add_constraint({{d.lam, lim(n, x, x), 0, 1.0}}, Relation::eq, 0.0);
          continue;
        }
        s.add_constraint({{d.lam, lre(n, x, y), 0, 1.0}, {d.lam, lre(n, y, x), 0, -1.0}},
                         Relation::eq, 0.0);
        s.add_constraint({{d.lam, lim(n, x, y), 0, 1.0}, {d.lam, lim(n, y, x), 0, 1.0}},
                         Relation::eq, 0.0);
      }
    }
  }
  return d;
}

// Output-block matrix evaluated from the multipliers, independently of the
// program rows.
CMatrix output_matrix(const RelationProblem& p, RelationMode mode, OutputRule rule,
                      const OutputBlock& ob, const CMatrix& lambda, const RVector& eta) {
  const CMatrix b = (lambda + lambda.adjoint()).conjugate();
  const int k = static_cast<int>(ob.members.size());
  CMatrix s(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) s(i, j) = -b(ob.members[i], ob.members[j]);
  }
  if (rule == OutputRule::error_rows) {
    for (int i = 0; i < k; ++i) {
      const int x = ob.members[i];
      if (p.allowed(x, ob.a)) continue;
      s(i, i) += mode == RelationMode::average ? 2.0 * eta(0) * p.prior[x] : 2.0 * eta(x);
    }
  }
  return s;
}

RelationBound solve_dual(const RelationProblem& p, RelationMode mode, OutputRule rule,
                         const RelationOptions& opt) {
  p.validate();
  const int n = p.size();
  DualProgram d = build_dual(p, mode, rule, opt.symmetrize);
  const BlockSDP real = embed_complex(d.sdp);
  if (opt.dump) *opt.dump = real;
  SolverOptions so;
  so.tol = opt.tol;
  const SDPSolution sol = solve_sdp(real, so);
  const std::vector<CMatrix> blocks = complex_primal(d.sdp, sol);

  RelationBound out;
  out.mode = mode;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.gap = sol.gap;
  RelationDual& dual = out.dual;
  dual.mu = blocks[d.mu].col(0).real().cwiseMax(0.0);
  dual.eta = d.eta >= 0 ? RVector(blocks[d.eta].col(0).real().cwiseMax(0.0)) : RVector();
  dual.lambda = CMatrix(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      dual.lambda(x, y) = cd(blocks[d.lam](lre(n, x, y), 0).real(),
                             blocks[d.lam](lim(n, x, y), 0).real());
    }
  }

  // Repair as in the γ₂ dual: W(λ, μ + s) = W(λ, μ) + sI, then rescale.
  const Gamma2Instance inst = delta_instance(p);
  const double raw_min = min_eigenvalue(dual_matrix(inst, dual.mu, dual.lambda));
  if (raw_min < 0) dual.mu.array() += -raw_min;
  const double total = dual.mu.sum();
  if (total > 0) {
    dual.mu /= total;
    dual.lambda /= total;
    dual.eta /= total;
  }
  dual.w_min_eig = min_eigenvalue(dual_matrix(inst, dual.mu, dual.lambda));
  dual.output_min_eig = 0.0;
  for (const OutputBlock& ob : d.outputs) {
    const CMatrix s = output_matrix(p, mode, rule, ob, dual.lambda, dual.eta);
    dual.output_min_eig = std::min(dual.output_min_eig, min_eigenvalue(s));
  }
  double zero_violation = 0.0;
  if (rule == OutputRule::zero_blocks) {
    for (int a = 0; a < p.m; ++a) {
      for (int x : p.preimage(a)) {
        for (int y : p.preimage(a)) zero_violation = std::max(zero_violation, std::abs(dual.lambda(x, y)));
      }
    }
  }
  out.residual = std::max({std::abs(dual.mu.sum() - 1.0), std::max(0.0, -dual.w_min_eig),
                           std::max(0.0, -dual.output_min_eig), zero_violation});

  double value = 2.0 * dual.lambda.real().sum();
  if (d.eta >= 0) value -= 2.0 * p.epsilon * dual.eta.sum();
  out.value = value;

  // Γ_xy = λ_xy / (√μ_x √μ_y'), ν_x = η_x / μ_x.
  dual.gamma = CMatrix::Zero(n, n);
  dual.nu = RVector::Zero(mode == RelationMode::approx && d.eta >= 0 ? n : 0);
  for (int x = 0; x < n; ++x) {
    if (dual.mu(x) <= kMuFloor || dual.mu(n + x) <= kMuFloor) dual.flagged.push_back(x);
  }
  auto flagged = [&](int x) {
    return std::find(dual.flagged.begin(), dual.flagged.end(), x) != dual.flagged.end();
  };
  for (int x = 0; x < n; ++x) {
    if (flagged(x)) continue;
    for (int y = 0; y < n; ++y) {
      if (flagged(y)) continue;
      dual.gamma(x, y) = dual.lambda(x, y) / (std::sqrt(dual.mu(x)) * std::sqrt(dual.mu(n + y)));
    }
    if (dual.nu.size() > 0) dual.nu(x) = dual.eta(x) / dual.mu(x);
  }
  CMatrix gd = CMatrix::Zero(n * p.dim_x(), n * p.dim_x());
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      gd.block(x * p.dim_x(), y * p.dim_x(), p.dim_x(), p.dim_x()) = dual.gamma(x, y) * p.delta[x][y];
    }
  }
  dual.gamma_delta_norm = spectral_norm(gd);
  if (dual.flagged.empty() && opt.symmetrize) {
    const CMatrix gh = (dual.gamma + dual.gamma.adjoint()) / 2.0;
    if (mode == RelationMode::average) {
      CVector u(n);
      for (int x = 0; x < n; ++x) u(x) = std::sqrt(2.0 * dual.mu(x));
      const double eta = d.eta >= 0 ? dual.eta(0) : 0.0;
      dual.simplified = u.dot(gh * u).real() - 2.0 * p.epsilon * eta;
    } else if (mode == RelationMode::approx && d.eta >= 0) {
      dual.simplified = max_eigenvalue(gh - p.epsilon * CMatrix(dual.nu.cast<cd>().asDiagonal()));
    } else {
      dual.simplified = max_eigenvalue(gh);
    }
  }
  return out;
}

double vec_max(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

json RelationBound::to_json() const {
  json j{{"mode", advbound::to_string(mode)},
         {"value", value},
         {"residual", residual},
         {"gap", gap},
         {"status", advbound::to_string(status)},
         {"iterations", iterations}};
  json d;
  d["mu"] = std::vector<double>(dual.mu.data(), dual.mu.data() + dual.mu.size());
  d["eta"] = std::vector<double>(dual.eta.data(), dual.eta.data() + dual.eta.size());
  d["lambda"] = matrix_to_json(dual.lambda);
  d["gamma"] = matrix_to_json(dual.gamma);
  d["nu"] = std::vector<double>(dual.nu.data(), dual.nu.data() + dual.nu.size());
  d["flagged"] = dual.flagged;
  d["simplified"] = dual.simplified ? json(*dual.simplified) : json("not evaluated");
  d["gamma_delta_norm"] = dual.gamma_delta_norm;
  d["w_min_eig"] = dual.w_min_eig;
  d["output_min_eig"] = dual.output_min_eig;
  j["dual"] = d;
  return j;
}

RelationBound relation_bound_exact(const RelationProblem& p, const RelationOptions& opt) {
  return solve_dual(p, RelationMode::exact, OutputRule::preimages, opt);
}

RelationBound relation_bound_approx(const RelationProblem& p, const RelationOptions& opt) {
  if (p.epsilon == 0.0) return relation_bound_exact(p, opt);
  return solve_dual(p, RelationMode::approx, OutputRule::error_rows, opt);
}

RelationBound relation_bound_average(const RelationProblem& p, const RelationOptions& opt) {
  if (p.prior.empty()) throw InputError("relation: the average-error bound needs a prior");
  return solve_dual(p, RelationMode::average, OutputRule::error_rows, opt);
}

RelationBound relation_bound(const RelationProblem& p, RelationMode mode,
                             const RelationOptions& opt) {
  switch (mode) {
    case RelationMode::approx: return relation_bound_approx(p, opt);
    case RelationMode::exact: return relation_bound_exact(p, opt);
    case RelationMode::average: return relation_bound_average(p, opt);
  }
  throw InputError("relation: unknown mode");
}

json RelationPrimal::to_json() const {
  json ys = json::array();
  for (const CMatrix& y : outputs) ys.push_back(matrix_to_json(y));
  return json{{"value", value},     {"residual", residual},
              {"gap", gap},         {"status", advbound::to_string(status)},
              {"iterations", iterations}, {"outputs", ys}};
}

RelationPrimal relation_primal(const RelationProblem& p, RelationMode mode,
                               const RelationOptions& opt) {
  p.validate();
  if (mode == RelationMode::average && p.prior.empty()) {
    throw InputError("relation: the average-error program needs a prior");
  }
  if (mode == RelationMode::approx && p.epsilon == 0.0) mode = RelationMode::exact;
  const int n = p.size();
  const Layout l{n, p.dim_x()};
  ComplexSDP s;
  const int g = s.add_block(BlockKind::psd, l.total());
  const int t = s.add_block(BlockKind::free_scalar, 1);
  s.objective.push_back({t, 0, 0, 1.0});
  // Y_a over all labels, or over r⁻¹(a) in the exact setting; pos[a][x] is
  // the row of x in Y_a or −1.
  std::vector<int> yblk(p.m, -1);
  std::vector<std::vector<int>> pos(p.m, std::vector<int>(n, -1));
  for (int a = 0; a < p.m; ++a) {
    std::vector<int> members;
    if (mode == RelationMode::exact) {
      members = p.preimage(a);
    } else {
      members.resize(n);
      std::iota(members.begin(), members.end(), 0);
    }
    if (members.empty()) continue;
    yblk[a] = s.add_block(BlockKind::psd, static_cast<int>(members.size()));
    for (size_t k = 0; k < members.size(); ++k) pos[a][members[k]] = static_cast<int>(k);
  }
  for (int z = 0; z < 2 * n; ++z) {
    std::vector<HTerm> tr;
    for (int i = 0; i < l.dx; ++i) tr.push_back({g, z * l.dx + i, z * l.dx + i, 1.0});
    tr.push_back({t, 0, 0, -1.0});
    s.add_constraint(std::move(tr), Relation::leq, 0.0);
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      std::vector<HTerm> re, im;
      for (int i = 0; i < l.dx; ++i) {
        for (int j = 0; j < l.dx; ++j) {
          const cd dl = p.delta[x][y](i, j);
          if (dl == cd(0.0, 0.0)) continue;
          add_real_part(re, g, l.idx1(x, i), l.idx2(y, j), dl);
          add_imag_part(im, g, l.idx1(x, i), l.idx2(y, j), dl);
        }
      }
      for (int a = 0; a < p.m; ++a) {
        if (pos[a][x] < 0 || pos[a][y] < 0) continue;
        add_real_part(re, yblk[a], pos[a][x], pos[a][y], 1.0);
        add_imag_part(im, yblk[a], pos[a][x], pos[a][y], 1.0);
      }
      s.add_constraint(std::move(re), Relation::eq, 1.0);
      s.add_constraint(std::move(im), Relation::eq, 0.0);
    }
  }
  if (mode == RelationMode::approx) {
    for (int x = 0; x < n; ++x) {
      std::vector<HTerm> err;
      for (int a = 0; a < p.m; ++a) {
        if (!p.allowed(x, a)) err.push_back({yblk[a], pos[a][x], pos[a][x], 1.0});
      }
      if (!err.empty()) s.add_constraint(std::move(err), Relation::leq, p.epsilon);
    }
  } else if (mode == RelationMode::average) {
    std::vector<HTerm> err;
    for (int x = 0; x < n; ++x) {
      for (int a = 0; a < p.m; ++a) {
        if (!p.allowed(x, a) && p.prior[x] > 0) err.push_back({yblk[a], pos[a][x], pos[a][x], p.prior[x]});
      }
    }
    if (!err.empty()) s.add_constraint(std::move(err), Relation::leq, p.epsilon);
  }

  const BlockSDP real = embed_complex(s);
  if (opt.dump) *opt.dump = real;
  SolverOptions so;
  so.tol = opt.tol;
  const SDPSolution sol = solve_sdp(real, so);
  const std::vector<CMatrix> blocks = complex_primal(s, sol);

  RelationPrimal out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.gap = sol.gap;
  out.gram = blocks[g];
  for (int a = 0; a < p.m; ++a) {
    out.outputs.push_back(yblk[a] >= 0 ? blocks[yblk[a]] : CMatrix(0, 0));
  }

  // Recheck the constraints on the returned blocks.
  std::vector<double> viol;
  std::vector<double> norms;
  for (int z = 0; z < 2 * n; ++z) {
    norms.push_back(out.gram.block(z * l.dx, z * l.dx, l.dx, l.dx).trace().real());
  }
  out.value = vec_max(norms);
  viol.push_back(std::max(0.0, -min_eigenvalue(out.gram)));
  for (int a = 0; a < p.m; ++a) {
    if (yblk[a] >= 0) viol.push_back(std::max(0.0, -min_eigenvalue(out.outputs[a])));
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      cd lhs = 1.0;
      for (int a = 0; a < p.m; ++a) {
        if (pos[a][x] >= 0 && pos[a][y] >= 0) lhs -= out.outputs[a](pos[a][x], pos[a][y]);
      }
      cd rhs = 0.0;
      for (int i = 0; i < l.dx; ++i) {
        for (int j = 0; j < l.dx; ++j) rhs += p.delta[x][y](i, j) * out.gram(l.idx1(x, i), l.idx2(y, j));
      }
      viol.push_back(std::abs(lhs - rhs));
    }
  }
  double avg = 0.0;
  for (int x = 0; x < n; ++x) {
    double e = 0.0;
    for (int a = 0; a < p.m; ++a) {
      if (!p.allowed(x, a) && pos[a][x] >= 0) e += out.outputs[a](pos[a][x], pos[a][x]).real();
    }
    if (mode == RelationMode::approx) viol.push_back(std::max(0.0, e - p.epsilon));
    if (mode == RelationMode::average) avg += p.prior[x] * e;
  }
  if (mode == RelationMode::average) viol.push_back(std::max(0.0, avg - p.epsilon));
  out.residual = vec_max(viol);
  return out;
}

json FunctionAdversary::to_json() const {
  return json{{"value", value()}, {"primal", primal.to_json()}, {"dual", dual.to_json()}};
}

FunctionAdversary function_adversary(const RelationProblem& p, const RelationOptions& opt) {
  p.validate();
  for (int x = 0; x < p.size(); ++x) {
    if (p.relation[x].size() != 1) {
      throw InputError("function_adversary: r(" + p.labels[x] + ") must have one output");
    }
  }
  FunctionAdversary out;
  Gamma2Instance inst = delta_instance(p);
  for (int x = 0; x < p.size(); ++x) {
    for (int y = 0; y < p.size(); ++y) {
      inst.a[x][y](0, 0) = p.relation[x][0] != p.relation[y][0] ? 1.0 : 0.0;
    }
  }
  Gamma2Options go;
  go.tol = opt.tol;
  out.primal = gamma2_primal(inst, go);
  RelationOptions dopt = opt;
  dopt.dump = nullptr;
  out.dual = solve_dual(p, RelationMode::exact, OutputRule::zero_blocks, dopt);
  return out;
}

}  // namespace advbound
