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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "advbound/sdp.hpp"

namespace advbound {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::unbounded:
      return "unbounded";
    case SolveStatus::max_iterations:
      return "max-iterations";
  }
  return "unknown";
}

std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::psd:
      return "psd";
    case BlockKind::nonneg:
      return "nonneg";
    case BlockKind::free_scalar:
      return "free";
  }
  return "unknown";
}

int BlockSDP::add_block(BlockKind kind, int dim) {
  blocks.push_back({kind, dim});
  return static_cast<int>(blocks.size()) - 1;
}

int BlockSDP::add_constraint(std::vector<Entry> terms, Relation rel,
                             double rhs) {
  constraints.push_back({std::move(terms), rel, rhs});
  return static_cast<int>(constraints.size()) - 1;
}

namespace {

void check_entry(const std::vector<Block>& blocks, const Entry& e,
                 const std::string& where) {
  if (e.block < 0 || e.block >= static_cast<int>(blocks.size())) {
    throw InputError(where + ": block index out of range");
  }
  const Block& b = blocks[e.block];
  if (b.kind == BlockKind::psd) {
    if (e.row < 0 || e.col < 0 || e.row >= b.dim || e.col >= b.dim) {
      throw InputError(where + ": psd entry out of range");
    }
  } else if (e.row < 0 || e.row >= b.dim || e.col != 0) {
    throw InputError(where + ": scalar entry out of range");
  }
  if (!std::isfinite(e.value)) throw InputError(where + ": non-finite value");
}

}  // namespace

void BlockSDP::validate() const {
  for (const Block& b : blocks) {
    if (b.dim < 0) throw InputError("BlockSDP: negative block dimension");
  }
  for (const Entry& e : objective) check_entry(blocks, e, "objective");
  for (size_t i = 0; i < constraints.size(); ++i) {
    for (const Entry& e : constraints[i].terms) {
      check_entry(blocks, e, "constraint " + std::to_string(i));
    }
    if (!std::isfinite(constraints[i].rhs)) {
      throw InputError("constraint " + std::to_string(i) + ": non-finite rhs");
    }
  }
}

namespace {

json entries_to_json(const std::vector<Entry>& es) {
  json out = json::array();
  for (const Entry& e : es) {
    out.push_back(json::array({e.block, e.row, e.col, e.value}));
  }
  return out;
}

json block_values_to_json(const std::vector<RMatrix>& v) {
  json out = json::array();
  for (const RMatrix& m : v) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json r = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
      rows.push_back(r);
    }
    out.push_back(rows);
  }
  return out;
}

}  // namespace

json BlockSDP::to_json() const {
  json j;
  j["sense"] = sense == Sense::minimize ? "minimize" : "maximize";
  json bl = json::array();
  for (const Block& b : blocks) {
    bl.push_back({{"kind", advbound::to_string(b.kind)}, {"dim", b.dim}});
  }
  j["blocks"] = bl;
  j["objective"] = entries_to_json(objective);
  json cs = json::array();
  for (const LinearConstraint& c : constraints) {
    cs.push_back({{"terms", entries_to_json(c.terms)},
                  {"relation", c.relation == Relation::eq ? "=" : "<="},
                  {"rhs", c.rhs}});
  }
  j["constraints"] = cs;
  return j;
}

json SDPSolution::to_json() const {
  json j;
  j["status"] = advbound::to_string(status);
  j["primal_objective"] = primal_objective;
  j["dual_objective"] = dual_objective;
  j["gap"] = gap;
  j["primal_infeasibility"] = primal_infeasibility;
  j["dual_infeasibility"] = dual_infeasibility;
  j["iterations"] = iterations;
  j["primal"] = block_values_to_json(primal);
  j["dual"] = std::vector<double>(dual.data(), dual.data() + dual.size());
  return j;
}

double evaluate_terms(const std::vector<Entry>& terms,
                      const std::vector<RMatrix>& x) {
  double s = 0.0;
  for (const Entry& e : terms) {
    const RMatrix& m = x[e.block];
    if (m.cols() == 1 && m.rows() != 1) {
      s += e.value * m(e.row, 0);
    } else if (m.cols() == 1 && m.rows() == 1) {
      s += e.value * m(0, 0);
    } else {
      s += e.value * (e.row == e.col ? m(e.row, e.row)
                                     : m(e.row, e.col) + m(e.col, e.row));
    }
  }
  return s;
}

namespace {

// Sparse symmetric coefficient on one psd block, r <= c.
struct SE {
  int k;
  int r;
  int c;
  double v;
};

// Standard form after slack insertion, dependent-row removal and scaling.
struct StdForm {
  std::vector<int> dims;          // psd block sizes
  std::vector<int> psd_of_block;  // original block -> psd index or -1
  std::vector<int> nn_offset;     // original block -> offset in nonneg vector
  std::vector<int> free_offset;   // original block -> offset in free vector
  int p = 0;                      // nonneg count (incl. slacks)
  int f = 0;                      // free count
  std::vector<int> slack_of_row;  // original row -> slack index or -1

  std::vector<int> kept;  // original row index of each kept row
  std::vector<std::vector<SE>> apsd;
  std::vector<std::vector<int>> blocks_of_row;
  RMatrix ann;  // m × p
  RMatrix af;   // m × f
  RVector b;
  std::vector<RMatrix> c;
  RVector cnn, cf;

  RVector row_scale;  // original-row normalization of kept rows
  double bscale = 1.0;
  double cscale = 1.0;
  double sign = 1.0;  // −1 for maximisation
};

struct Iterate {
  std::vector<RMatrix> x, z;
  RVector xn, zn, u, y;
};

struct Direction {
  std::vector<RMatrix> dx, dz;
  RVector dxn, dzn, du, dy;
};

RMatrix sym(const RMatrix& m) { return 0.5 * (m + m.transpose()); }

double inner(const RMatrix& a, const RMatrix& b) {
  return (a.array() * b.array()).sum();
}

class Solver {
 public:
  Solver(const BlockSDP& p, const SolverOptions& opt) : p_(p), opt_(opt) {}
  SDPSolution run();

 private:
  bool build();  // false: inconsistent equalities
  RVector apply_a(const std::vector<RMatrix>& x, const RVector& xn,
                  const RVector& u) const;
  void apply_at(const RVector& y, std::vector<RMatrix>& out_psd,
                RVector& out_nn, RVector& out_f) const;
  RMatrix schur(const std::vector<RMatrix>& x,
                const std::vector<RMatrix>& zinv, const RVector& xn,
                const RVector& zn) const;
  bool factor(RMatrix& m);
  Direction solve_direction(const Iterate& it,
                            const std::vector<RMatrix>& zinv,
                            const std::vector<RMatrix>& rc,
                            const RVector& rcn, const RVector& rp,
                            const std::vector<RMatrix>& rd,
                            const RVector& rdn, const RVector& rdf);
  double max_step(const std::vector<RMatrix>& x,
                  const std::vector<RMatrix>& dx, const RVector& xn,
                  const RVector& dxn) const;
  SDPSolution finish(const Iterate& it, SolveStatus status, int iters,
                     bool certificate_only = false) const;

  const BlockSDP& p_;
  SolverOptions opt_;
  StdForm s_;
  Eigen::LLT<RMatrix> llt_;
  RMatrix mreg_;
};

bool Solver::build() {
  const auto& blocks = p_.blocks;
  const int nb = static_cast<int>(blocks.size());
  s_.psd_of_block.assign(nb, -1);
  s_.nn_offset.assign(nb, -1);
  s_.free_offset.assign(nb, -1);
  for (int k = 0; k < nb; ++k) {
    if (blocks[k].kind == BlockKind::psd) {
      s_.psd_of_block[k] = static_cast<int>(s_.dims.size());
      s_.dims.push_back(blocks[k].dim);
    } else if (blocks[k].kind == BlockKind::nonneg) {
      s_.nn_offset[k] = s_.p;
      s_.p += blocks[k].dim;
    } else {
      s_.free_offset[k] = s_.f;
      s_.f += blocks[k].dim;
    }
  }
  const int m0 = static_cast<int>(p_.constraints.size());
  s_.slack_of_row.assign(m0, -1);
  for (int i = 0; i < m0; ++i) {
    if (p_.constraints[i].relation == Relation::leq) s_.slack_of_row[i] = s_.p++;
  }
  s_.sign = p_.sense == Sense::minimize ? 1.0 : -1.0;

  // Merge duplicate coefficients; keep r <= c.
  std::vector<std::vector<SE>> apsd(m0);
  RMatrix ann = RMatrix::Zero(m0, s_.p);
  RMatrix af = RMatrix::Zero(m0, s_.f);
  RVector b(m0);
  for (int i = 0; i < m0; ++i) {
    std::map<std::tuple<int, int, int>, double> acc;
    for (const Entry& e : p_.constraints[i].terms) {
      const BlockKind kind = blocks[e.block].kind;
      if (kind == BlockKind::psd) {
        const int r = std::min(e.row, e.col), c = std::max(e.row, e.col);
        acc[{s_.psd_of_block[e.block], r, c}] += e.value;
      } else if (kind == BlockKind::nonneg) {
        ann(i, s_.nn_offset[e.block] + e.row) += e.value;
      } else {
        af(i, s_.free_offset[e.block] + e.row) += e.value;
      }
    }
    for (const auto& [key, v] : acc) {
      if (v != 0.0) apsd[i].push_back({std::get<0>(key), std::get<1>(key),
                                       std::get<2>(key), v});
    }
    if (s_.slack_of_row[i] >= 0) ann(i, s_.slack_of_row[i]) = 1.0;
    b(i) = p_.constraints[i].rhs;
  }

  // Row norms in the trace inner product.
  RVector rn(m0);
  for (int i = 0; i < m0; ++i) {
    double s = ann.row(i).squaredNorm() + af.row(i).squaredNorm();
    for (const SE& e : apsd[i]) s += (e.r == e.c ? 1.0 : 2.0) * e.v * e.v;
    rn(i) = std::sqrt(s);
  }
  const double bnorm = b.norm();
  // Rows at rounding-noise scale are zero rows; normalizing them would turn
  // noise into a constraint of unit strength.
  const double rzero = 1e-12 * std::max(1.0, m0 > 0 ? rn.maxCoeff() : 0.0);

  // Gram of normalized rows; in-order incremental Cholesky drops dependents.
  std::vector<std::map<std::tuple<int, int, int>, double>> rowmap(m0);
  for (int i = 0; i < m0; ++i) {
    for (const SE& e : apsd[i]) rowmap[i][{e.k, e.r, e.c}] = e.v;
  }
  auto dot = [&](int i, int j) {
    double s = ann.row(i).dot(ann.row(j)) + af.row(i).dot(af.row(j));
    const auto& small = rowmap[i].size() <= rowmap[j].size() ? rowmap[i]
                                                             : rowmap[j];
    const auto& large = rowmap[i].size() <= rowmap[j].size() ? rowmap[j]
                                                             : rowmap[i];
    for (const auto& [key, v] : small) {
      auto it = large.find(key);
      if (it != large.end()) {
        s += (std::get<1>(key) == std::get<2>(key) ? 1.0 : 2.0) * v *
             it->second;
      }
    }
    return s;
  };
  std::vector<int> kept;
  RMatrix lmat(0, 0);
  for (int i = 0; i < m0; ++i) {
    if (rn(i) <= rzero) {
      if (std::abs(b(i)) > 1e-12 * (1.0 + bnorm)) {
        if (s_.slack_of_row[i] < 0 || b(i) < 0) return false;
      }
      continue;
    }
    const int kc = static_cast<int>(kept.size());
    RVector g(kc);
    for (int a = 0; a < kc; ++a) g(a) = dot(kept[a], i) / (rn(kept[a]) * rn(i));
    RVector w = g;
    if (kc > 0) lmat.topLeftCorner(kc, kc).triangularView<Eigen::Lower>().solveInPlace(w);
    const double d = 1.0 - w.squaredNorm();
    if (d <= 1e-10) {
      RVector coef = w;
      lmat.topLeftCorner(kc, kc).transpose().triangularView<Eigen::Upper>().solveInPlace(coef);
      double pred = 0.0;
      for (int a = 0; a < kc; ++a) pred += coef(a) * b(kept[a]) / rn(kept[a]);
      if (std::abs(b(i) / rn(i) - pred) > 1e-8 * (1.0 + bnorm)) return false;
      continue;
    }
    RMatrix nl = RMatrix::Zero(kc + 1, kc + 1);
    if (kc > 0) nl.topLeftCorner(kc, kc) = lmat.topLeftCorner(kc, kc);
    nl.block(kc, 0, 1, kc) = w.transpose();
    nl(kc, kc) = std::sqrt(d);
    lmat = nl;
    kept.push_back(i);
  }

  const int m = static_cast<int>(kept.size());
  s_.kept = kept;
  s_.apsd.resize(m);
  s_.blocks_of_row.resize(m);
  s_.ann.resize(m, s_.p);
  s_.af.resize(m, s_.f);
  s_.b.resize(m);
  s_.row_scale.resize(m);
  for (int a = 0; a < m; ++a) {
    const int i = kept[a];
    const double sc = rn(i);
    s_.row_scale(a) = sc;
    s_.apsd[a] = apsd[i];
    for (SE& e : s_.apsd[a]) e.v /= sc;
    for (const SE& e : s_.apsd[a]) {
      auto& bl = s_.blocks_of_row[a];
      if (std::find(bl.begin(), bl.end(), e.k) == bl.end()) bl.push_back(e.k);
    }
    s_.ann.row(a) = ann.row(i) / sc;
    s_.af.row(a) = af.row(i) / sc;
    s_.b(a) = b(i) / sc;
  }

  s_.c.clear();
  for (int d : s_.dims) s_.c.push_back(RMatrix::Zero(d, d));
  s_.cnn = RVector::Zero(s_.p);
  s_.cf = RVector::Zero(s_.f);
  for (const Entry& e : p_.objective) {
    const BlockKind kind = blocks[e.block].kind;
    const double v = s_.sign * e.value;
    if (kind == BlockKind::psd) {
      RMatrix& cm = s_.c[s_.psd_of_block[e.block]];
      cm(e.row, e.col) += v;
      if (e.row != e.col) cm(e.col, e.row) += v;
    } else if (kind == BlockKind::nonneg) {
      s_.cnn(s_.nn_offset[e.block] + e.row) += v;
    } else {
      s_.cf(s_.free_offset[e.block] + e.row) += v;
    }
  }

  double cn2 = s_.cnn.squaredNorm() + s_.cf.squaredNorm();
  for (const RMatrix& cm : s_.c) cn2 += cm.squaredNorm();
  s_.cscale = std::max(1.0, std::sqrt(cn2));
  s_.bscale = std::max(1.0, s_.b.norm());
  for (RMatrix& cm : s_.c) cm /= s_.cscale;
  s_.cnn /= s_.cscale;
  s_.cf /= s_.cscale;
  s_.b /= s_.bscale;
  return true;
}

RVector Solver::apply_a(const std::vector<RMatrix>& x, const RVector& xn,
                        const RVector& u) const {
  const int m = static_cast<int>(s_.b.size());
  RVector out = s_.ann * xn + s_.af * u;
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (const SE& e : s_.apsd[i]) {
      const RMatrix& xm = x[e.k];
      s += e.v * (e.r == e.c ? xm(e.r, e.r) : xm(e.r, e.c) + xm(e.c, e.r));
    }
    out(i) += s;
  }
  return out;
}

void Solver::apply_at(const RVector& y, std::vector<RMatrix>& out_psd,
                      RVector& out_nn, RVector& out_f) const {
  out_psd.resize(s_.dims.size());
  for (size_t k = 0; k < s_.dims.size(); ++k) {
    out_psd[k] = RMatrix::Zero(s_.dims[k], s_.dims[k]);
  }
  const int m = static_cast<int>(s_.b.size());
  for (int i = 0; i < m; ++i) {
    for (const SE& e : s_.apsd[i]) {
      out_psd[e.k](e.r, e.c) += y(i) * e.v;
      if (e.r != e.c) out_psd[e.k](e.c, e.r) += y(i) * e.v;
    }
  }
  out_nn = s_.ann.transpose() * y;
  out_f = s_.af.transpose() * y;
}

RMatrix Solver::schur(const std::vector<RMatrix>& x,
                      const std::vector<RMatrix>& zinv, const RVector& xn,
                      const RVector& zn) const {
  const int m = static_cast<int>(s_.b.size());
  RMatrix mm = RMatrix::Zero(m, m);
  if (s_.p > 0) {
    const RVector d = xn.cwiseQuotient(zn);
    mm += s_.ann * d.asDiagonal() * s_.ann.transpose();
  }
  // Rows grouped by block for the psd contribution tr(A_i X A_j Z^-1).
  std::vector<std::vector<int>> rows_of_block(s_.dims.size());
  for (int i = 0; i < m; ++i) {
    for (int k : s_.blocks_of_row[i]) rows_of_block[k].push_back(i);
  }
  std::vector<long> nnz_of_block(s_.dims.size(), 0);
  for (int i = 0; i < m; ++i) {
    for (const SE& e : s_.apsd[i]) ++nnz_of_block[e.k];
  }
  for (size_t k = 0; k < s_.dims.size(); ++k) {
    const int n = s_.dims[k];
    const RMatrix& xk = x[k];
    const RMatrix& zk = zinv[k];
    for (int i : rows_of_block[k]) {
      // A_i X is supported on the rows touched by A_i; only those columns
      // of Z^-1 enter Z^-1 A_i X.
      std::vector<int> touched;
      for (const SE& e : s_.apsd[i]) {
        if (e.k != static_cast<int>(k)) continue;
        touched.push_back(e.r);
        touched.push_back(e.c);
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      std::vector<int> pos(n, -1);
      for (size_t a = 0; a < touched.size(); ++a) pos[touched[a]] = static_cast<int>(a);
      const int nt = static_cast<int>(touched.size());
      RMatrix t = RMatrix::Zero(nt, n);
      RMatrix zc(n, nt);
      for (int a = 0; a < nt; ++a) zc.col(a) = zk.col(touched[a]);
      for (const SE& e : s_.apsd[i]) {
        if (e.k != static_cast<int>(k)) continue;
        t.row(pos[e.r]) += e.v * xk.row(e.c);
        if (e.r != e.c) t.row(pos[e.c]) += e.v * xk.row(e.r);
      }
      // g = Z^-1 A_i X, formed densely only when the rows below need more
      // entries than a full product costs.
      const bool dense = nnz_of_block[k] > static_cast<long>(n) * n;
      RMatrix g;
      if (dense) g = zc * t;
      const auto gv = [&](int a, int b) {
        return dense ? g(a, b) : zc.row(a).dot(t.col(b));
      };
      for (int j : rows_of_block[k]) {
        if (j < i) continue;
        double s = 0.0;
        for (const SE& e : s_.apsd[j]) {
          if (e.k != static_cast<int>(k)) continue;
          s += e.v * (e.r == e.c ? gv(e.r, e.r) : gv(e.c, e.r) + gv(e.r, e.c));
        }
        mm(i, j) += s;
        if (j != i) mm(j, i) += s;
      }
    }
  }
  return mm;
}

bool Solver::factor(RMatrix& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) {
    llt_.compute(m);
    return true;
  }
  const double scale = std::max(1e-300, m.diagonal().cwiseAbs().maxCoeff());
  double reg = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    mreg_ = m;
    if (reg > 0) mreg_.diagonal().array() += reg;
    llt_.compute(mreg_);
    if (llt_.info() == Eigen::Success) return true;
    reg = reg == 0.0 ? 1e-14 * scale : reg * 100.0;
  }
  return false;
}

Direction Solver::solve_direction(const Iterate& it,
                                  const std::vector<RMatrix>& zinv,
                                  const std::vector<RMatrix>& rc,
                                  const RVector& rcn, const RVector& rp,
                                  const std::vector<RMatrix>& rd,
                                  const RVector& rdn, const RVector& rdf) {
  const size_t kb = s_.dims.size();
  // h = rp − A(Rc − X Rd Z^-1) − Ann(rc − x∘rd/z)
  std::vector<RMatrix> tmp(kb);
  for (size_t k = 0; k < kb; ++k) {
    tmp[k] = sym(rc[k] - it.x[k] * rd[k] * zinv[k]);
  }
  RVector tn = rcn - it.xn.cwiseProduct(rdn).cwiseQuotient(it.zn);
  RVector h = rp - apply_a(tmp, tn, RVector::Zero(s_.f));

  Direction d;
  if (s_.f > 0) {
    const RMatrix mf = llt_.solve(s_.af);
    const RMatrix sf = s_.af.transpose() * mf;
    const RVector mh = llt_.solve(h);
    Eigen::FullPivLU<RMatrix> lu(sf);
    d.du = lu.solve(s_.af.transpose() * mh - rdf);
    d.dy = llt_.solve(h - s_.af * d.du);
  } else {
    d.du = RVector::Zero(0);
    d.dy = llt_.solve(h);
  }
  std::vector<RMatrix> aty;
  RVector atyn, atyf;
  apply_at(d.dy, aty, atyn, atyf);
  d.dz.resize(kb);
  d.dx.resize(kb);
  for (size_t k = 0; k < kb; ++k) {
    d.dz[k] = rd[k] - aty[k];
    d.dx[k] = sym(rc[k] - it.x[k] * d.dz[k] * zinv[k]);
  }
  d.dzn = rdn - atyn;
  d.dxn = rcn - it.xn.cwiseProduct(d.dzn).cwiseQuotient(it.zn);
  return d;
}

double step_psd(const RMatrix& x, const RMatrix& dx) {
  const int n = static_cast<int>(x.rows());
  if (n == 0) return std::numeric_limits<double>::infinity();
  Eigen::LLT<RMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  RMatrix t = llt.matrixL().solve(dx);
  RMatrix s = llt.matrixL().solve(t.transpose());
  s = sym(s);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(s, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double Solver::max_step(const std::vector<RMatrix>& x,
                        const std::vector<RMatrix>& dx, const RVector& xn,
                        const RVector& dxn) const {
  double a = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < x.size(); ++k) a = std::min(a, step_psd(x[k], dx[k]));
  for (int i = 0; i < xn.size(); ++i) {
    if (dxn(i) < 0) a = std::min(a, -xn(i) / dxn(i));
  }
  return a;
}

SDPSolution Solver::finish(const Iterate& it, SolveStatus status, int iters,
                           bool certificate_only) const {
  // Map back to the caller's blocks and units.
  SDPSolution out;
  out.status = status;
  out.iterations = iters;
  const auto& blocks = p_.blocks;
  const double bs = s_.bscale, cs = s_.cscale;
  for (size_t k = 0; k < blocks.size(); ++k) {
    const Block& bl = blocks[k];
    if (bl.kind == BlockKind::psd) {
      const int q = s_.psd_of_block[k];
      out.primal.push_back(it.x[q] * bs);
      out.dual_slack.push_back(it.z[q] * cs);
    } else if (bl.kind == BlockKind::nonneg) {
      out.primal.push_back(it.xn.segment(s_.nn_offset[k], bl.dim) * bs);
      out.dual_slack.push_back(it.zn.segment(s_.nn_offset[k], bl.dim) * cs);
    } else {
      out.primal.push_back(it.u.segment(s_.free_offset[k], bl.dim) * bs);
      out.dual_slack.push_back(RMatrix::Zero(bl.dim, 1));
    }
  }
  const int m0 = static_cast<int>(p_.constraints.size());
  out.dual = RVector::Zero(m0);
  for (size_t a = 0; a < s_.kept.size(); ++a) {
    out.dual(s_.kept[a]) = s_.sign * it.y(a) * cs / s_.row_scale(a);
  }
  if (s_.sign < 0) {
    for (RMatrix& z : out.dual_slack) z = -z;
  }

  // Objectives and residuals in original units.
  double pobj = evaluate_terms(p_.objective, out.primal);
  double dobj = 0.0;
  double bn = 0.0, rp2 = 0.0;
  for (int i = 0; i < m0; ++i) {
    const auto& c = p_.constraints[i];
    double lhs = evaluate_terms(c.terms, out.primal);
    if (s_.slack_of_row[i] >= 0) {
      lhs += it.xn(s_.slack_of_row[i]) * bs;
    }
    rp2 += (c.rhs - lhs) * (c.rhs - lhs);
    bn += c.rhs * c.rhs;
    dobj += out.dual(i) * c.rhs;
  }
  // Dual residual C − Σ y A − Z (with the maximisation sign folded in).
  std::vector<RMatrix> rd(blocks.size());
  for (size_t k = 0; k < blocks.size(); ++k) {
    rd[k] = RMatrix::Zero(out.primal[k].rows(), out.primal[k].cols());
  }
  auto add_terms = [&](const std::vector<Entry>& terms, double w) {
    for (const Entry& e : terms) {
      RMatrix& r = rd[e.block];
      if (blocks[e.block].kind == BlockKind::psd) {
        r(e.row, e.col) += w * e.value;
        if (e.row != e.col) r(e.col, e.row) += w * e.value;
      } else {
        r(e.row, 0) += w * e.value;
      }
    }
  };
  add_terms(p_.objective, s_.sign);
  for (int i = 0; i < m0; ++i) add_terms(p_.constraints[i].terms, -s_.sign * out.dual(i));
  double rd2 = 0.0, cn2 = 0.0;
  for (size_t k = 0; k < blocks.size(); ++k) {
    rd2 += (rd[k] - s_.sign * out.dual_slack[k]).squaredNorm();
  }
  for (const Entry& e : p_.objective) cn2 += e.value * e.value;
  // Slack rows: −y_i − z_slack = 0 in minimisation form.
  for (int i = 0; i < m0; ++i) {
    if (s_.slack_of_row[i] >= 0) {
      const double r = -s_.sign * out.dual(i) - it.zn(s_.slack_of_row[i]) * cs;
      rd2 += r * r;
    }
  }
  out.primal_objective = pobj;
  out.dual_objective = dobj;
  out.gap = pobj - dobj;
  out.primal_infeasibility = std::sqrt(rp2) / (1.0 + std::sqrt(bn));
  out.dual_infeasibility = std::sqrt(rd2) / (1.0 + std::sqrt(cn2));
  (void)certificate_only;
  return out;
}

SDPSolution Solver::run() {
  p_.validate();
  if (!build()) {
    Iterate it;
    for (int d : s_.dims) {
      it.x.push_back(RMatrix::Zero(d, d));
      it.z.push_back(RMatrix::Zero(d, d));
    }
    it.xn = RVector::Zero(s_.p);
    it.zn = RVector::Zero(s_.p);
    it.u = RVector::Zero(s_.f);
    it.y = RVector::Zero(s_.kept.size());
    return finish(it, SolveStatus::infeasible, 0);
  }
  const size_t kb = s_.dims.size();
  const int m = static_cast<int>(s_.b.size());
  int ntot = s_.p;
  for (int d : s_.dims) ntot += d;

  Iterate it;
  const double xi = std::max(10.0, std::sqrt(static_cast<double>(ntot)));
  const double eta = xi;
  for (int d : s_.dims) {
    it.x.push_back(xi * RMatrix::Identity(d, d));
    it.z.push_back(eta * RMatrix::Identity(d, d));
  }
  it.xn = RVector::Constant(s_.p, xi);
  it.zn = RVector::Constant(s_.p, eta);
  it.u = RVector::Zero(s_.f);
  it.y = RVector::Zero(m);

  const double bnorm = s_.b.norm();
  double cnorm2 = s_.cnn.squaredNorm() + s_.cf.squaredNorm();
  for (const RMatrix& c : s_.c) cnorm2 += c.squaredNorm();
  const double cnorm = std::sqrt(cnorm2);

  Iterate best = it;
  double best_merit = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (int iter = 0; iter <= opt_.max_iterations; ++iter) {
    // Residuals.
    const RVector rp = s_.b - apply_a(it.x, it.xn, it.u);
    std::vector<RMatrix> aty;
    RVector atyn, atyf;
    apply_at(it.y, aty, atyn, atyf);
    std::vector<RMatrix> rd(kb);
    double rdn2 = 0.0;
    for (size_t k = 0; k < kb; ++k) {
      rd[k] = s_.c[k] - aty[k] - it.z[k];
      rdn2 += rd[k].squaredNorm();
    }
    const RVector rdn = s_.cnn - atyn - it.zn;
    const RVector rdf = s_.cf - atyf;
    rdn2 += rdn.squaredNorm() + rdf.squaredNorm();

    double xz = it.xn.dot(it.zn);
    for (size_t k = 0; k < kb; ++k) xz += inner(it.x[k], it.z[k]);
    const double mu = ntot > 0 ? xz / ntot : 0.0;
    double pobj = s_.cnn.dot(it.xn) + s_.cf.dot(it.u);
    for (size_t k = 0; k < kb; ++k) pobj += inner(s_.c[k], it.x[k]);
    const double dobj = s_.b.dot(it.y);

    // Convergence measured in original units.
    SDPSolution probe = finish(it, SolveStatus::optimal, iter);
    const double gap_rel =
        std::abs(probe.gap) / (1.0 + std::abs(probe.primal_objective));
    const double merit = std::max(
        {probe.primal_infeasibility, probe.dual_infeasibility, gap_rel});
    if (merit < best_merit) {
      best_merit = merit;
      best = it;
      stall = 0;
    } else {
      ++stall;
    }
    if (probe.primal_infeasibility <= opt_.tol &&
        probe.dual_infeasibility <= opt_.tol && gap_rel <= opt_.tol) {
      return probe;
    }

    // Infeasibility rays.
    const double ynorm = it.y.norm();
    if (dobj > 0 && ynorm > 1e6) {
      double r2 = 0.0;  // ‖A^T y + Z‖ = ‖C − Rd‖
      for (size_t k = 0; k < kb; ++k) r2 += (s_.c[k] - rd[k]).squaredNorm();
      r2 += (s_.cnn - rdn).squaredNorm() + (s_.cf - rdf).squaredNorm();
      if (std::sqrt(r2) / dobj < 1e-8) {
        return finish(it, SolveStatus::infeasible, iter, true);
      }
    }
    double xnorm2 = it.xn.squaredNorm() + it.u.squaredNorm();
    for (size_t k = 0; k < kb; ++k) xnorm2 += it.x[k].squaredNorm();
    if (pobj < 0 && std::sqrt(xnorm2) > 1e6) {
      const double ax = (s_.b - rp).norm();
      if (ax / -pobj < 1e-8) {
        return finish(it, SolveStatus::unbounded, iter, true);
      }
    }
    if (iter == opt_.max_iterations || stall > 30) break;
    (void)bnorm;
    (void)cnorm;

    // Newton system.
    std::vector<RMatrix> zinv(kb);
    bool ok = true;
    for (size_t k = 0; k < kb; ++k) {
      Eigen::LLT<RMatrix> lz(it.z[k]);
      if (lz.info() != Eigen::Success) {
        ok = false;
        break;
      }
      zinv[k] = lz.solve(RMatrix::Identity(s_.dims[k], s_.dims[k]));
      zinv[k] = sym(zinv[k]);
    }
    if (!ok) break;
    RMatrix mm = schur(it.x, zinv, it.xn, it.zn);
    if (!factor(mm)) break;

    // Predictor.
    std::vector<RMatrix> rc(kb);
    for (size_t k = 0; k < kb; ++k) rc[k] = -it.x[k];
    RVector rcn = -it.xn;
    Direction da = solve_direction(it, zinv, rc, rcn, rp, rd, rdn, rdf);
    const double ap_a = std::min(1.0, max_step(it.x, da.dx, it.xn, da.dxn));
    const double ad_a = std::min(1.0, max_step(it.z, da.dz, it.zn, da.dzn));
    double xz_a = (it.xn + ap_a * da.dxn).dot(it.zn + ad_a * da.dzn);
    for (size_t k = 0; k < kb; ++k) {
      xz_a += inner(it.x[k] + ap_a * da.dx[k], it.z[k] + ad_a * da.dz[k]);
    }
    const double mu_a = ntot > 0 ? xz_a / ntot : 0.0;
    double sigma = mu > 0 ? std::pow(std::max(0.0, mu_a) / mu, 3) : 0.0;
    sigma = std::min(1.0, std::max(sigma, 1e-6));

    // Corrector.
    for (size_t k = 0; k < kb; ++k) {
      rc[k] = sigma * mu * zinv[k] - it.x[k] - da.dx[k] * da.dz[k] * zinv[k];
    }
    rcn = (RVector::Constant(s_.p, sigma * mu) - da.dxn.cwiseProduct(da.dzn))
              .cwiseQuotient(it.zn) -
          it.xn;
    Direction dc = solve_direction(it, zinv, rc, rcn, rp, rd, rdn, rdf);
    const double ap = max_step(it.x, dc.dx, it.xn, dc.dxn);
    const double ad = max_step(it.z, dc.dz, it.zn, dc.dzn);
    const double gamma = 0.9 + 0.09 * std::min({1.0, ap, ad});
    const double sp = std::min(1.0, gamma * ap);
    const double sd = std::min(1.0, gamma * ad);

    for (size_t k = 0; k < kb; ++k) {
      it.x[k] = sym(it.x[k] + sp * dc.dx[k]);
      it.z[k] = sym(it.z[k] + sd * dc.dz[k]);
    }
    it.xn += sp * dc.dxn;
    it.u += sp * dc.du;
    it.zn += sd * dc.dzn;
    it.y += sd * dc.dy;
    (void)pobj;
  }
  return finish(best, SolveStatus::max_iterations, opt_.max_iterations);
}

}  // namespace

SDPSolution solve_sdp(const BlockSDP& p, const SolverOptions& opt) {
  if (!(opt.tol > 0)) throw InputError("solve_sdp: tol must be positive");
  Solver s(p, opt);
  return s.run();
}

}  // namespace advbound
