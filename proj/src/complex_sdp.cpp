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

#include <cmath>

#include "advbound/sdp.hpp"

namespace advbound {

int ComplexSDP::add_block(BlockKind kind, int dim) {
  blocks.push_back({kind, dim});
  return static_cast<int>(blocks.size()) - 1;
}

int ComplexSDP::add_constraint(std::vector<HTerm> terms, Relation rel,
                               double rhs) {
  constraints.push_back({std::move(terms), rel, rhs});
  return static_cast<int>(constraints.size()) - 1;
}

void add_real_part(std::vector<HTerm>& terms, int block, int r, int c, cd k) {
  if (r == c) {
    terms.push_back({block, r, r, cd(k.real(), 0.0)});
  } else {
    terms.push_back({block, r, c, std::conj(k) / 2.0});
  }
}

void add_imag_part(std::vector<HTerm>& terms, int block, int r, int c, cd k) {
  if (r == c) {
    terms.push_back({block, r, r, cd(k.imag(), 0.0)});
  } else {
    terms.push_back({block, r, c, cd(0.0, 1.0) * std::conj(k) / 2.0});
  }
}

RMatrix embed_hermitian(const CMatrix& h, double tol) {
  require_finite(h, "embed_hermitian");
  if (h.rows() != h.cols()) throw InputError("embed_hermitian: not square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
    throw InputError("embed_hermitian: input is not Hermitian");
  }
  const Eigen::Index n = h.rows();
  RMatrix out(2 * n, 2 * n);
  const RMatrix re = h.real();
  const RMatrix im = h.imag();
  out.topLeftCorner(n, n) = re;
  out.topRightCorner(n, n) = -im;
  out.bottomLeftCorner(n, n) = im;
  out.bottomRightCorner(n, n) = re;
  return out;
}

CMatrix extract_hermitian(const RMatrix& y) {
  const Eigen::Index n = y.rows() / 2;
  CMatrix out(n, n);
  const RMatrix re = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  const RMatrix im = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = cd(re(i, j), im(i, j));
  }
  return 0.5 * (out + out.adjoint());
}

namespace {

void embed_terms(const ComplexSDP& p, const std::vector<HTerm>& in,
                 std::vector<Entry>& out, const std::string& where) {
  for (const HTerm& t : in) {
    if (t.block < 0 || t.block >= static_cast<int>(p.blocks.size())) {
      throw InputError(where + ": block index out of range");
    }
    const Block& b = p.blocks[t.block];
    if (!std::isfinite(t.value.real()) || !std::isfinite(t.value.imag())) {
      throw InputError(where + ": non-finite coefficient");
    }
    if (b.kind != BlockKind::psd) {
      if (std::abs(t.value.imag()) > 1e-12) {
        throw InputError(where + ": complex coefficient on a scalar block");
      }
      out.push_back({t.block, t.row, t.col, t.value.real()});
      continue;
    }
    const int n = b.dim;
    if (t.row < 0 || t.col < 0 || t.row >= n || t.col >= n) {
      throw InputError(where + ": entry out of range");
    }
    const double re = t.value.real(), im = t.value.imag();
    if (t.row == t.col) {
      if (std::abs(im) > 1e-10 * std::max(1.0, std::abs(re))) {
        throw InputError(where + ": non-real diagonal coefficient (not Hermitian)");
      }
      out.push_back({t.block, t.row, t.row, 0.5 * re});
      out.push_back({t.block, n + t.row, n + t.row, 0.5 * re});
      continue;
    }
    const int r = t.row, c = t.col;
    if (re != 0.0) {
      out.push_back({t.block, r, c, 0.5 * re});
      out.push_back({t.block, n + r, n + c, 0.5 * re});
    }
    if (im != 0.0) {
      out.push_back({t.block, n + r, c, 0.5 * im});
      out.push_back({t.block, n + c, r, -0.5 * im});
    }
  }
}

}  // namespace

BlockSDP embed_complex(const ComplexSDP& p) {
  BlockSDP out;
  out.sense = p.sense;
  for (const Block& b : p.blocks) {
    out.add_block(b.kind, b.kind == BlockKind::psd ? 2 * b.dim : b.dim);
  }
  embed_terms(p, p.objective, out.objective, "objective");
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    LinearConstraint lc;
    lc.relation = p.constraints[i].relation;
    lc.rhs = p.constraints[i].rhs;
    embed_terms(p, p.constraints[i].terms, lc.terms,
                "constraint " + std::to_string(i));
    out.constraints.push_back(std::move(lc));
  }
  return out;
}

std::vector<CMatrix> complex_primal(const ComplexSDP& p, const SDPSolution& s) {
  std::vector<CMatrix> out;
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    if (p.blocks[k].kind == BlockKind::psd) {
      out.push_back(extract_hermitian(s.primal[k]));
    } else {
      out.push_back(s.primal[k].cast<cd>());
    }
  }
  return out;
}

std::vector<CMatrix> complex_dual_slack(const ComplexSDP& p,
                                        const SDPSolution& s) {
  std::vector<CMatrix> out;
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    if (p.blocks[k].kind == BlockKind::psd) {
      // Real slack equals emb(Z)/2.
      out.push_back(2.0 * extract_hermitian(s.dual_slack[k]));
    } else {
      out.push_back(s.dual_slack[k].cast<cd>());
    }
  }
  return out;
}

}  // namespace advbound
