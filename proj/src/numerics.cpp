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

#include "advbound/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace advbound {

void require_finite(const CMatrix& m, const std::string& what) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cd z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InputError(what + ": non-finite entry");
    }
  }
}

void require_same_shape(const CMatrix& a, const CMatrix& b,
                        const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs "
       << b.rows() << "x" << b.cols();
    throw InputError(os.str());
  }
}

SVDResult svd(const CMatrix& m) {
  require_finite(m, "svd");
  SVDResult out;
  if (m.size() == 0) {
    out.singular_values = RVector(0);
    out.left = CMatrix(m.rows(), 0);
    out.right = CMatrix(m.cols(), 0);
    return out;
  }
  Eigen::JacobiSVD<CMatrix> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.singular_values = s.singularValues();
  out.left = s.matrixU();
  out.right = s.matrixV();
  return out;
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const RVector s = svd(m).singular_values;
  return s.size() ? s(0) : 0.0;
}

double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return svd(m).singular_values.sum();
}

double unitarity_deviation(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const CMatrix d = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
  return spectral_norm(d);
}

double hermiticity_deviation(const CMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return spectral_norm(h - h.adjoint());
}

Spectrum eig_unitary(const CMatrix& u, double tol) {
  require_finite(u, "eig_unitary");
  if (u.rows() != u.cols()) throw InputError("eig_unitary: matrix not square");
  const double dev = unitarity_deviation(u);
  if (dev > tol) {
    std::ostringstream os;
    os << "eig_unitary: input not unitary, deviation " << dev;
    throw InputError(os.str());
  }
  const int n = static_cast<int>(u.rows());
  Spectrum out;
  if (n == 0) return out;
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& t = schur.matrixT();
  const CMatrix& q = schur.matrixU();
  std::vector<int> order(n);
  std::vector<double> phase(n);
  for (int i = 0; i < n; ++i) {
    double th = std::arg(t(i, i));
    if (th <= -M_PI + 1e-12) th += 2 * M_PI;  // ties resolved to +pi
    phase[i] = th;
  }
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return phase[a] < phase[b]; });
  out.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    const int i = order[k];
    out.eigenvalues.push_back(t(i, i));
    out.phases.push_back(phase[i]);
    out.eigenvectors.col(k) = q.col(i);
  }
  return out;
}

Spectrum eig_hermitian(const CMatrix& h, double tol) {
  require_finite(h, "eig_hermitian");
  if (h.rows() != h.cols()) throw InputError("eig_hermitian: matrix not square");
  const double dev = hermiticity_deviation(h);
  if (dev > tol * std::max(1.0, spectral_norm(h))) {
    std::ostringstream os;
    os << "eig_hermitian: input not Hermitian, deviation " << dev;
    throw InputError(os.str());
  }
  Spectrum out;
  if (h.rows() == 0) return out;
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    out.eigenvalues.emplace_back(es.eigenvalues()(i), 0.0);
  }
  out.eigenvectors = es.eigenvectors();
  return out;
}

double min_eigenvalue(const CMatrix& h) {
  if (h.rows() == 0) return 0.0;
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const CMatrix& h) {
  if (h.rows() == 0) return 0.0;
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

CMatrix direct_sum(const std::vector<CMatrix>& parts) {
  Eigen::Index r = 0, c = 0;
  for (const auto& p : parts) {
    r += p.rows();
    c += p.cols();
  }
  CMatrix out = CMatrix::Zero(r, c);
  r = c = 0;
  for (const auto& p : parts) {
    out.block(r, c, p.rows(), p.cols()) = p;
    r += p.rows();
    c += p.cols();
  }
  return out;
}

CMatrix hadamard(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "hadamard");
  return a.cwiseProduct(b);
}

CVector stack(const std::vector<CVector>& parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.size();
  CVector out(n);
  n = 0;
  for (const auto& p : parts) {
    out.segment(n, p.size()) = p;
    n += p.size();
  }
  return out;
}

CMatrix orthonormal_basis(const CMatrix& cols, double cutoff) {
  if (cols.cols() == 0 || cols.rows() == 0) return CMatrix(cols.rows(), 0);
  const SVDResult s = svd(cols);
  int r = 0;
  while (r < s.singular_values.size() && s.singular_values(r) > cutoff) ++r;
  return s.left.leftCols(r);
}

CMatrix range_projector(const CMatrix& cols, double cutoff) {
  const CMatrix q = orthonormal_basis(cols, cutoff);
  return q * q.adjoint();
}

CMatrix reflection(const CMatrix& projector) {
  return 2.0 * projector - CMatrix::Identity(projector.rows(), projector.cols());
}

CMatrix psd_part(const CMatrix& h) {
  if (h.rows() == 0) return h;
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  const RVector ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix gram_factor(const CMatrix& h, double cutoff) {
  const int n = static_cast<int>(h.rows());
  if (n == 0) return CMatrix(0, 0);
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  std::vector<int> keep;
  for (int i = n - 1; i >= 0; --i) {
    if (es.eigenvalues()(i) > cutoff) keep.push_back(i);
  }
  CMatrix g(static_cast<Eigen::Index>(keep.size()), n);
  for (size_t k = 0; k < keep.size(); ++k) {
    const int i = keep[k];
    g.row(static_cast<Eigen::Index>(k)) =
        std::sqrt(es.eigenvalues()(i)) * es.eigenvectors().col(i).adjoint();
  }
  return g;
}

CVector basis_vector(int n, int i) {
  CVector v = CVector::Zero(n);
  v(i) = 1.0;
  return v;
}

CMatrix identity(int n) { return CMatrix::Identity(n, n); }

json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(complex_to_json(m(i, j)));
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

namespace {

cd complex_from_json(const json& e, const std::string& where) {
  if (e.is_number()) return cd(e.get<double>(), 0.0);
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
      !e[1].is_number()) {
    throw InputError(where + ": complex entries must be [re, im]");
  }
  const cd z(e[0].get<double>(), e[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InputError(where + ": non-finite entry");
  }
  return z;
}

}  // namespace

CMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw InputError(where + ": expected {\"rows\", \"cols\", \"data\"}");
  }
  const auto rows = j.at("rows").get<long>();
  const auto cols = j.at("cols").get<long>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 || !data.is_array() ||
      static_cast<long>(data.size()) != rows * cols) {
    throw InputError(where + ": entry count does not match rows*cols");
  }
  CMatrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long k = 0; k < cols; ++k) {
      m(i, k) = complex_from_json(data[i * cols + k], where);
    }
  }
  return m;
}

CVector vector_from_json(const json& j, const std::string& where) {
  if (j.is_object()) {
    const CMatrix m = matrix_from_json(j, where);
    if (m.cols() != 1) throw InputError(where + ": expected a column vector");
    return m.col(0);
  }
  if (!j.is_array()) throw InputError(where + ": expected a vector");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where);
  }
  return v;
}

cd random_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return cd(re, im);
}

CMatrix random_matrix(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = random_complex(rng);
  }
  return m;
}

CVector random_state(int n, Rng& rng) {
  CVector v = random_matrix(n, 1, rng).col(0);
  return v / v.norm();
}

CMatrix random_unitary(int n, Rng& rng) {
  const CMatrix g = random_matrix(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

CMatrix random_projector(int n, int k, Rng& rng) {
  if (k <= 0) return CMatrix::Zero(n, n);
  const CMatrix u = random_unitary(n, rng);
  const CMatrix b = u.leftCols(k);
  return b * b.adjoint();
}

double random_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

int random_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

}  // namespace advbound
