// Copyright 2026 The symext Authors
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

#include "symext/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace symext {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols();
  const Eigen::Index rb = b.rows(), cb = b.cols();
  CMatrix out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j)
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << "hs_inner: shape mismatch (" << a.rows() << "x" << a.cols()
        << " vs " << b.rows() << "x" << b.cols() << ")";
    throw std::invalid_argument(msg.str());
  }
  // Tr[a^dagger b] = sum_ij conj(a_ij) b_ij.
  return (a.conjugate().cwiseProduct(b)).sum();
}

double herm_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  return dev / std::max(1.0, m.norm());
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && herm_defect(m) <= tol;
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

EighResult eigh(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("eigh: matrix not square");
  }
  const double defect = herm_defect(m);
  if (defect > kHermTol) {
    std::ostringstream msg;
    msg << "eigh: input not Hermitian (symmetry defect " << defect
        << " exceeds " << kHermTol << ")";
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigendecomposition did not converge");
  }
  return EighResult{solver.eigenvalues(), solver.eigenvectors()};
}

double min_eig(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m),
                                                Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double max_eig(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m),
                                                Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

std::optional<CMatrix> chol_psd(const CMatrix& m, double shift) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("chol_psd: matrix not square");
  }
  CMatrix shifted = hermitize(m);
  if (shift != 0.0) {
    shifted += shift * CMatrix::Identity(m.rows(), m.cols());
  }
  Eigen::LLT<CMatrix> llt(shifted);
  if (llt.info() != Eigen::Success) return std::nullopt;
  return CMatrix(llt.matrixL());
}

std::vector<CMatrix> hermitian_basis(int n) {
  if (n < 1) throw std::invalid_argument("hermitian_basis: n must be >= 1");
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    CMatrix e = CMatrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      CMatrix sym = CMatrix::Zero(n, n);
      sym(i, j) = inv_sqrt2;
      sym(j, i) = inv_sqrt2;
      basis.push_back(std::move(sym));
      CMatrix asym = CMatrix::Zero(n, n);
      asym(i, j) = Complex(0.0, inv_sqrt2);
      asym(j, i) = Complex(0.0, -inv_sqrt2);
      basis.push_back(std::move(asym));
    }
  }
  return basis;
}

RVector svec(const CMatrix& x) {
  const int n = static_cast<int>(x.rows());
  if (x.cols() != n) throw std::invalid_argument("svec: matrix not square");
  RVector v(svec_dim(n));
  int k = 0;
  for (int i = 0; i < n; ++i) v(k++) = x(i, i).real();
  const double sqrt2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      v(k++) = sqrt2 * x(i, j).real();
      v(k++) = sqrt2 * x(i, j).imag();
    }
  }
  return v;
}

CMatrix unsvec(const RVector& v, int n) {
  if (v.size() != svec_dim(n)) {
    throw std::invalid_argument("unsvec: length does not match dimension");
  }
  CMatrix x = CMatrix::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) x(i, i) = v(k++);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double re = v(k++) * inv_sqrt2;
      const double im = v(k++) * inv_sqrt2;
      x(i, j) = Complex(re, im);
      x(j, i) = Complex(re, -im);
    }
  }
  return x;
}

}  // namespace symext
