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

#ifndef SYMEXT_LINALG_HPP
#define SYMEXT_LINALG_HPP

// Dense complex matrix kernel: Hermitian arithmetic, eigendecomposition,
// Cholesky with failure-as-value, Kronecker products and Hilbert-Schmidt
// inner products.  Every module above this one works exclusively through
// these entry points; the Eigen backend is an implementation detail.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace symext {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Relative tolerance below which a matrix is accepted as Hermitian
// (max_ij |M_ij - conj(M_ji)| <= kHermTol * max(1, ||M||_F)).
inline constexpr double kHermTol = 1e-12;

// Kronecker product, row-major index convention:
// result[(i*rb + k), (j*cb + l)] = a(i,j) * b(k,l).
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Frobenius norm shorthand.
inline double fnorm(const CMatrix& m) { return m.norm(); }

// Hilbert-Schmidt inner product Tr[a^dagger b]; throws on shape mismatch.
Complex hs_inner(const CMatrix& a, const CMatrix& b);

// Max deviation from Hermitian symmetry, relative to max(1, ||m||_F).
double herm_defect(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = kHermTol);

// Symmetrized copy (m + m^dagger)/2 — applied at module boundaries.
CMatrix hermitize(const CMatrix& m);

struct EighResult {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // unitary; column k pairs with eigenvalues[k]
};

// Hermitian eigendecomposition (tridiagonalization + implicit QR).
// Rejects grossly non-Hermitian input with std::invalid_argument carrying
// the measured symmetry defect.
EighResult eigh(const CMatrix& m);

// Smallest/largest eigenvalue of a Hermitian matrix.
double min_eig(const CMatrix& m);
double max_eig(const CMatrix& m);

// Cholesky factor L with L L^dagger = m + shift*I, or nullopt when
// m + shift*I is not positive definite.  Failure is a value, not a fault:
// callers use it to test cone membership.
std::optional<CMatrix> chol_psd(const CMatrix& m, double shift = 0.0);

// Deterministic orthonormal Hermitian operator basis of n x n matrices,
// lexicographic layout: the n diagonal units E_ii first, then for each pair
// i < j (row-major order) the symmetric element (E_ij + E_ji)/sqrt(2)
// followed by the antisymmetric element i(E_ij - E_ji)/sqrt(2).
std::vector<CMatrix> hermitian_basis(int n);

// Coordinates of a Hermitian matrix in the hermitian_basis ordering.
// For Hermitian x these are real and satisfy <x, y> = svec(x) . svec(y);
// diagonal entries map to themselves, off-diagonal pairs to
// sqrt(2)*Re x_ij and sqrt(2)*Im x_ij.
RVector svec(const CMatrix& x);
CMatrix unsvec(const RVector& v, int n);

// svec length for an n x n Hermitian matrix (= n^2).
inline int svec_dim(int n) { return n * n; }

}  // namespace symext

#endif  // SYMEXT_LINALG_HPP
