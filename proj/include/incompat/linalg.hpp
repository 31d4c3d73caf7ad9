// Copyright 2026 The incompat Authors.
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

#ifndef INCOMPAT_LINALG_HPP_
#define INCOMPAT_LINALG_HPP_

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "incompat/error.hpp"

namespace incompat {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Dense complex Hermitian matrix. The stored matrix is exactly Hermitian:
// construction from a general matrix checks the deviation and then
// replaces the input by its Hermitian part.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(int dim);

  // Throws kNonHermitian if max |m - m^dagger| exceeds tol.
  static HermitianMatrix from_matrix(const CMatrix& m, double tol = 1e-9);
  static HermitianMatrix from_real(const RMatrix& m, double tol = 1e-9);
  // Hermitian part (m + m^dagger)/2 without any check.
  static HermitianMatrix hermitian_part(const CMatrix& m);
  static HermitianMatrix identity(int dim);
  static HermitianMatrix zero(int dim) { return HermitianMatrix(dim); }
  // |v><v|
  static HermitianMatrix projector(const CVector& v);
  static HermitianMatrix diagonal(const RVector& diag);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }
  double max_abs() const;

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) {
    a += b;
    return a;
  }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) {
    a -= b;
    return a;
  }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) {
    a *= s;
    return a;
  }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) {
    a *= s;
    return a;
  }
  friend HermitianMatrix operator-(HermitianMatrix a) {
    a *= -1.0;
    return a;
  }

 private:
  CMatrix m_;
};

struct Spectrum {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // columns, unitary
};

// Eigendecomposition of a Hermitian matrix (tridiagonal reduction followed
// by implicit QR, via Eigen).
Spectrum eigh(const HermitianMatrix& m);
// Same for a raw matrix; throws kNonHermitian beyond 1e-9.
Spectrum eigh(const CMatrix& m);

double min_eigenvalue(const HermitianMatrix& m);
double max_eigenvalue(const HermitianMatrix& m);
// Spectral norm.
double operator_norm(const HermitianMatrix& m);
// min eigenvalue >= -tol * (1 + ||m||).
bool is_psd(const HermitianMatrix& m, double tol = 1e-10);

// Re tr(AB); for Hermitian arguments the trace is real.
double inner(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix anticommutator(const HermitianMatrix& a, const HermitianMatrix& b);
// u m u^dagger.
HermitianMatrix conjugate(const HermitianMatrix& m, const CMatrix& u);
// Positive square root (negative eigenvalues clipped to 0).
HermitianMatrix psd_sqrt(const HermitianMatrix& m);
// Part of m on its non-negative spectrum.
HermitianMatrix psd_part(const HermitianMatrix& m);
// m^(-1/2); kDomainError unless m is positive definite.
HermitianMatrix inverse_sqrt(const HermitianMatrix& m);
int numerical_rank(const HermitianMatrix& m, double rel_tol = 1e-9);

bool is_unitary(const CMatrix& u, double tol = 1e-10);
// Hermitian H with u = exp(iH) and spectrum in (-pi, pi]. Throws
// kNotUnitary, and kBranchAmbiguity if an eigenphase is within 1e-12 of -pi.
HermitianMatrix principal_log(const CMatrix& u);
// exp(i t H).
CMatrix expi(const HermitianMatrix& h, double t = 1.0);

// Haar-distributed unitary (Ginibre matrix, QR, phase-corrected R).
CMatrix haar_unitary(int d, std::mt19937_64& rng);
CMatrix haar_unitary(int d, std::uint64_t seed);
// d x d Fourier matrix F_{jk} = omega^{jk}/sqrt(d).
CMatrix fourier_matrix(int d);

// Orthonormal basis of the real vector space of d x d Hermitian matrices
// with respect to Re tr(AB): E_ii, (E_ij + E_ji)/sqrt2, i(E_ij - E_ji)/sqrt2
// for i < j, in that order per (i, j).
std::vector<HermitianMatrix> hermitian_basis(int d);
// Coordinates of m in hermitian_basis(d); length d*d.
RVector hermitian_coordinates(const HermitianMatrix& m);
HermitianMatrix from_hermitian_coordinates(const RVector& c, int d);

}  // namespace incompat

#endif  // INCOMPAT_LINALG_HPP_
