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

#include "incompat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace incompat {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonHermitian: return "NonHermitian";
    case ErrorCode::kNotUnitary: return "NotUnitary";
    case ErrorCode::kBranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kNotPrime: return "NotPrime";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonUnital: return "NonUnital";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroTraceElement: return "ZeroTraceElement";
    case ErrorCode::kNotRankOne: return "NotRankOne";
    case ErrorCode::kNotBlockStructured: return "NotBlockStructured";
    case ErrorCode::kPreconditionFailed: return "PreconditionFailed";
    case ErrorCode::kNotRankOneQubit: return "NotRankOneQubit";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

HermitianMatrix::HermitianMatrix(int dim) : m_(CMatrix::Zero(dim, dim)) {
  if (dim < 0) throw Error(ErrorCode::kDomainError, "negative dimension");
}

HermitianMatrix HermitianMatrix::from_matrix(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "matrix is not square");
  }
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (m.size() > 0 && dev > tol) {
    std::ostringstream os;
    os << "deviation " << dev << " exceeds " << tol;
    throw Error(ErrorCode::kNonHermitian, os.str());
  }
  return hermitian_part(m);
}

HermitianMatrix HermitianMatrix::from_real(const RMatrix& m, double tol) {
  return from_matrix(m.cast<Complex>(), tol);
}

HermitianMatrix HermitianMatrix::hermitian_part(const CMatrix& m) {
  HermitianMatrix h;
  h.m_ = 0.5 * (m + m.adjoint());
  for (int i = 0; i < h.m_.rows(); ++i) h.m_(i, i) = h.m_(i, i).real();
  return h;
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  HermitianMatrix h(dim);
  h.m_.setIdentity();
  return h;
}

HermitianMatrix HermitianMatrix::projector(const CVector& v) {
  return hermitian_part(v * v.adjoint());
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& diag) {
  HermitianMatrix h(static_cast<int>(diag.size()));
  for (int i = 0; i < diag.size(); ++i) h.m_(i, i) = diag(i);
  return h;
}

double HermitianMatrix::max_abs() const {
  return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  if (other.dim() != dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix sum");
  }
  m_ += other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
  if (other.dim() != dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix difference");
  }
  m_ -= other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

Spectrum eigh(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix());
  return {es.eigenvalues(), es.eigenvectors()};
}

Spectrum eigh(const CMatrix& m) { return eigh(HermitianMatrix::from_matrix(m)); }

double min_eigenvalue(const HermitianMatrix& m) {
  if (m.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const HermitianMatrix& m) {
  if (m.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.dim() - 1);
}

double operator_norm(const HermitianMatrix& m) {
  if (m.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_psd(const HermitianMatrix& m, double tol) {
  if (m.dim() == 0) return true;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  return es.eigenvalues()(0) >= -tol * (1.0 + norm);
}

double inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kDimensionMismatch, "inner");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
}

HermitianMatrix anticommutator(const HermitianMatrix& a, const HermitianMatrix& b) {
  const CMatrix ab = a.matrix() * b.matrix();
  return HermitianMatrix::hermitian_part(ab + ab.adjoint());
}

HermitianMatrix conjugate(const HermitianMatrix& m, const CMatrix& u) {
  if (u.cols() != m.dim()) throw Error(ErrorCode::kDimensionMismatch, "conjugate");
  return HermitianMatrix::hermitian_part(u * m.matrix() * u.adjoint());
}

namespace {

template <typename F>
HermitianMatrix spectral_apply(const HermitianMatrix& m, F f) {
  const Spectrum s = eigh(m);
  RVector v = s.eigenvalues.unaryExpr(f);
  return HermitianMatrix::hermitian_part(s.eigenvectors * v.asDiagonal() *
                                         s.eigenvectors.adjoint());
}

}  // namespace

HermitianMatrix psd_sqrt(const HermitianMatrix& m) {
  return spectral_apply(m, [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

HermitianMatrix psd_part(const HermitianMatrix& m) {
  return spectral_apply(m, [](double x) { return x > 0 ? x : 0.0; });
}

HermitianMatrix inverse_sqrt(const HermitianMatrix& m) {
  return spectral_apply(m, [](double x) {
    if (x <= 0) throw Error(ErrorCode::kDomainError, "inverse_sqrt of singular matrix");
    return 1.0 / std::sqrt(x);
  });
}

int numerical_rank(const HermitianMatrix& m, double rel_tol) {
  if (m.dim() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < m.dim(); ++i) {
    if (std::abs(es.eigenvalues()(i)) > rel_tol * top) ++r;
  }
  return r;
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

HermitianMatrix principal_log(const CMatrix& u) {
  if (!is_unitary(u, 1e-10)) {
    throw Error(ErrorCode::kNotUnitary, "principal_log needs a unitary input");
  }
  // A unitary is normal, so its complex Schur form is diagonal up to rounding.
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& t = schur.matrixT();
  const CMatrix& q = schur.matrixU();
  const int d = static_cast<int>(u.rows());
  RVector phases(d);
  for (int i = 0; i < d; ++i) {
    const double phi = std::arg(t(i, i));
    if (phi < -std::numbers::pi + 1e-12) {
      throw Error(ErrorCode::kBranchAmbiguity, "eigenphase at -pi");
    }
    phases(i) = phi;
  }
  return HermitianMatrix::hermitian_part(q * phases.cast<Complex>().asDiagonal() *
                                         q.adjoint());
}

CMatrix expi(const HermitianMatrix& h, double t) {
  const Spectrum s = eigh(h);
  CVector phase(h.dim());
  for (int i = 0; i < h.dim(); ++i) {
    phase(i) = std::polar(1.0, t * s.eigenvalues(i));
  }
  return s.eigenvectors * phase.asDiagonal() * s.eigenvectors.adjoint();
}

CMatrix haar_unitary(int d, std::mt19937_64& rng) {
  if (d < 1) throw Error(ErrorCode::kDomainError, "haar_unitary needs d >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const double mag = std::abs(r(i, i));
    const Complex ph = mag > 0 ? r(i, i) / mag : Complex(1.0, 0.0);
    q.col(i) *= ph;
  }
  return q;
}

CMatrix haar_unitary(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_unitary(d, rng);
}

CMatrix fourier_matrix(int d) {
  CMatrix f(d, d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const double angle = 2.0 * std::numbers::pi * ((j * k) % d) / d;
      f(j, k) = std::polar(s, angle);
    }
  }
  return f;
}

std::vector<HermitianMatrix> hermitian_basis(int d) {
  std::vector<HermitianMatrix> basis;
  basis.reserve(static_cast<size_t>(d) * d);
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    CMatrix e = CMatrix::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(HermitianMatrix::hermitian_part(e));
    for (int j = i + 1; j < d; ++j) {
      CMatrix s = CMatrix::Zero(d, d);
      s(i, j) = r;
      s(j, i) = r;
      basis.push_back(HermitianMatrix::hermitian_part(s));
      CMatrix a = CMatrix::Zero(d, d);
      a(i, j) = Complex(0.0, -r);
      a(j, i) = Complex(0.0, r);
      basis.push_back(HermitianMatrix::hermitian_part(a));
    }
  }
  return basis;
}

RVector hermitian_coordinates(const HermitianMatrix& m) {
  const int d = m.dim();
  RVector c(d * d);
  const double s = std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < d; ++i) {
    c(k++) = m(i, i).real();
    for (int j = i + 1; j < d; ++j) {
      c(k++) = s * m(i, j).real();
      c(k++) = -s * m(i, j).imag();
    }
  }
  return c;
}

HermitianMatrix from_hermitian_coordinates(const RVector& c, int d) {
  if (c.size() != d * d) throw Error(ErrorCode::kDimensionMismatch, "coordinates");
  CMatrix m = CMatrix::Zero(d, d);
  const double r = 1.0 / std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < d; ++i) {
    m(i, i) = c(k++);
    for (int j = i + 1; j < d; ++j) {
      const double re = r * c(k++);
      const double im = -r * c(k++);
      m(i, j) = Complex(re, im);
      m(j, i) = Complex(re, -im);
    }
  }
  return HermitianMatrix::hermitian_part(m);
}

}  // namespace incompat
