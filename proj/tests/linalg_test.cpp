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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "incompat/error.hpp"

namespace incompat {
namespace {

using namespace std::complex_literals;

CMatrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  return (m + m.adjoint()) / 2.0;
}

TEST(HermitianMatrix, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 1, 1, 0, 1;
  EXPECT_THROW(
      {
        try {
          HermitianMatrix::from_matrix(m);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::kNonHermitian);
          throw;
        }
      },
      Error);
}

TEST(HermitianMatrix, SymmetrizesSmallDeviation) {
  CMatrix m(2, 2);
  m << 1, 0.5 + 1e-12, 0.5, 2;
  const HermitianMatrix h = HermitianMatrix::from_matrix(m);
  EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
  EXPECT_DOUBLE_EQ(h.trace(), 3.0);
}

TEST(Eigh, MatchesGeneralEigenSolver) {
  std::mt19937_64 rng(1);
  for (int d : {1, 2, 3, 5, 8}) {
    const CMatrix m = random_hermitian(d, rng);
    const Spectrum sp = eigh(m);
    // Oracle: non-Hermitian solver, sorted real parts.
    Eigen::ComplexEigenSolver<CMatrix> ces(m);
    std::vector<double> ref;
    for (int i = 0; i < d; ++i) ref.push_back(ces.eigenvalues()(i).real());
    std::sort(ref.begin(), ref.end());
    for (int i = 0; i < d; ++i) EXPECT_NEAR(sp.eigenvalues(i), ref[i], 1e-10);
    const CMatrix back = sp.eigenvectors * sp.eigenvalues.cast<Complex>().asDiagonal() *
                         sp.eigenvectors.adjoint();
    EXPECT_LT((back - m).norm(), 1e-10);
  }
}

TEST(Eigh, PauliSpectra) {
  CMatrix y(2, 2);
  y << 0, -1i, 1i, 0;
  EXPECT_NEAR(min_eigenvalue(HermitianMatrix::from_matrix(y)), -1, 1e-14);
  EXPECT_NEAR(max_eigenvalue(HermitianMatrix::from_matrix(y)), 1, 1e-14);
  EXPECT_NEAR(operator_norm(HermitianMatrix::from_matrix(-2.0 * y)), 2, 1e-14);
}

TEST(Psd, SqrtSquaresBack) {
  std::mt19937_64 rng(2);
  const CMatrix a = random_hermitian(4, rng);
  const HermitianMatrix p = HermitianMatrix::from_matrix(a * a);
  const HermitianMatrix s = psd_sqrt(p);
  EXPECT_LT((s.matrix() * s.matrix() - p.matrix()).norm(), 1e-9);
  EXPECT_TRUE(is_psd(s));
  const HermitianMatrix inv = inverse_sqrt(p);
  EXPECT_LT((inv.matrix() * p.matrix() * inv.matrix() - CMatrix::Identity(4, 4)).norm(), 1e-8);
}

TEST(Psd, PartAndRank) {
  const RVector diag = (RVector(3) << 2, -1, 0).finished();
  const HermitianMatrix m = HermitianMatrix::diagonal(diag);
  EXPECT_FALSE(is_psd(m));
  EXPECT_NEAR(psd_part(m).trace(), 2, 1e-14);
  EXPECT_EQ(numerical_rank(m), 2);
  EXPECT_THROW(inverse_sqrt(m), Error);
}

TEST(Inner, AnticommutatorAndTrace) {
  std::mt19937_64 rng(3);
  const HermitianMatrix a = HermitianMatrix::from_matrix(random_hermitian(3, rng));
  const HermitianMatrix b = HermitianMatrix::from_matrix(random_hermitian(3, rng));
  EXPECT_NEAR(inner(a, b), (a.matrix() * b.matrix()).trace().real(), 1e-12);
  EXPECT_NEAR(anticommutator(a, b).trace(), 2 * inner(a, b), 1e-12);
}

TEST(Unitary, HaarIsUnitary) {
  std::mt19937_64 rng(4);
  for (int d : {2, 3, 6}) EXPECT_TRUE(is_unitary(haar_unitary(d, rng)));
  EXPECT_FALSE(is_unitary(CMatrix::Ones(2, 2)));
  EXPECT_LT((haar_unitary(3, 9) - haar_unitary(3, 9)).norm(), 1e-15);
}

TEST(Unitary, HaarFirstMomentIsFlat) {
  // E|U_00|^2 = 1/d for Haar unitaries.
  std::mt19937_64 rng(5);
  double acc = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) acc += std::norm(haar_unitary(3, rng)(0, 0));
  EXPECT_NEAR(acc / n, 1.0 / 3, 0.02);
}

TEST(Unitary, FourierMatrixEntries) {
  const CMatrix f = fourier_matrix(3);
  const Complex w = std::polar(1.0, 2 * std::numbers::pi / 3);
  EXPECT_LT(std::abs(f(1, 2) - w * w / std::sqrt(3.0)), 1e-15);
  EXPECT_TRUE(is_unitary(f));
}

TEST(PrincipalLog, ExponentiatesBack) {
  std::mt19937_64 rng(6);
  for (int d : {2, 3, 4}) {
    const CMatrix u = haar_unitary(d, rng);
    const HermitianMatrix h = principal_log(u);
    EXPECT_LT((expi(h) - u).norm(), 1e-10);
    const Spectrum sp = eigh(h);
    EXPECT_GT(sp.eigenvalues(0), -std::numbers::pi);
    EXPECT_LE(sp.eigenvalues(d - 1), std::numbers::pi + 1e-12);
  }
}

TEST(PrincipalLog, DiagonalPhases) {
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, 0.3);
  u(1, 1) = std::polar(1.0, -2.5);
  const HermitianMatrix h = principal_log(u);
  EXPECT_NEAR(h(0, 0).real(), 0.3, 1e-14);
  EXPECT_NEAR(h(1, 1).real(), -2.5, 1e-14);
  EXPECT_THROW(principal_log(CMatrix::Ones(2, 2)), Error);
}

TEST(HermitianBasis, OrthonormalAndRoundTrip) {
  const auto basis = hermitian_basis(3);
  ASSERT_EQ(basis.size(), 9u);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      EXPECT_NEAR(inner(basis[i], basis[j]), i == j ? 1.0 : 0.0, 1e-14);
    }
  }
  std::mt19937_64 rng(7);
  const HermitianMatrix m = HermitianMatrix::from_matrix(random_hermitian(3, rng));
  EXPECT_LT((from_hermitian_coordinates(hermitian_coordinates(m), 3) - m).max_abs(), 1e-14);
}

}  // namespace
}  // namespace incompat
