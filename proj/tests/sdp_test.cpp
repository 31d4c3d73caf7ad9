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

#include "incompat/sdp.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

namespace incompat::sdp {
namespace {

CMatrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  return (m + m.adjoint()) / 2.0;
}

// Eigenvalues through Eigen's general complex solver, independent of eigh.
std::vector<double> oracle_spectrum(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> ces(m);
  std::vector<double> v;
  for (int i = 0; i < m.rows(); ++i) v.push_back(ces.eigenvalues()(i).real());
  std::sort(v.begin(), v.end());
  return v;
}

TEST(Sdp, LinearProgram) {
  // max x + y  s.t.  x + 2y <= 4,  3x + y <= 6,  x, y >= 0  ->  (1.6, 1.2)
  ConicProgram p(Sense::kMaximize);
  const VarId x = p.add_variable("x", Cone::kNonnegScalar);
  const VarId y = p.add_variable("y", Cone::kNonnegScalar);
  p.add_constraint("c1", LinearExpr().add(x).add(y, 2.0), Relation::kLessEqual, 4.0);
  p.add_constraint("c2", LinearExpr().add(x, 3.0).add(y), Relation::kLessEqual, 6.0);
  p.set_objective(LinearExpr().add(x).add(y));
  const ConicSolution s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::kOptimal) << s.message;
  EXPECT_NEAR(s.primal_objective, 2.8, 1e-7);
  EXPECT_NEAR(s.dual_objective, 2.8, 1e-7);
  EXPECT_NEAR(s.primal.scalar(x), 1.6, 1e-6);
  EXPECT_NEAR(s.primal.scalar(y), 1.2, 1e-6);
  EXPECT_TRUE(check_feasible(p, s.primal, 1e-7).feasible);
}

TEST(Sdp, LargestEigenvalueAsMinimization) {
  std::mt19937_64 rng(21);
  for (int d : {2, 3, 5}) {
    const CMatrix a = random_hermitian(d, rng);
    ConicProgram p(Sense::kMinimize);
    const VarId t = p.add_variable("t", Cone::kFreeScalar);
    p.add_constraint("tI >= A", LinearExpr(d).add(t, HermitianMatrix::identity(d)),
                     Relation::kGreaterEqual, HermitianMatrix::from_matrix(a));
    p.set_objective(LinearExpr().add(t));
    const ConicSolution s = solve(p);
    ASSERT_EQ(s.status, SolveStatus::kOptimal) << s.message;
    EXPECT_NEAR(s.primal_objective, oracle_spectrum(a).back(), 1e-7);
  }
}

TEST(Sdp, LargestEigenvalueOverDensityMatrices) {
  std::mt19937_64 rng(22);
  const CMatrix c = random_hermitian(4, rng);
  ConicProgram p(Sense::kMaximize);
  const VarId rho = p.add_variable("rho", Cone::kHermitianPsd, 4);
  p.add_constraint("trace", LinearExpr().add(rho, HermitianMatrix::identity(4)), Relation::kEqual,
                   1.0);
  p.set_objective(LinearExpr().add(rho, HermitianMatrix::from_matrix(c)));
  const ConicSolution s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::kOptimal) << s.message;
  EXPECT_NEAR(s.primal_objective, oracle_spectrum(c).back(), 1e-7);
  EXPECT_NEAR(s.primal.matrix(rho).trace(), 1.0, 1e-8);
}

TEST(Sdp, FreeMatrixVariable) {
  // min tr X  s.t.  X >= A,  X >= 0  ->  sum of the positive eigenvalues.
  std::mt19937_64 rng(23);
  const CMatrix a = random_hermitian(3, rng);
  ConicProgram p(Sense::kMinimize);
  const VarId x = p.add_variable("X", Cone::kHermitianFree, 3);
  p.add_constraint("X >= A", LinearExpr(3).add(x), Relation::kGreaterEqual,
                   HermitianMatrix::from_matrix(a));
  p.add_constraint("X >= 0", LinearExpr(3).add(x), Relation::kGreaterEqual,
                   HermitianMatrix::zero(3));
  p.set_objective(LinearExpr().add(x, HermitianMatrix::identity(3)));
  const ConicSolution s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::kOptimal) << s.message;
  double want = 0;
  for (double v : oracle_spectrum(a)) want += std::max(v, 0.0);
  EXPECT_NEAR(s.primal_objective, want, 1e-7);
}

TEST(Sdp, ObjectiveConstant) {
  ConicProgram p(Sense::kMaximize);
  const VarId x = p.add_variable("x", Cone::kNonnegScalar);
  p.add_constraint("cap", LinearExpr().add(x), Relation::kLessEqual, 2.0);
  p.set_objective(LinearExpr().add(x, -1.0), 5.0);
  const ConicSolution s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.primal_objective, 5.0, 1e-7);
}

TEST(Sdp, InfeasibleIsNotOptimal) {
  ConicProgram p(Sense::kMaximize);
  const VarId x = p.add_variable("x", Cone::kNonnegScalar);
  p.add_constraint("low", LinearExpr().add(x), Relation::kGreaterEqual, 2.0);
  p.add_constraint("high", LinearExpr().add(x), Relation::kLessEqual, 1.0);
  p.set_objective(LinearExpr().add(x));
  EXPECT_NE(solve(p).status, SolveStatus::kOptimal);
}

TEST(Sdp, DeterministicIterates) {
  std::mt19937_64 rng(24);
  const CMatrix c = random_hermitian(3, rng);
  ConicProgram p(Sense::kMaximize);
  const VarId rho = p.add_variable("rho", Cone::kHermitianPsd, 3);
  p.add_constraint("trace", LinearExpr().add(rho, HermitianMatrix::identity(3)), Relation::kEqual,
                   1.0);
  p.set_objective(LinearExpr().add(rho, HermitianMatrix::from_matrix(c)));
  const ConicSolution a = solve(p), b = solve(p);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.primal_objective, b.primal_objective);
  EXPECT_EQ((a.primal.matrix(rho) - b.primal.matrix(rho)).max_abs(), 0.0);
}

TEST(Sdp, RealEmbeddingKeepsOptimum) {
  std::mt19937_64 rng(25);
  const CMatrix c = random_hermitian(3, rng);
  ConicProgram p(Sense::kMaximize);
  const VarId rho = p.add_variable("rho", Cone::kHermitianPsd, 3);
  p.add_constraint("trace", LinearExpr().add(rho, HermitianMatrix::identity(3)), Relation::kEqual,
                   1.0);
  p.set_objective(LinearExpr().add(rho, HermitianMatrix::from_matrix(c)));
  const StandardForm sf = to_standard_form(p);
  const StandardSolution direct = solve_standard(sf);
  const StandardSolution real = solve_standard(real_embedding(sf));
  ASSERT_EQ(direct.status, SolveStatus::kOptimal);
  ASSERT_EQ(real.status, SolveStatus::kOptimal);
  EXPECT_NEAR(direct.primal_objective, real.primal_objective, 1e-7);
  // Minimization form of a maximization.
  EXPECT_NEAR(direct.primal_objective, -oracle_spectrum(c).back(), 1e-7);
}

TEST(Sdp, FeasibilityReportAndDump) {
  ConicProgram p(Sense::kMaximize);
  const VarId x = p.add_variable("x", Cone::kNonnegScalar);
  const VarId m = p.add_variable("M", Cone::kHermitianPsd, 2);
  p.add_constraint("sum", LinearExpr().add(x).add(m, HermitianMatrix::identity(2)),
                   Relation::kEqual, 1.0);
  p.set_objective(LinearExpr().add(x));
  Assignment bad{{-1.0, HermitianMatrix::identity(2)}};
  const FeasibilityReport r = check_feasible(p, bad, 1e-9);
  EXPECT_FALSE(r.feasible);
  EXPECT_NEAR(r.cone_residuals[0], 1.0, 1e-15);
  EXPECT_NEAR(r.constraint_residuals[0], 0.0, 1e-15);
  Assignment good{{0.5, HermitianMatrix::identity(2) * 0.25}};
  EXPECT_TRUE(check_feasible(p, good, 1e-12).feasible);
  EXPECT_NEAR(std::get<double>(evaluate(p, p.objective(), good)), 0.5, 1e-15);
  const std::string text = dump(p);
  EXPECT_NE(text.find("sum"), std::string::npos);
  EXPECT_NE(text.find("M"), std::string::npos);
  EXPECT_EQ(to_string(SolveStatus::kOptimal), "Optimal");
}

}  // namespace
}  // namespace incompat::sdp
