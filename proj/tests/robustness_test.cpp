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

#include "incompat/robustness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "incompat/error.hpp"
#include "incompat/io.hpp"
#include "test_util.hpp"

namespace incompat {
namespace {

using NM = NoiseModel;
using testing::real_hermitian;

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

double eta(const MeasurementSet& s, NM m) { return solve_robustness(s, m).eta; }

TEST(Robustness, ThetaFamilyClosedForms) {
  for (double t : {0.1, 0.4, std::numbers::pi / 6, std::numbers::pi / 4}) {
    const MeasurementSet s = qubit_theta_pair(t);
    const double c = std::cos(t), sn = std::sin(t);
    const double busch = 1 / (c + sn);
    EXPECT_NEAR(eta(s, NM::kDepolarising), busch, 1e-6) << t;
    EXPECT_NEAR(eta(s, NM::kRandom), busch, 1e-6) << t;
    EXPECT_NEAR(eta(s, NM::kProbabilistic), busch, 1e-6) << t;
    EXPECT_NEAR(eta(s, NM::kJointlyMeasurable), 2 / (1 + c + sn), 1e-6) << t;
    EXPECT_NEAR(eta(s, NM::kGeneralised), (kSqrt2 + 1) / (kSqrt2 + c + sn), 1e-6) << t;
  }
}

TEST(Robustness, CoincidingMeasurementsAreCompatible) {
  const MeasurementSet s = qubit_theta_pair(0.0);
  for (NM m : kAllNoiseModels) {
    const RobustnessResult r = solve_robustness(s, m);
    EXPECT_NEAR(r.eta, 1.0, 1e-7) << short_name(m);
    EXPECT_TRUE(r.jointly_measurable) << short_name(m);
  }
}

TEST(Robustness, NamedValues) {
  EXPECT_NEAR(eta(mub_pair(3), NM::kProbabilistic), 0.5 * (1 + 1 / (kSqrt3 + 1)), 1e-6);
  EXPECT_NEAR(eta(named_pair("qMUB3"), NM::kDepolarising), 0.5 * (1 + kSqrt2 / (3 + kSqrt2)),
              1e-6);
  EXPECT_NEAR(eta(prime_mub_set(2, 3), NM::kGeneralised), 0.5 * (1 + 1 / kSqrt3), 1e-6);
}

TEST(Robustness, CommutingPairHasProductParent) {
  const MeasurementSet s({Povm::computational_basis(3),
                          Povm({real_hermitian({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}),
                                real_hermitian({{0, 0, 0}, {0, 0, 0}, {0, 0, 1}})})});
  for (NM m : kAllNoiseModels) {
    const RobustnessResult r = solve_robustness(s, m);
    EXPECT_NEAR(r.eta, 1.0, 1e-7) << short_name(m);
    EXPECT_TRUE(r.jointly_measurable);
  }
  const JointMeasurability jm = is_jointly_measurable(s);
  ASSERT_TRUE(jm.jointly_measurable);
  ASSERT_TRUE(jm.parent.has_value());
  for (int x = 0; x < 2; ++x) {
    for (int a = 0; a < s[x].outcomes(); ++a) {
      EXPECT_LT((jm.parent->marginal(x, a) - s[x][a]).max_abs(), 1e-7);
    }
  }
}

TEST(Robustness, JointMeasurabilityThreshold) {
  EXPECT_FALSE(is_jointly_measurable(mub_pair(2)).jointly_measurable);
  const MeasurementSet s = mub_pair(2);
  const MeasurementSet below =
      noisy_version(s, canonical_noise(NM::kDepolarising, s), 0.70);
  EXPECT_TRUE(is_jointly_measurable(below).jointly_measurable);
  const MeasurementSet above =
      noisy_version(s, canonical_noise(NM::kDepolarising, s), 0.72);
  EXPECT_FALSE(is_jointly_measurable(above).jointly_measurable);
  const MeasurementSet trivial({mub_pair(3)[0], Povm::trivial(3, 3)});
  EXPECT_TRUE(is_jointly_measurable(trivial).jointly_measurable);
}

TEST(Robustness, FreshSolveVerifies) {
  const MeasurementSet s = qubit_theta_pair(std::numbers::pi / 6);
  for (NM m : kAllNoiseModels) {
    const RobustnessResult r = solve_robustness(s, m);
    const VerifyReport v = verify_result(s, r);
    EXPECT_TRUE(v.ok) << short_name(m) << " " << v.detail;
    EXPECT_LE(v.residuals.max(), 1e-7);
    EXPECT_GE(r.certified_bound, r.eta - 1e-6);
    EXPECT_LE(std::abs(r.gap), 1e-7 * (1 + r.eta));
  }
}

TEST(Robustness, TamperedEtaIsFlagged) {
  const MeasurementSet s = qubit_theta_pair(std::numbers::pi / 6);
  RobustnessResult r = solve_robustness(s, NM::kDepolarising);
  r.eta += 0.01;
  const VerifyReport v = verify_result(s, r);
  EXPECT_FALSE(v.ok);
  EXPECT_GT(v.residuals.marginal, 5e-3);
}

TEST(Robustness, PublishedThetaDualCertifies) {
  for (double t : {0.2, std::numbers::pi / 4}) {
    const double c = std::cos(t), sn = std::sin(t);
    const double k = 1 / (4 * (c + sn));
    // (X, Y) with Z + X and Z - X combinations.
    const HermitianMatrix zpx = real_hermitian({{1, 1}, {1, -1}});
    const HermitianMatrix zmx = real_hermitian({{1, -1}, {-1, -1}});
    const HermitianMatrix id = HermitianMatrix::identity(2);
    DualCertificate cert;
    cert.x = {{(id + zpx) * k, (id - zpx) * k}, {(id + zmx) * k, (id - zmx) * k}};
    const DualCheck dc = certify_dual(qubit_theta_pair(t), NM::kDepolarising, cert);
    EXPECT_TRUE(dc.feasible) << t;
    EXPECT_NEAR(dc.objective, 1 / (c + sn), 1e-12) << t;
    EXPECT_NEAR(dc.certified_bound, 1 / (c + sn), 1e-10) << t;
  }
}

TEST(Robustness, InfeasibleDualIsRepaired) {
  DualCertificate cert;
  const HermitianMatrix m = real_hermitian({{-0.1, 0}, {0, 0}});
  cert.x = {{m, m}, {m, m}};
  const DualCheck dc = certify_dual(mub_pair(2), NM::kDepolarising, cert);
  EXPECT_FALSE(dc.feasible);
  EXPECT_GT(dc.cone_violation, 0.1);
  EXPECT_GE(dc.certified_bound, 1 / kSqrt2 - 1e-9);
}

// A compatible random pair whose p dual is degenerate; rounding once made
// its certified bound drop below eta = 1.
TEST(Robustness, DegenerateDualStillCertifies) {
  const MeasurementSet s =
      read_measurement_set(std::string(INCOMPAT_TEST_DATA) + "/degenerate_pair.json");
  for (NM m : kAllNoiseModels) {
    const RobustnessResult r = solve_robustness(s, m);
    EXPECT_NEAR(r.eta, 1.0, 1e-7) << short_name(m);
    EXPECT_GE(r.certified_bound, r.eta - 1e-7) << short_name(m);
    EXPECT_TRUE(verify_result(s, r).ok) << short_name(m);
  }
}

TEST(Robustness, Errors) {
  EXPECT_THROW(solve_robustness(MeasurementSet({Povm::computational_basis(2)}),
                                NM::kDepolarising),
               Error);
  RobustnessOptions small;
  small.max_parent_outcomes = 8;
  try {
    solve_robustness(mub_pair(3), NM::kGeneralised, small);
    ADD_FAILURE() << "expected kTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
  const MeasurementSet bad({Povm({real_hermitian({{1, 0}, {0, 1}}),
                                  real_hermitian({{0.5, 0}, {0, 0}})}),
                            Povm::computational_basis(2)});
  EXPECT_THROW(solve_robustness(bad, NM::kDepolarising), Error);
}

TEST(Robustness, ProbabilisticDistributionsAreNormalized) {
  const RobustnessResult r = solve_robustness(mub_pair(3), NM::kProbabilistic);
  ASSERT_EQ(r.noise.distributions.size(), 2u);
  for (const auto& p : r.noise.distributions) {
    double sum = 0;
    for (double v : p) {
      EXPECT_GE(v, -1e-9);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-7);
  }
}

TEST(Robustness, GeneralisedParentDominates) {
  const MeasurementSet s = mub_pair(3);
  const RobustnessResult r = solve_robustness(s, NM::kGeneralised);
  for (int x = 0; x < 2; ++x) {
    for (int a = 0; a < 3; ++a) {
      EXPECT_GE(min_eigenvalue(r.parent.marginal(x, a) - s[x][a] * r.eta), -1e-7);
    }
  }
}

TEST(Robustness, OrderingAndUnitaryInvariance) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 6; ++i) {
    const MeasurementSet s = testing::random_pair(2 + i % 2, 3, i, rng);
    const double d = eta(s, NM::kDepolarising), r = eta(s, NM::kRandom);
    const double p = eta(s, NM::kProbabilistic), jm = eta(s, NM::kJointlyMeasurable);
    const double g = eta(s, NM::kGeneralised);
    EXPECT_LE(std::max(d, r), p + 2e-6);
    EXPECT_LE(p, jm + 2e-6);
    EXPECT_LE(jm, g + 2e-6);
    const MeasurementSet u = conjugate(s, haar_unitary(s.dim(), rng));
    EXPECT_NEAR(eta(u, NM::kJointlyMeasurable), jm, 2e-6);
  }
}

TEST(Robustness, BuildersMatchSolve) {
  const MeasurementSet s = mub_pair(2);
  const sdp::ConicSolution sol = sdp::solve(build_primal(s, NM::kJointlyMeasurable));
  ASSERT_EQ(sol.status, sdp::SolveStatus::kOptimal);
  EXPECT_NEAR(sol.primal_objective, 2 * (kSqrt2 - 1), 1e-6);
  const sdp::ConicSolution dual = sdp::solve(build_dual(s, NM::kJointlyMeasurable));
  ASSERT_EQ(dual.status, sdp::SolveStatus::kOptimal);
  EXPECT_NEAR(dual.primal_objective, 2 * (kSqrt2 - 1), 1e-6);
}

}  // namespace
}  // namespace incompat
