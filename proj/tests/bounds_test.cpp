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

#include "incompat/bounds.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "incompat/error.hpp"
#include "incompat/repro.hpp"
#include "test_util.hpp"

namespace incompat {
namespace {

using NM = NoiseModel;

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

// max over (a, b) of the top eigenvalue of A_a + B_b, via Eigen's general solver.
double oracle_lambda(const MeasurementSet& s) {
  double best = -1e300;
  for (int a = 0; a < s[0].outcomes(); ++a) {
    for (int b = 0; b < s[1].outcomes(); ++b) {
      Eigen::ComplexEigenSolver<CMatrix> ces(s[0][a].matrix() + s[1][b].matrix());
      for (int i = 0; i < s.dim(); ++i) best = std::max(best, ces.eigenvalues()(i).real());
    }
  }
  return best;
}

TEST(Quantities, ThetaPair) {
  for (double t : {0.0, 0.3, std::numbers::pi / 4}) {
    const Quantities q = compute_quantities(qubit_theta_pair(t));
    EXPECT_NEAR(q.f, 2, 1e-12);
    EXPECT_NEAR(q.lambda, 1 + std::cos(t), 1e-12);
    EXPECT_NEAR(q.lambda, oracle_lambda(qubit_theta_pair(t)), 1e-10);
    EXPECT_NEAR(q.g_d, 1, 1e-12);
    EXPECT_NEAR(q.g_r, 1, 1e-12);
    EXPECT_NEAR(q.g_p, 1, 1e-12);
    EXPECT_NEAR(q.g_jm, 1 - std::cos(t), 1e-12);
  }
}

TEST(Quantities, MubPairsAndTriplet) {
  for (int d : {3, 4, 5}) {
    const Quantities q = compute_quantities(mub_pair(d));
    EXPECT_NEAR(q.f, 2, 1e-12);
    EXPECT_NEAR(q.lambda, 1 + 1 / std::sqrt(d), 1e-12);
    EXPECT_NEAR(q.g_d, 2.0 / d, 1e-12);
    EXPECT_NEAR(q.g_p, 2.0 / d, 1e-12);
    EXPECT_NEAR(q.g_jm, 0, 1e-12);
  }
  const Quantities t = compute_quantities(prime_mub_set(2, 3));
  EXPECT_NEAR(t.f, 3, 1e-12);
  EXPECT_NEAR(t.lambda, (3 + kSqrt3) / 2, 1e-12);
  EXPECT_NEAR(t.g_d, 1.5, 1e-12);
  EXPECT_NEAR(t.g_p, 1.5, 1e-12);
  EXPECT_NEAR(t.g_jm, (3 - kSqrt3) / 2, 1e-12);
}

TEST(Quantities, Hierarchy) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 30; ++i) {
    const Quantities q = compute_quantities(testing::random_pair(3, 3, i, rng));
    EXPECT_GE(std::min(q.g_d, q.g_r), q.g_p - 1e-12);
    EXPECT_GE(q.g_p, q.g_jm - 1e-12);
    EXPECT_GE(q.g_jm, -1e-12);
    EXPECT_GT(q.f, q.g_d);
    EXPECT_GT(q.f, q.g_r);
  }
}

TEST(UpperBounds, ClosedForms) {
  EXPECT_NEAR(upper_bounds(mub_pair(4), NM::kGeneralised), 0.75, 1e-12);
  EXPECT_NEAR(upper_bounds(qubit_theta_pair(std::numbers::pi / 4), NM::kDepolarising),
              1 / kSqrt2, 1e-12);
  const MeasurementSet trivial({Povm::trivial(2, 2), Povm::trivial(2, 3)});
  const UpperBound u = upper_bound_detail(trivial, NM::kDepolarising);
  EXPECT_TRUE(u.trivial);
  EXPECT_EQ(u.value, 1.0);
}

TEST(UpperBounds, TightForMubs) {
  for (int d : {2, 3, 4, 5}) {
    for (NM m : {NM::kDepolarising, NM::kJointlyMeasurable, NM::kGeneralised}) {
      EXPECT_NEAR(upper_bounds(mub_pair(d), m), mub_closed_form(d, m), 1e-9)
          << d << " " << short_name(m);
    }
  }
}

TEST(UpperBounds, TraceNormalized) {
  const MeasurementSet c1 = ctrex_preprocessed_pair();
  EXPECT_NEAR(upper_bounds(c1, NM::kDepolarising), (9 * kSqrt2 - 1) / 14, 1e-9);
  EXPECT_NEAR(trace_normalized_upper_bounds(c1, NM::kDepolarising),
              3 * (std::sqrt(13.0) + 1) / 10, 1e-9);
  const MeasurementSet c3 = ctrex_split_pair();
  EXPECT_NEAR(trace_normalized_upper_bounds(c3, NM::kDepolarising), 1 / kSqrt2, 1e-9);
  EXPECT_NEAR(upper_bounds(c3, NM::kDepolarising), (4 * kSqrt2 + 1) / 7, 1e-9);
  // Rank-one projective: both versions agree.
  std::mt19937_64 rng(42);
  const MeasurementSet s({random_basis(3, rng), random_basis(3, rng)});
  for (NM m : kAllNoiseModels) {
    EXPECT_NEAR(upper_bounds(s, m), trace_normalized_upper_bounds(s, m), 1e-9);
  }
  const MeasurementSet zero({Povm({HermitianMatrix::identity(2), HermitianMatrix::zero(2)}),
                             mub_pair(2)[1]});
  EXPECT_THROW(trace_normalized_upper_bounds(zero, NM::kDepolarising), Error);
}

TEST(LowerBounds, Universal) {
  EXPECT_NEAR(universal_lower_bound(NM::kDepolarising, 2, {2, 2}), 1 / kSqrt2, 1e-12);
  EXPECT_NEAR(universal_lower_bound(NM::kJointlyMeasurable, 2, {2, 2}), 2 * (kSqrt2 - 1), 1e-12);
  EXPECT_NEAR(universal_lower_bound(NM::kRandom, 2, {2, 2}), 2.0 / 3, 1e-12);
  EXPECT_NEAR(universal_lower_bound(NM::kGeneralised, 4, {4, 4}), 0.75, 1e-12);
  for (int d = 2; d <= 6; ++d) {
    const double s = std::sqrt(d * d + 4.0 * d - 4);
    EXPECT_NEAR(universal_lower_bound(NM::kDepolarising, d, {d, d}), (d - 2 + s) / (4 * (d - 1.0)),
                1e-12);
    EXPECT_GE(universal_lower_bound(NM::kDepolarising, d, {d, d}),
              0.5 * (1 + 1.0 / (d + 1)) - 1e-12);
  }
  EXPECT_NEAR(cloning_lower_bound(3, 2), 0.5 * (1 + 0.25), 1e-12);
  EXPECT_NEAR(cloning_lower_bound(2, 3), (1 + 2.0 / 3) / 3, 1e-12);
  EXPECT_THROW(universal_lower_bound(NM::kDepolarising, 1, {2, 2}), Error);
}

TEST(LowerBounds, Refined) {
  const MeasurementSet same({mub_pair(3)[0], mub_pair(3)[0]});
  EXPECT_NEAR(refined_lower_bound(same, NM::kDepolarising).value, 1.0, 1e-9);
  for (int d : {3, 4, 5}) {
    const RefinedBound r = refined_lower_bound(embedded_qubit_mub(d), NM::kDepolarising);
    EXPECT_NEAR(r.value, 0.5 * (1 + kSqrt2 / (d + kSqrt2)), 1e-12) << d;
    EXPECT_NEAR(r.split.c_minus, 1 / kSqrt2, 1e-12);
    EXPECT_NEAR(r.split.c_plus, 1, 1e-12);
    EXPECT_NEAR(embedding_upper_bound(1 + 1 / kSqrt2, 2, d), r.value, 1e-12);
  }
  const RefinedBound m2 = refined_lower_bound(mub_pair(2), NM::kDepolarising);
  EXPECT_TRUE(m2.split.at_critical);
  EXPECT_NEAR(m2.value, 1 / kSqrt2, 1e-12);
  std::mt19937_64 rng(1);
  const MeasurementSet mixed({random_povm(2, 3, rng), mub_pair(2)[0]});
  EXPECT_THROW(refined_lower_bound(mixed, NM::kDepolarising), Error);
}

TEST(LowerBounds, AnsatzParents) {
  std::mt19937_64 rng(43);
  const MeasurementSet s({random_basis(3, rng), random_basis(3, rng)});
  // Cloning coefficients.
  std::vector<double> alpha, beta;
  for (int b = 0; b < 3; ++b) alpha.push_back(s[1][b].trace());
  for (int a = 0; a < 3; ++a) beta.push_back(s[0][a].trace());
  const AnsatzParent clone = ansatz_parent(s[0], s[1], alpha, beta, RMatrix::Zero(3, 3), 0.0);
  EXPECT_TRUE(clone.psd);
  EXPECT_TRUE(clone.closed_form);
  RMatrix neg = RMatrix::Zero(3, 3);
  neg(0, 0) = -0.5;
  EXPECT_FALSE(ansatz_parent(s[0], s[1], alpha, beta, neg, 0.0).psd);
  // Rank-one eigenvalue formula against a full eigensolve of {A,B} + at A + bt B + gamma I.
  for (int i = 0; i < 5; ++i) {
    const CMatrix u = haar_unitary(3, rng), v = haar_unitary(3, rng);
    const CMatrix am = 0.7 * u.col(0) * u.col(0).adjoint();
    const CMatrix bm = 0.4 * v.col(0) * v.col(0).adjoint();
    const double at = 0.3 + 0.1 * i, bt = 0.5, gamma = 0.05 * i;
    const CMatrix m = am * bm + bm * am + at * am + bt * bm + gamma * CMatrix::Identity(3, 3);
    Eigen::ComplexEigenSolver<CMatrix> ces(m);
    std::vector<double> ev;
    for (int k = 0; k < 3; ++k) ev.push_back(ces.eigenvalues()(k).real());
    std::sort(ev.begin(), ev.end());
    const double tab = (am * bm).trace().real();
    const auto [lo, hi] = rank_one_ansatz_eigenvalues(0.7, 0.4, tab, at, bt, gamma);
    EXPECT_NEAR(hi, ev[2], 1e-10);
    // The remaining two eigenvalues are lo and gamma in some order.
    EXPECT_NEAR(std::min(lo, gamma), ev[0], 1e-10);
    EXPECT_NEAR(std::max(lo, gamma), ev[1], 1e-10);
  }
}

TEST(Bounds, EmbeddingTable) {
  EXPECT_NEAR(embedding_table_value(2, 2), 0.5774, 1e-4);
  EXPECT_NEAR(embedding_table_value(2, 3), 0.5273, 1e-4);
  EXPECT_NEAR(embedding_table_value(3, 3), 0.4818, 1e-4);
  for (int d : {2, 3, 5}) {
    EXPECT_NEAR(embedding_upper_bound(1 + 1 / std::sqrt(d), d, d), mub_closed_form(d, NM::kDepolarising),
                1e-12);
  }
  EXPECT_THROW(embedding_upper_bound(1.5, 3, 2), Error);
  EXPECT_NEAR(block_structure_p_upper_bound(block_qubit_mub(4), 2),
              0.5 * (1 + kSqrt2 / (4 + kSqrt2)), 1e-12);
  EXPECT_THROW(block_structure_p_upper_bound(mub_pair(4), 2), Error);
}

TEST(Bounds, ZeroOutcomeLimit) {
  EXPECT_NEAR(zero_outcome_limit_bound(qubit_theta_pair(std::numbers::pi / 4)), 0.5, 1e-12);
  EXPECT_NEAR(zero_outcome_limit_bound(mub_pair(3)), 0.5, 1e-12);
  EXPECT_THROW(zero_outcome_limit_bound(qubit_theta_pair(0.0)), Error);
}

TEST(Bounds, RelationTransfers) {
  EXPECT_NEAR(relation_transfer(1 / kSqrt2, 2, 2, Transfer::kJmFromD), 2 * (kSqrt2 - 1), 1e-12);
  EXPECT_NEAR(relation_transfer(1 / kSqrt2, 2, 2, Transfer::kGFromD), 0.5 * (1 + 1 / kSqrt2),
              1e-12);
  for (Transfer t : {Transfer::kJmFromD, Transfer::kGFromD, Transfer::kGFromR}) {
    EXPECT_NEAR(relation_transfer(1.0, 3, 4, t), 1.0, 1e-15);
  }
  EXPECT_THROW(relation_transfer(1.5, 2, 2, Transfer::kGFromR), Error);
}

TEST(Bounds, Cascade) {
  const CascadeBound c2 = cascade_lower_bound(mub_pair(2), NM::kDepolarising);
  EXPECT_NEAR(c2.eta, universal_lower_bound(NM::kDepolarising, 2, {2, 2}), 1e-12);
  const CascadeBound c3 = cascade_lower_bound(prime_mub_set(2, 3), NM::kDepolarising);
  EXPECT_NEAR(c3.eta, (1 + 1 / kSqrt2) / 3, 1e-12);
  const MeasurementSet q = complete_mub_set(2);
  const CascadeBound c4 =
      cascade_lower_bound(MeasurementSet({q[0], q[1], q[2], q[0]}), NM::kGeneralised);
  EXPECT_NEAR(c4.eta, std::pow(0.5 * (1 + 1 / kSqrt2), 2), 1e-12);
  EXPECT_NEAR(cascade_visibility(4, 0.8), 0.64, 1e-12);
}

TEST(Bounds, MubClosedFormsAndParents) {
  EXPECT_NEAR(mub_closed_form(2, NM::kJointlyMeasurable), 2 * (kSqrt2 - 1), 1e-12);
  EXPECT_NEAR(mub_closed_form(3, NM::kJointlyMeasurable), 0.5 * (1 + 1 / kSqrt3), 1e-12);
  EXPECT_NEAR(mub_closed_form(9, NM::kGeneralised), 2.0 / 3, 1e-12);
  EXPECT_NEAR(mub_closed_form(4, NM::kRandom), 0.5 * (1 + 1 / 3.0), 1e-12);
  for (int d : {2, 3, 4}) {
    const ParentPovm g = mub_parent(d);
    for (const auto& e : g.elements) EXPECT_GE(min_eigenvalue(e), -1e-12);
  }
  EXPECT_THROW(mub_noise_parent(2), Error);
}

TEST(Bounds, QubitTriplet) {
  const TripletTable t = qubit_triplet_bounds();
  EXPECT_NEAR(t.d, 1 / kSqrt3, 1e-15);
  EXPECT_NEAR(t.jm, kSqrt3 - 1, 1e-15);
  const TripletParent p = qubit_triplet_parent(prime_mub_set(2, 3));
  EXPECT_TRUE(p.psd);
  EXPECT_LE(p.marginal_residual, 1e-10);
  std::mt19937_64 rng(44);
  for (int i = 0; i < 20; ++i) {
    const MeasurementSet s({random_basis(2, rng), random_basis(2, rng), random_basis(2, rng)});
    EXPECT_TRUE(qubit_triplet_parent(s).psd);
  }
  EXPECT_THROW(qubit_triplet_parent(prime_mub_set(3, 3)), Error);
}

TEST(Bounds, SandwichOnSmallCorpus) {
  std::mt19937_64 rng(45);
  for (int i = 0; i < 4; ++i) {
    const MeasurementSet s = testing::random_pair(2, 2 + i % 2, i, rng);
    const BoundReport rep = bound_report(s);
    for (NM m : kAllNoiseModels) {
      const double eta = solve_robustness(s, m).eta;
      for (const auto& e : rep.at(m).lower) EXPECT_LE(e.value, eta + 2e-6) << e.tag;
      for (const auto& e : rep.at(m).upper) EXPECT_GE(e.value, eta - 2e-6) << e.tag;
    }
  }
}

}  // namespace
}  // namespace incompat
