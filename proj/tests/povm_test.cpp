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

#include "incompat/povm.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "incompat/error.hpp"
#include "incompat/repro.hpp"
#include "test_util.hpp"

namespace incompat {
namespace {

using testing::real_hermitian;

// tr(A B) for every pair of elements of two bases; unbiased means 1/d.
double max_bias(const Povm& a, const Povm& b) {
  double worst = 0;
  const double want = 1.0 / a.dim();
  for (const auto& x : a.elements()) {
    for (const auto& y : b.elements()) worst = std::max(worst, std::abs(inner(x, y) - want));
  }
  return worst;
}

TEST(Povm, ComputationalBasisIsValid) {
  const Povm p = Povm::computational_basis(4);
  EXPECT_TRUE(validate(p).valid);
  EXPECT_TRUE(is_rank_one_projective(p));
  EXPECT_EQ(p.outcomes(), 4);
}

TEST(Povm, ValidationCatchesNegativeAndUnnormalized) {
  const Povm neg({real_hermitian({{1.5, 0}, {0, 1}}), real_hermitian({{-0.5, 0}, {0, 0}})});
  const ValidationReport r = validate(neg);
  EXPECT_FALSE(r.valid);
  EXPECT_NEAR(r.psd_residuals[1], 0.5, 1e-12);
  const Povm half({real_hermitian({{0.5, 0}, {0, 0.5}})});
  EXPECT_FALSE(validate(half).valid);
  EXPECT_NEAR(validate(half).normalization_residual, std::sqrt(0.5), 1e-12);
}

TEST(Povm, ShapeErrors) {
  EXPECT_THROW(Povm(std::vector<HermitianMatrix>{}), Error);
  EXPECT_THROW(Povm({HermitianMatrix::identity(2), HermitianMatrix::identity(3)}), Error);
  EXPECT_THROW(MeasurementSet({Povm::computational_basis(2), Povm::computational_basis(3)}),
               Error);
}

TEST(Povm, ThetaPairElements) {
  const double t = 0.3;
  const MeasurementSet s = qubit_theta_pair(t);
  // A_1 = (I - (cos t Z + sin t X))/2 with outcomes labelled a = 1, 2.
  const double c = std::cos(t), sn = std::sin(t);
  const HermitianMatrix a1 = real_hermitian({{(1 - c) / 2, -sn / 2}, {-sn / 2, (1 + c) / 2}});
  const HermitianMatrix b1 = real_hermitian({{(1 - c) / 2, sn / 2}, {sn / 2, (1 + c) / 2}});
  EXPECT_LT((s[0][0] - a1).max_abs(), 1e-15);
  EXPECT_LT((s[1][0] - b1).max_abs(), 1e-15);
  EXPECT_THROW(qubit_theta_pair(1.0), Error);
}

TEST(Povm, MubPairsAreUnbiased) {
  for (int d = 2; d <= 6; ++d) {
    const MeasurementSet s = mub_pair(d);
    EXPECT_LT(max_bias(s[0], s[1]), 1e-12) << d;
    EXPECT_TRUE(validate(s).valid);
  }
}

TEST(Povm, CompleteMubSets) {
  for (int d : {2, 3, 4, 5}) {
    const MeasurementSet s = complete_mub_set(d);
    ASSERT_EQ(s.size(), d + 1);
    for (int x = 0; x < s.size(); ++x) {
      EXPECT_TRUE(is_rank_one_projective(s[x]));
      for (int y = x + 1; y < s.size(); ++y) EXPECT_LT(max_bias(s[x], s[y]), 1e-12) << d;
    }
  }
  EXPECT_THROW(prime_mub_set(6, 2), Error);
  EXPECT_THROW(prime_mub_set(3, 5), Error);
}

TEST(Povm, NamedPairs) {
  // dev3 unitary entrywise.
  const double r = 1 / std::sqrt(2.0);
  CMatrix u(3, 3);
  u << r, 0.5, 0.5, r, -0.5, -0.5, 0, -r, r;
  EXPECT_LT((deviation_unitary() - u).norm(), 1e-15);
  const MeasurementSet dev = named_pair("dev3");
  EXPECT_LT((dev[1][0].matrix() - u.col(0) * u.col(0).adjoint()).norm(), 1e-15);
  const MeasurementSet q = named_pair("qMUB3");
  EXPECT_NEAR(q[1][2](2, 2).real(), 1.0, 1e-15);
  EXPECT_LT(testing::set_distance(named_pair("qMUB(5)"), embedded_qubit_mub(5)), 1e-15);
  EXPECT_LT(testing::set_distance(named_pair("qMUB4"), block_qubit_mub(4)), 1e-15);
  EXPECT_THROW(named_pair("nope"), Error);
  EXPECT_THROW(block_qubit_mub(5), Error);
  EXPECT_THROW(deviation_block_pair(4), Error);
}

TEST(Povm, ParentMarginals) {
  ParentPovm g;
  g.shape = {2, 3};
  for (int j = 0; j < 6; ++j) g.elements.push_back(HermitianMatrix::identity(2) * (1.0 / 6));
  EXPECT_NEAR(g.marginal(0, 1).trace(), 1.0, 1e-15);
  EXPECT_NEAR(g.marginal(1, 2).trace(), 2.0 / 3, 1e-15);
  EXPECT_EQ(unravel_index(5, {2, 3}), (std::vector<int>{1, 2}));
  EXPECT_EQ(unravel_index(3, {2, 3}), (std::vector<int>{1, 0}));
}

TEST(Povm, SplittingPostProcessing) {
  const MeasurementSet ab = mub_pair(2);
  const MeasurementSet s = ctrex_split_pair();
  EXPECT_LT((s[0][0] - ab[0][0] * 0.5).max_abs(), 1e-15);
  EXPECT_LT((s[0][1] - ab[0][0] * 0.5).max_abs(), 1e-15);
  EXPECT_LT((s[0][2] - ab[0][1]).max_abs(), 1e-15);
  RMatrix bad(2, 2);
  bad << 0.5, 0.5, 0.6, 0.5;
  EXPECT_THROW(apply_post_processing(ab[0], bad), Error);
  EXPECT_THROW(apply_post_processing(ab[0], RMatrix::Identity(3, 3)), Error);
}

TEST(Povm, PreProcessingIntoQutrit) {
  const MeasurementSet s = ctrex_preprocessed_pair();
  EXPECT_EQ(s.dim(), 3);
  EXPECT_NEAR(s[0][1].trace(), 2.0, 1e-15);
  // Lambda([[a,b],[c,d]]) = [[a,b,0],[c,d,0],[0,0,d]]
  EXPECT_NEAR(s[1][0](0, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(s[1][0](2, 2).real(), 0.5, 1e-15);
  EXPECT_TRUE(validate(s).valid);
  UnitalChannel bad{{CMatrix::Identity(3, 2)}};
  EXPECT_THROW(apply_pre_processing(mub_pair(2), bad), Error);
  UnitalChannel wrong{{CMatrix::Identity(3, 3)}};
  EXPECT_THROW(apply_pre_processing(mub_pair(2), wrong), Error);
}

TEST(Povm, RandomConstructionsAreValid) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    EXPECT_TRUE(is_rank_one_projective(random_basis(3, rng)));
    const Povm r1 = random_rank_one_povm(2, 4, rng);
    EXPECT_TRUE(validate(r1, 1e-9).valid);
    EXPECT_TRUE(is_rank_one(r1));
    EXPECT_TRUE(validate(random_povm(3, 2, rng), 1e-9).valid);
    EXPECT_TRUE(validate(random_coarse_basis(4, 3, rng), 1e-9).valid);
    const RMatrix beta = random_stochastic(3, 2, rng);
    EXPECT_NEAR(beta.colwise().sum().maxCoeff(), 1.0, 1e-12);
    const UnitalChannel ch = random_unital_channel(2, 3, 2, rng);
    CMatrix sum = CMatrix::Zero(3, 3);
    for (const auto& k : ch.kraus) sum += k * k.adjoint();
    EXPECT_LT((sum - CMatrix::Identity(3, 3)).norm(), 1e-10);
  }
}

TEST(Povm, MixAndConjugate) {
  const MeasurementSet a = mub_pair(2);
  const MeasurementSet b = qubit_theta_pair(0.0);
  const MeasurementSet m = mix(a, b, 0.25);
  EXPECT_LT((m[1][0] - (a[1][0] * 0.75 + b[1][0] * 0.25)).max_abs(), 1e-15);
  std::mt19937_64 rng(12);
  const CMatrix u = haar_unitary(2, rng);
  const MeasurementSet c = conjugate(a, u);
  EXPECT_NEAR(inner(c[0][0], c[1][0]), inner(a[0][0], a[1][0]), 1e-12);
}

TEST(Povm, EmbedPair) {
  const MeasurementSet inner = mub_pair(2);
  const MeasurementSet s = embed_pair(inner, Povm::computational_basis(1),
                                      Povm::computational_basis(1));
  EXPECT_EQ(s.dim(), 3);
  EXPECT_EQ(s.outcome_counts(), (std::vector<int>{3, 3}));
  EXPECT_TRUE(validate(s).valid);
  EXPECT_LT(testing::set_distance(s, embedded_qubit_mub(3)), 1e-15);
}

}  // namespace
}  // namespace incompat
