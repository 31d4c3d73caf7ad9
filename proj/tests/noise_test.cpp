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

#include "incompat/noise.hpp"

#include <gtest/gtest.h>

#include "incompat/error.hpp"
#include "incompat/repro.hpp"
#include "test_util.hpp"

namespace incompat {
namespace {

TEST(Noise, Names) {
  EXPECT_EQ(short_name(NoiseModel::kJointlyMeasurable), "jm");
  EXPECT_EQ(parse_noise_model("g"), NoiseModel::kGeneralised);
  EXPECT_EQ(parse_noise_model(long_name(NoiseModel::kRandom)), NoiseModel::kRandom);
  EXPECT_THROW(parse_noise_model("x"), Error);
}

TEST(Noise, DepolarisingKeepsTraces) {
  const MeasurementSet s = ctrex_preprocessed_pair();
  const MeasurementSet n = canonical_noise(NoiseModel::kDepolarising, s);
  EXPECT_LT((n[0][1] - HermitianMatrix::identity(3) * (2.0 / 3)).max_abs(), 1e-15);
  EXPECT_LT((n[0][0] - HermitianMatrix::identity(3) * (1.0 / 3)).max_abs(), 1e-15);
}

TEST(Noise, RandomIsUniform) {
  const MeasurementSet s = ctrex_split_pair();
  const MeasurementSet n = canonical_noise(NoiseModel::kRandom, s);
  EXPECT_LT((n[0][2] - HermitianMatrix::identity(2) * (1.0 / 3)).max_abs(), 1e-15);
  EXPECT_LT((n[1][0] - HermitianMatrix::identity(2) * 0.5).max_abs(), 1e-15);
}

TEST(Noise, NoisyVersion) {
  const MeasurementSet s = mub_pair(2);
  const MeasurementSet n = canonical_noise(NoiseModel::kDepolarising, s);
  const MeasurementSet v = noisy_version(s, n, 0.25);
  EXPECT_LT((v[0][0] - (s[0][0] * 0.25 + n[0][0] * 0.75)).max_abs(), 1e-15);
  EXPECT_THROW(noisy_version(s, n, 1.5), Error);
  EXPECT_THROW(noisy_version(s, canonical_noise(NoiseModel::kRandom, ctrex_split_pair()), 0.5),
               Error);
}

TEST(Noise, MembershipOfCanonicalInstances) {
  const MeasurementSet s = mub_pair(3);
  for (NoiseModel m : kAllNoiseModels) {
    const MembershipReport r = membership_check(m, s, canonical_instance(m, s));
    EXPECT_TRUE(r.member) << short_name(m) << " " << r.detail;
  }
}

TEST(Noise, MembershipRejectsForeignNoise) {
  const MeasurementSet s = ctrex_preprocessed_pair();
  NoiseInstance inst = canonical_instance(NoiseModel::kRandom, s);
  inst.kind = NoiseModel::kDepolarising;
  EXPECT_FALSE(membership_check(NoiseModel::kDepolarising, s, inst).member);
  // An incompatible pair is not jointly measurable noise.
  NoiseInstance jm;
  jm.kind = NoiseModel::kJointlyMeasurable;
  jm.noise = mub_pair(3);
  EXPECT_FALSE(membership_check(NoiseModel::kJointlyMeasurable, mub_pair(3), jm).member);
  jm.noise = canonical_noise(NoiseModel::kDepolarising, mub_pair(3));
  EXPECT_TRUE(membership_check(NoiseModel::kJointlyMeasurable, mub_pair(3), jm).member);
}

TEST(Noise, ProbabilisticNeedsIdentityMultiples) {
  const MeasurementSet s = mub_pair(2);
  NoiseInstance p;
  p.kind = NoiseModel::kProbabilistic;
  p.noise = MeasurementSet({Povm({HermitianMatrix::identity(2) * 0.3,
                                  HermitianMatrix::identity(2) * 0.7}),
                            Povm::trivial(2, 2)});
  p.distributions = {{0.3, 0.7}, {0.5, 0.5}};
  EXPECT_TRUE(membership_check(NoiseModel::kProbabilistic, s, p).member);
  p.noise = mub_pair(2);
  EXPECT_FALSE(membership_check(NoiseModel::kProbabilistic, s, p).member);
}

}  // namespace
}  // namespace incompat
