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

#ifndef INCOMPAT_NOISE_HPP_
#define INCOMPAT_NOISE_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "incompat/povm.hpp"

namespace incompat {

// Noise sets defining the five robustness measures:
//   depolarising        tr(A_a) I/d
//   random              I/n
//   probabilistic       p_a I for any distribution p
//   jointly measurable  any jointly measurable set
//   generalised         any measurement set
enum class NoiseModel { kDepolarising, kRandom, kProbabilistic, kJointlyMeasurable, kGeneralised };

inline constexpr std::array<NoiseModel, 5> kAllNoiseModels = {
    NoiseModel::kDepolarising, NoiseModel::kRandom, NoiseModel::kProbabilistic,
    NoiseModel::kJointlyMeasurable, NoiseModel::kGeneralised};

// "d", "r", "p", "jm", "g".
std::string_view short_name(NoiseModel m);
std::string_view long_name(NoiseModel m);
// Accepts short or long names; throws kUnknownId.
NoiseModel parse_noise_model(std::string_view s);

// Depolarising and Random return their single element; the other models
// return the uniform representative I/n.
MeasurementSet canonical_noise(NoiseModel m, const MeasurementSet& s);

// eta * s + (1 - eta) * noise. kShapeMismatch, kDomainError for eta outside [0, 1].
MeasurementSet noisy_version(const MeasurementSet& s, const MeasurementSet& noise, double eta);

// A concrete element of a noise set together with what certifies its
// membership: the distributions p_{a|x} for probabilistic noise, a
// normalized parent for jointly measurable noise.
struct NoiseInstance {
  NoiseModel kind = NoiseModel::kDepolarising;
  std::optional<MeasurementSet> noise;
  std::vector<std::vector<double>> distributions;
  std::optional<ParentPovm> parent;
};

NoiseInstance canonical_instance(NoiseModel m, const MeasurementSet& s);

struct MembershipReport {
  bool member = false;
  double residual = 0.0;
  std::string detail;
};

// Checks that candidate.noise belongs to the noise set of `kind` for the
// set s. Jointly measurable candidates without a parent are decided by an
// SDP.
MembershipReport membership_check(NoiseModel kind, const MeasurementSet& s,
                                  const NoiseInstance& candidate, double tol = 1e-8);

}  // namespace incompat

#endif  // INCOMPAT_NOISE_HPP_
