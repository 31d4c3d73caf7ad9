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

// Sampling search for the most incompatible measurement sets, the qutrit
// path from the deviation pair through qMUB to MUB, and figure data.

#ifndef INCOMPAT_SEARCH_HPP_
#define INCOMPAT_SEARCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "incompat/io.hpp"
#include "incompat/noise.hpp"
#include "incompat/povm.hpp"
#include "incompat/robustness.hpp"

namespace incompat {

enum class Restriction { kRankOneProjective, kRankOne, kGeneral };

std::string_view to_string(Restriction r);
// "rank-one-projective", "rank-one", "general"; kUnknownId otherwise.
Restriction parse_restriction(std::string_view s);

struct SearchConfig {
  int d = 2;
  std::vector<int> outcome_counts;  // empty: d outcomes for every measurement
  int k = 2;
  std::vector<NoiseModel> measures = {NoiseModel::kDepolarising, NoiseModel::kProbabilistic,
                                      NoiseModel::kJointlyMeasurable,
                                      NoiseModel::kGeneralised};
  long samples = 1000;
  std::uint64_t seed = 0;
  Restriction restriction = Restriction::kRankOneProjective;
  // 0: hardware concurrency. INCOMPAT_THREADS caps the count in any case.
  int threads = 0;
  std::string checkpoint_path;  // empty: no checkpoints
  long checkpoint_every = 256;  // also the size of a work chunk
  // Evaluated before the random samples (named constructions and the like).
  std::vector<MeasurementSet> extra_sets;
  bool keep_log = false;
  RobustnessOptions solver;
};

struct MeasureRecord {
  NoiseModel measure = NoiseModel::kDepolarising;
  double best_eta = 1.0;
  std::optional<MeasurementSet> best_set;
  // Index of the best sample; extra sets are numbered -1, -2, ...
  long best_index = 0;
  // r is never sampled: its minimum over any shape is 1/2.
  bool skipped = false;
};

struct SearchRecord {
  std::vector<MeasureRecord> measures;  // config order
  long samples_done = 0;
  long failures = 0;  // solves that did not converge; skipped
  bool resumed = false;
  // log[i][m]: eta of sample i for measure m (keep_log only).
  std::vector<std::vector<double>> log;

  const MeasureRecord& at(NoiseModel m) const;
};

// Sample i of the stream; depends only on (seed, i). Rank-one projective
// sets start with the computational basis; the rest are Haar bases.
MeasurementSet sample_set(const SearchConfig& cfg, long i);

// Deterministic for a fixed config whatever the thread count: chunks are
// solved in parallel and reduced in index order. Throws kDomainError for an
// invalid config, kTooLarge when a parent would exceed the solver limit.
SearchRecord estimate_chi(const SearchConfig& cfg);

int worker_count(int requested);

Json search_config_to_json(const SearchConfig& cfg);
Json search_record_to_json(const SearchRecord& r, bool with_sets = true);

// Qutrit path. Leg 1: B(theta) = U(theta)|b><b|U(theta)^dagger for theta
// in [pi/4, pi/2], from "dev3" to "qMUB3". Leg 2: e^{-itH} U_qMUB with
// e^{iH} = V the principal logarithm of the map V sending qMUB to MUB, for
// t in [0, 1]. The first measurement is always the computational basis.
CMatrix devil_theta_unitary(double theta);
CMatrix devil_t_unitary(double t);
CMatrix devil_v_unitary();
CMatrix qutrit_mub_unitary();
// s in [0, 2]: theta = pi/4 (1 + s) on [0, 1], t = s - 1 on [1, 2].
MeasurementSet devil_path_set(double s);

struct PathPoint {
  double s = 0.0;
  int leg = 1;
  double param = 0.0;  // theta or t
  MeasurementSet set;
};
// resolution >= 2 points on each leg, the shared qMUB point once.
std::vector<PathPoint> devil_path(int resolution);

enum class Figure { kRunex, kDevil, kChi };
std::string_view to_string(Figure f);
Figure parse_figure(std::string_view s);

// Columns:
//   runex  theta, eta_d, eta_r, eta_p, eta_jm, eta_g, closed_d, closed_jm, closed_g
//          (theta on resolution points of [0, pi/4])
//   devil  s, leg, param, eta_d, eta_p, eta_jm, eta_g
//   chi    d, mub_d, best_p, qmub_d, universal_d  (d = 2 .. resolution + 1;
//          best_p is the block qubit MUB value for even d and an SDP on the
//          deviation block pair for odd d <= 7, empty above)
Table figure_curves(Figure f, int resolution, const RobustnessOptions& opts = {});

}  // namespace incompat

#endif  // INCOMPAT_SEARCH_HPP_
