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

// Reproduction targets: published values, counterexamples and figure data,
// each recomputed and compared with a tolerance (1e-4 when a value comes
// from an SDP solve, 1e-9 for closed forms).

#ifndef INCOMPAT_REPRO_HPP_
#define INCOMPAT_REPRO_HPP_

#include <string>
#include <utility>
#include <vector>

#include "incompat/io.hpp"
#include "incompat/povm.hpp"
#include "incompat/robustness.hpp"

namespace incompat {

inline constexpr double kSdpTol = 1e-4;
inline constexpr double kClosedTol = 1e-9;

struct ReproCheck {
  std::string name;
  std::string relation;  // "=", "<=", "<"
  double actual = 0.0;
  double expected = 0.0;  // right-hand side for "<=" and "<"
  double tol = 0.0;
  bool pass = false;
};

struct ReproResult {
  std::string target;
  std::vector<ReproCheck> checks;
  std::vector<std::pair<std::string, Table>> tables;
  std::vector<std::string> notes;
  bool pass = true;
};

// table-magic, fig-runex, fig-devil, fig-chi, mub-values, ctrex-1 .. ctrex-5,
// triplet-qubit, table-embed.
const std::vector<std::string>& repro_targets();

// kUnknownId for other ids.
ReproResult reproduce(std::string_view target, const RobustnessOptions& opts = {});

// <dir>/<target>[-<table>].csv and <dir>/<target>.json.
void write_repro_outputs(const ReproResult& r, const std::string& dir);
Json repro_to_json(const ReproResult& r);

// Counterexample constructions.
// Qubit MUB pair pre-processed into a qutrit by K1 = [[1,0],[0,1],[0,0]],
// K2 = [[0,0],[0,0],[0,1]].
UnitalChannel ctrex_channel();
MeasurementSet ctrex_preprocessed_pair();
// Dual point of the depolarising program for that pair.
DualCertificate ctrex_preprocessed_dual();
// Qubit MUB pair with A split as (A_1/2, A_1/2, A_2).
MeasurementSet ctrex_split_pair();
// Dual point of the random program for that pair.
DualCertificate ctrex_split_dual();
// (A^0, B^0) and (A^1, B^1) of the non-convexity example.
MeasurementSet ctrex_convexity_pair(int which);
// Qutrit pair of the incomparability example. The published B_1 has a
// slightly negative eigenvalue; `corrected` uses 1/24 for its (1,1) entry
// (and 23/24 for B_2).
MeasurementSet ctrex_qutrit_pair(bool corrected = false);
// (A^0, B^0) and (A^1, B^1) of the non-concavity example, with the unitary
// U_B = [[sqrt(1/5), sqrt(4/5)], [sqrt(4/5), -sqrt(1/5)]].
MeasurementSet ctrex_concavity_pair(int which);

}  // namespace incompat

#endif  // INCOMPAT_REPRO_HPP_
