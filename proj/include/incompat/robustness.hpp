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

// Incompatibility robustness of k >= 2 measurements: the largest eta such
// that eta * A + (1 - eta) * N is jointly measurable for some N in the
// noise set. Each measure is a semidefinite program over a parent POVM
// G_j indexed by the row-major multi-index j = (j_1, ..., j_k).
//
// Primal programs (maximize eta), with M_{a|x}(G) = sum_{j: j_x = a} G_j:
//   d, r  M_{a|x}(G) = eta A_{a|x} + (1 - eta) N_{a|x},  0 <= eta <= 1
//   p     M_{a|x}(G) = eta A_{a|x} + pt_{a|x} I,  sum_a pt_{a|x} + eta = 1
//   jm    sum_j G_j = I,  M_{a|x}(G) - M_{a|x}(Ht) = eta A_{a|x},  Ht >= 0
//   g     sum_j G_j = I,  M_{a|x}(G) >= eta A_{a|x}
//
// Dual programs (minimize), with S_j = sum_x X_{j_x|x}:
//   d, r  1 + sum tr(X A)  s.t.  S_j >= 0,  1 + sum tr(X A) - sum tr(X N) >= 0
//   p     1 + sum tr(X A)  s.t.  S_j >= 0,  1 + sum tr(X A) - sum_x xi_x >= 0,
//                                xi_x >= tr X_{a|x}
//   jm    tr N  s.t.  N >= S_j >= 0,  sum tr(X A) >= 1
//   g     tr N  s.t.  N >= S_j,  X >= 0,  sum tr(X A) >= 1

#ifndef INCOMPAT_ROBUSTNESS_HPP_
#define INCOMPAT_ROBUSTNESS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "incompat/noise.hpp"
#include "incompat/povm.hpp"
#include "incompat/sdp.hpp"

namespace incompat {

struct RobustnessOptions {
  double tol = 1e-9;  // interior-point tolerance
  int max_iter = 150;
  std::size_t max_parent_outcomes = 4096;
  // Skip positivity/normalization checks of the input (only shapes are
  // checked). Used to evaluate the programs on slightly invalid inputs.
  bool validate_input = true;
  double input_tol = 1e-8;
};

struct DualCertificate {
  std::vector<std::vector<HermitianMatrix>> x;  // x[measurement][outcome]
  std::optional<HermitianMatrix> n;             // jm, g
  std::vector<double> xi;                       // p
};

struct ResidualReport {
  double marginal = 0.0;       // marginal equations (g: domination violation)
  double parent_psd = 0.0;     // also covers the noise parent for jm
  double normalization = 0.0;  // sum_j G_j = I for jm and g
  double noise = 0.0;          // membership of the noise certificate
  double dual_cone = 0.0;      // dual matrix inequalities before repair
  double dual_scalar = 0.0;    // scalar dual inequalities
  double max() const;
};

struct RobustnessResult {
  NoiseModel measure = NoiseModel::kDepolarising;
  double eta = 0.0;
  ParentPovm parent;
  ParentPovm noise_parent;  // jm: sub-normalized parent Ht of the noise
  NoiseInstance noise;
  DualCertificate dual;
  double certified_bound = 1.0;  // upper bound implied by `dual`
  double gap = 0.0;              // certified_bound - eta
  ResidualReport residuals;
  bool jointly_measurable = false;
  sdp::SolveStatus status = sdp::SolveStatus::kOptimal;
  int iterations = 0;
};

// Variable ids of the primal program: parent[j], eta, then pt[x][a] (p) or
// noise_parent[j] (jm).
struct PrimalLayout {
  std::vector<sdp::VarId> parent;
  sdp::VarId eta = -1;
  std::vector<std::vector<sdp::VarId>> pt;
  std::vector<sdp::VarId> noise_parent;
};

// Variable ids of the dual program.
struct DualLayout {
  std::vector<std::vector<sdp::VarId>> x;
  sdp::VarId n = -1;
  std::vector<sdp::VarId> xi;
};

sdp::ConicProgram build_primal(const MeasurementSet& s, NoiseModel kind,
                               PrimalLayout* layout = nullptr);
sdp::ConicProgram build_dual(const MeasurementSet& s, NoiseModel kind,
                             DualLayout* layout = nullptr);

// Primal point from a parent and eta. pt / noise parent are taken from the
// noise instance (p: distributions, jm: parent) scaled by 1 - eta.
sdp::Assignment primal_assignment(const MeasurementSet& s, NoiseModel kind,
                                  const ParentPovm& parent, double eta,
                                  const NoiseInstance& noise);
// Dual point for build_dual. Missing xi are set to max_a tr X_{a|x}.
sdp::Assignment dual_assignment(const MeasurementSet& s, NoiseModel kind,
                                const DualCertificate& cert);

// Throws kTooLarge, kDomainError (k < 2), kNotNormalized / kShapeMismatch
// for invalid input and kSolverFailure when the solver does not converge.
RobustnessResult solve_robustness(const MeasurementSet& s, NoiseModel kind,
                                  const RobustnessOptions& opts = {});

struct DualCheck {
  double objective = 0.0;        // dual objective as given
  double certified_bound = 1.0;  // after repairing cone violations
  double cone_violation = 0.0;
  double scalar_violation = 0.0;
  bool feasible = false;  // violations <= tol
};

// Any dual point, feasible or not, yields a valid upper bound on eta after
// a cheap repair; certified_bound is that bound (at most 1).
DualCheck certify_dual(const MeasurementSet& s, NoiseModel kind, const DualCertificate& cert,
                       double tol = 1e-9);

struct VerifyReport {
  ResidualReport residuals;
  double certified_bound = 1.0;
  double gap = 0.0;
  bool ok = false;
  std::string detail;
};

// Recomputes every residual of a result from scratch.
VerifyReport verify_result(const MeasurementSet& s, const RobustnessResult& r,
                           double tol = 1e-7);

struct JointMeasurability {
  bool jointly_measurable = false;
  double eta_g = 0.0;
  std::optional<ParentPovm> parent;
};

JointMeasurability is_jointly_measurable(const MeasurementSet& s, double tol = 1e-7,
                                         const RobustnessOptions& opts = {});

}  // namespace incompat

#endif  // INCOMPAT_ROBUSTNESS_HPP_
