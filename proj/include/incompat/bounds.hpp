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

// Analytic bounds on the five robustness measures.
//
// Scalar quantities of a set {A_{a|x}} of k measurements, S_j = sum_x A_{j_x|x}:
//   f      = sum tr(A^2)/d
//   lambda = max_j max spec S_j
//   g_d    = sum (tr A/d)^2      g_r = sum_x 1/n_x
//   g_p    = sum_x min_a tr A/d  g_jm = min_j min spec S_j
// The dual points X_{a|x} = (lambda/k I - A_{a|x})/((f - g) d) (d, r, p),
// X = (A - g_jm/k I)/((f - g_jm) d), N = (lambda - g_jm)/(f - g_jm) I/d (jm)
// and X = A/(f d), N = lambda/f I/d (g) give (lambda - g)/(f - g) and lambda/f.

#ifndef INCOMPAT_BOUNDS_HPP_
#define INCOMPAT_BOUNDS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "incompat/noise.hpp"
#include "incompat/povm.hpp"
#include "incompat/robustness.hpp"

namespace incompat {

struct Quantities {
  double f = 0.0;
  double lambda = 0.0;
  double g_d = 0.0;
  double g_r = 0.0;
  double g_p = 0.0;
  double g_jm = 0.0;
  // Same with every element divided by its trace; absent when an element
  // has zero trace. g_d, g_r and g_p all become k/d in that case.
  std::optional<double> f_tr;
  std::optional<double> lambda_tr;
  std::optional<double> g_tr;
  std::optional<double> g_jm_tr;

  double g(NoiseModel kind) const;
};

// Enumerates all prod_x n_x multi-indices; kTooLarge above 2^22 of them.
Quantities compute_quantities(const MeasurementSet& s);

struct UpperBound {
  double value = 1.0;
  bool trivial = false;  // f == g: every element is a multiple of I
  DualCertificate dual;  // the dual point behind the value
};

UpperBound upper_bound_detail(const MeasurementSet& s, NoiseModel kind);
double upper_bounds(const MeasurementSet& s, NoiseModel kind);
// kZeroTraceElement if some element vanishes. d, r and p share one value.
UpperBound trace_normalized_upper_bound_detail(const MeasurementSet& s, NoiseModel kind);
double trace_normalized_upper_bounds(const MeasurementSet& s, NoiseModel kind);

// Pairs (k = 2): the per-measure closed forms; outcome_counts feeds the
// random and probabilistic bounds. k > 2: the best of the cloning bound and
// the pairing cascade for d, p, jm and g; kDomainError for r.
double universal_lower_bound(NoiseModel kind, int d, const std::vector<int>& outcome_counts,
                             int k = 2);
// (1/k)(1 + (k - 1)/(d + 1)).
double cloning_lower_bound(int d, int k);

// Candidate parent
//   G_ab ~ {A_a, B_b} + alpha_b A_a + beta_a B_b + gamma_ab I
//          + delta (A_a^1/2 B_b A_a^1/2 + B_b^1/2 A_a B_b^1/2)
// rescaled so that sum G_ab = I; kNotNormalized otherwise.
struct AnsatzParent {
  ParentPovm parent;
  double scale = 1.0;  // sum of the unscaled operators is scale * I
  RMatrix min_eigenvalues;
  double min_eigenvalue = 0.0;
  bool psd = false;
  // true when every eigenvalue came from the rank-one closed form.
  bool closed_form = false;
};

AnsatzParent ansatz_parent(const Povm& a, const Povm& b, const std::vector<double>& alpha,
                           const std::vector<double>& beta, const RMatrix& gamma,
                           double delta, double psd_tol = 1e-9);

// Eigenvalues of {A, B} + at A + bt B + gamma I for rank-one A, B with
// tr A tr B > 0, restricted to the span of their ranges (two values); the
// orthogonal complement carries gamma.
std::pair<double, double> rank_one_ansatz_eigenvalues(double tr_a, double tr_b, double tr_ab,
                                                      double at, double bt, double gamma);

// c_ab = sqrt(tr(A_a B_b)/(tr A_a tr B_b)) clamped to [0, 1], 0 when a trace
// vanishes.
RMatrix overlaps(const Povm& a, const Povm& b);

double critical_overlap(NoiseModel kind, int d);  // d, jm, g

struct OverlapSplit {
  double c_minus = 0.0;  // largest overlap below the critical one (0 if none)
  double c_plus = 1.0;   // smallest overlap above it (1 if none)
  bool has_minus = false;
  bool has_plus = false;
  bool at_critical = false;  // some overlap within 1e-9 of the critical one
};

OverlapSplit split_overlaps(const RMatrix& c, double critical, double tol = 1e-9);

struct RefinedBound {
  double value = 0.0;
  double c_crit = 0.0;
  OverlapSplit split;            // overlaps relative to the measure's own c_crit
  OverlapSplit depolarising;     // jm and g also use the depolarising split
  double overlap_bound = 0.0;    // g: the first refinement
  double transferred_bound = 0.0;  // g: refined depolarising bound moved to g
  RMatrix overlaps;
  std::optional<AnsatzParent> parent;  // d and g
};

// Rank-one pairs only (kNotRankOne, kDomainError for k != 2 or kind not in
// {d, jm, g}).
RefinedBound refined_lower_bound(const MeasurementSet& s, NoiseModel kind);

// (1/2)[1 + ((lambda - 1) d_i - 1)/((2 - lambda) d_f + (lambda - 1) d_i - 1)].
double embedding_upper_bound(double inner_lambda, int d_i, int d_f);
// Same construction for a set of k rank-one projective measurements in
// dimension d_i, padded with computational-basis outcomes up to d_f. The
// identity weights of the dual point come from a three-variable linear
// program solved by vertex enumeration.
double embedding_upper_bound(const MeasurementSet& inner, int d_f);
// Complete MUB set of dimension d_i embedded into d_f.
double embedding_table_value(int d_i, int d_f);

// Pairs made of m copies of a rank-one projective pair (A^, B^) of
// dimension d_i on consecutive blocks; kNotBlockStructured otherwise.
double block_structure_p_upper_bound(const MeasurementSet& s, int d_i);

// Limit of the random-robustness upper bound when both measurements of the
// pair are padded with zero outcomes: (2 - lambda)/(f - 2(lambda - 1)).
// kPreconditionFailed unless lambda < 2 and 2(lambda - 1) < f.
double zero_outcome_limit_bound(const MeasurementSet& s);
// Bound for the pair padded to n_f outcomes each.
double zero_outcome_padded_bound(const MeasurementSet& s, int n_f);

enum class Transfer { kJmFromD, kGFromD, kGFromR };
// eta + (1 - eta) * factor, factor 2/(d + sqrt(d^2 + 4d - 4)), 1/d, 1/n_max.
double relation_transfer(double eta, int d, int n_max, Transfer target);

struct CascadeBound {
  double eta = 0.0;
  ParentPovm parent;
  double pair_eta = 0.0;
  std::vector<int> depths;  // depth of each position in the pairing tree
};

// Pairs measurements in input order, level by level, with the universal pair
// parents of d or g, and averages over the k cyclic rotations of the input.
CascadeBound cascade_lower_bound(const MeasurementSet& s, NoiseModel kind);
// Visibility of the symmetrized cascade, (1/k) sum_p pair_eta^depth(p).
double cascade_visibility(int k, double pair_eta);
// Universal pair parent for d or g on arbitrary measurements: elements are
// split into rank-one pieces, combined and summed back.
ParentPovm universal_pair_parent(NoiseModel kind, const Povm& a, const Povm& b);

double mub_closed_form(int d, NoiseModel kind);
// Parent of the depolarised MUB pair mub_pair(d) at the closed-form value.
ParentPovm mub_parent(int d);
// Sub-normalized parent of the jointly measurable noise, d >= 3.
ParentPovm mub_noise_parent(int d);

struct TripletTable {
  double d = 0.0;
  double p = 0.0;
  double jm = 0.0;
  double g = 0.0;
};
TripletTable qubit_triplet_bounds();

struct TripletParent {
  ParentPovm parent;
  double eta = 0.0;
  double min_eigenvalue = 0.0;
  bool psd = false;
  double marginal_residual = 0.0;  // against the depolarised triplet at eta
};
// kNotRankOneQubit unless s is three rank-one qubit measurements.
TripletParent qubit_triplet_parent(const MeasurementSet& s);

struct BoundEntry {
  double value = 0.0;
  std::string tag;
};

struct MeasureBounds {
  NoiseModel measure = NoiseModel::kDepolarising;
  std::vector<BoundEntry> lower;
  std::vector<BoundEntry> upper;
  BoundEntry best_lower;
  BoundEntry best_upper;
};

struct BoundReport {
  Quantities quantities;
  std::vector<MeasureBounds> measures;  // in kAllNoiseModels order
  std::optional<RMatrix> overlaps;      // rank-one pairs
  std::vector<std::pair<std::string, OverlapSplit>> splits;
  std::vector<std::pair<std::string, double>> critical;
  std::vector<std::string> notes;

  const MeasureBounds& at(NoiseModel m) const;
};

// Every bound that applies to s. Upper bounds of a larger measure are also
// listed for the smaller ones (d, r <= p <= jm <= g).
BoundReport bound_report(const MeasurementSet& s);

}  // namespace incompat

#endif  // INCOMPAT_BOUNDS_HPP_
