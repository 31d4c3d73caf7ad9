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

#ifndef INCOMPAT_POVM_HPP_
#define INCOMPAT_POVM_HPP_

#include <random>
#include <string_view>
#include <vector>

#include "incompat/linalg.hpp"

namespace incompat {

// Finite-outcome measurement. Construction checks only the shape (at least
// one element, all of the same dimension); use validate() for positivity
// and normalization so that invalid candidates can still be inspected.
class Povm {
 public:
  explicit Povm(std::vector<HermitianMatrix> elements);

  static Povm computational_basis(int d);
  // Elements u|b><b|u^dagger; throws kNotUnitary.
  static Povm from_basis(const CMatrix& u);
  // n copies of I/n.
  static Povm trivial(int d, int n);

  int dim() const { return dim_; }
  int outcomes() const { return static_cast<int>(elements_.size()); }
  const HermitianMatrix& operator[](int a) const { return elements_[a]; }
  const std::vector<HermitianMatrix>& elements() const { return elements_; }
  HermitianMatrix sum() const;

 private:
  int dim_ = 0;
  std::vector<HermitianMatrix> elements_;
};

struct ValidationReport {
  // max(0, -lambda_min) per element (flattened over measurements for sets).
  std::vector<double> psd_residuals;
  // Largest Frobenius deviation of sum_a A_a from the identity.
  double normalization_residual = 0.0;
  bool valid = false;
};

// PSD tolerance is relative to the element norm; normalization is absolute.
ValidationReport validate(const Povm& p, double tol = 1e-10);

// A set of k measurements on a common space.
class MeasurementSet {
 public:
  explicit MeasurementSet(std::vector<Povm> measurements);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(measurements_.size()); }
  const Povm& operator[](int x) const { return measurements_[x]; }
  const std::vector<Povm>& measurements() const { return measurements_; }
  std::vector<int> outcome_counts() const;
  // Number of parent outcomes, prod_x n_x (saturates at SIZE_MAX).
  std::size_t parent_size() const;

 private:
  int dim_ = 0;
  std::vector<Povm> measurements_;
};

ValidationReport validate(const MeasurementSet& s, double tol = 1e-10);

bool is_rank_one(const Povm& p, double tol = 1e-9);
bool is_projective(const Povm& p, double tol = 1e-9);
bool is_rank_one_projective(const Povm& p, double tol = 1e-9);

// Row-major multi-index over `shape` (first measurement slowest).
std::vector<int> unravel_index(std::size_t j, const std::vector<int>& shape);

// Joint POVM indexed by the row-major multi-index over `shape`.
struct ParentPovm {
  std::vector<int> shape;
  std::vector<HermitianMatrix> elements;

  int dim() const { return elements.empty() ? 0 : elements.front().dim(); }
  // sum of G_j over all j with j_x = a.
  HermitianMatrix marginal(int x, int a) const;
  MeasurementSet marginals() const;
  HermitianMatrix sum() const;
};

// A_a = (1 + (-1)^a (cos t Z + sin t X))/2, B_b likewise with -sin t, for
// a, b in {1, 2}; t in [0, pi/4].
MeasurementSet qubit_theta_pair(double theta);
// Computational basis and Fourier basis.
MeasurementSet mub_pair(int d);
// First k bases of the standard complete MUB set for prime d: computational
// basis followed by (1/sqrt d) sum_l exp(2 pi i (x l^2 + a l)/d)|l> for
// x = 0..d-1; for d = 2 the X and Y eigenbases.
MeasurementSet prime_mub_set(int d, int k);
// Complete set of d+1 MUBs for prime d and for d = 4 (two-qubit Pauli
// stabilizer bases).
MeasurementSet complete_mub_set(int d);

// "qMUB3", "dev3", "qMUB4" (Hadamard + Hadamard blocks) and "qMUB(d)" for
// d >= 2 (qubit MUB on the first two levels, trivial elsewhere). The first
// measurement is the computational basis. Throws kUnknownId.
MeasurementSet named_pair(std::string_view id);
MeasurementSet embedded_qubit_mub(int d);
// Even d: d/2 copies of the qubit MUB pair on consecutive 2-level blocks.
MeasurementSet block_qubit_mub(int d);
// Odd d >= 3: "dev3" on the first three levels and qubit MUB blocks on the
// remaining pairs of levels.
MeasurementSet deviation_block_pair(int d);
// Unitary of "dev3" and "qMUB3".
CMatrix deviation_unitary();
CMatrix qubit_mub3_unitary();

// beta(a', a): column-stochastic, rows are new outcomes. kShapeMismatch if
// columns != outcomes, kDomainError if not stochastic within 1e-12.
Povm apply_post_processing(const Povm& p, const RMatrix& beta);
MeasurementSet apply_post_processing(const MeasurementSet& s,
                                     const std::vector<RMatrix>& betas);

// Lambda(X) = sum_i K_i X K_i^dagger with K_i of shape out_dim x in_dim;
// unital means sum_i K_i K_i^dagger = I_out.
struct UnitalChannel {
  std::vector<CMatrix> kraus;

  int in_dim() const { return static_cast<int>(kraus.front().cols()); }
  int out_dim() const { return static_cast<int>(kraus.front().rows()); }
  HermitianMatrix apply(const HermitianMatrix& x) const;
};

// Throws kNonUnital (1e-10) or kDimensionMismatch.
MeasurementSet apply_pre_processing(const MeasurementSet& s, const UnitalChannel& ch);

// Block-diagonal embedding: inner measurement x acts on the first d_i
// levels, complements[x] on the remaining ones; outcomes are the inner
// outcomes followed by the complement outcomes.
MeasurementSet embed_set(const MeasurementSet& inner,
                         const std::vector<Povm>& complements);
MeasurementSet embed_pair(const MeasurementSet& inner, const Povm& m, const Povm& n);

// (1 - p) a + p b, elementwise.
Povm mix(const Povm& a, const Povm& b, double p);
MeasurementSet mix(const MeasurementSet& a, const MeasurementSet& b, double p);
MeasurementSet conjugate(const MeasurementSet& s, const CMatrix& u);

// Random measurements. Bases are Haar; rank-one POVMs come from the rows of
// a Haar unitary of size n >= d; general POVMs from a Haar isometry into
// C^(n d) split into n blocks (Naimark).
Povm random_basis(int d, std::mt19937_64& rng);
Povm random_rank_one_povm(int d, int n, std::mt19937_64& rng);
Povm random_povm(int d, int n, std::mt19937_64& rng);
// Haar basis with its vectors grouped round-robin into n <= d outcomes.
Povm random_coarse_basis(int d, int n, std::mt19937_64& rng);
// Random column-stochastic matrix of shape n_out x n_in.
RMatrix random_stochastic(int n_out, int n_in, std::mt19937_64& rng);
// Random unital channel from a Haar isometry split into `kraus_count` blocks.
UnitalChannel random_unital_channel(int in_dim, int out_dim, int kraus_count,
                                    std::mt19937_64& rng);

}  // namespace incompat

#endif  // INCOMPAT_POVM_HPP_
