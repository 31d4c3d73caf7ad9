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

// Small dense conic programs over Hermitian PSD cones and scalars.
//
// A ConicProgram is a list of variables (Hermitian PSD or free matrices,
// non-negative or free scalars), linear constraints that are either scalar
// or Hermitian-matrix valued (=, <=, >= with the Loewner order for
// matrices) and a linear objective. solve() compiles it to the standard
// form
//
//   min <C, X>  s.t.  <A_i, X> = b_i,  X in K,
//
// with K a product of Hermitian PSD blocks, a non-negative orthant and free
// scalars (free matrices enter through their coordinates in the orthonormal
// Hermitian basis), and runs a primal-dual interior-point method on it.
//
// Dual multipliers are reported per constraint. With the Lagrangian sign
// used here the dual of a maximization is
//
//   min sum_k <b_k, w_k>  s.t.  A^T w - c in K*,
//
// so multipliers of >= constraints are <= 0 in a maximization; for a
// minimization the dual is max sum_k <b_k, y_k> s.t. c - A^T y in K* and the
// signs flip.

#ifndef INCOMPAT_SDP_HPP_
#define INCOMPAT_SDP_HPP_

#include <string>
#include <variant>
#include <vector>

#include "incompat/linalg.hpp"

namespace incompat::sdp {

enum class Cone { kHermitianPsd, kHermitianFree, kNonnegScalar, kFreeScalar };
enum class Relation { kEqual, kLessEqual, kGreaterEqual };
enum class Sense { kMaximize, kMinimize };
enum class SolveStatus { kOptimal, kInfeasible, kMaxIter };

std::string to_string(SolveStatus s);

using VarId = int;

struct Variable {
  std::string name;
  Cone cone;
  int dim = 0;  // 0 for scalar cones

  bool is_matrix() const { return cone == Cone::kHermitianPsd || cone == Cone::kHermitianFree; }
};

// One term of a linear expression. Its meaning depends on the kinds of the
// expression and the variable:
//   matrix expression, matrix variable X:  scale * X
//   matrix expression, scalar variable x:  x * matrix
//   scalar expression, matrix variable X:  tr(matrix X)
//   scalar expression, scalar variable x:  scale * x
struct Term {
  VarId var;
  double scale = 1.0;
  HermitianMatrix matrix;
};

// Scalar-valued (dim 0) or d x d Hermitian-valued linear expression.
class LinearExpr {
 public:
  explicit LinearExpr(int dim = 0) : dim_(dim) {}

  LinearExpr& add(VarId var, double scale = 1.0);
  LinearExpr& add(VarId var, const HermitianMatrix& matrix);

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  int dim_;
  std::vector<Term> terms_;
};

struct Constraint {
  std::string name;
  LinearExpr lhs;
  Relation relation;
  HermitianMatrix rhs_matrix;  // matrix constraints
  double rhs_scalar = 0.0;     // scalar constraints

  int dim() const { return lhs.dim(); }
};

class ConicProgram {
 public:
  explicit ConicProgram(Sense sense) : sense_(sense) {}

  VarId add_variable(std::string name, Cone cone, int dim = 0);
  int add_constraint(std::string name, LinearExpr lhs, Relation rel, HermitianMatrix rhs);
  int add_constraint(std::string name, LinearExpr lhs, Relation rel, double rhs);
  void set_objective(LinearExpr objective, double constant = 0.0);

  Sense sense() const { return sense_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinearExpr& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }

 private:
  void check_terms(const LinearExpr& e) const;

  Sense sense_;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  LinearExpr objective_{0};
  double objective_constant_ = 0.0;
};

using Value = std::variant<double, HermitianMatrix>;

// Values indexed by VarId.
struct Assignment {
  std::vector<Value> values;

  double scalar(VarId v) const { return std::get<double>(values.at(v)); }
  const HermitianMatrix& matrix(VarId v) const { return std::get<HermitianMatrix>(values.at(v)); }
};

// Value of a constraint left-hand side or of the objective expression.
Value evaluate(const ConicProgram& prog, const LinearExpr& expr, const Assignment& a);

struct FeasibilityReport {
  // Equality: Frobenius (or absolute) deviation; inequality: largest
  // violation (negative eigenvalue of the slack).
  std::vector<double> constraint_residuals;
  // max(0, -lambda_min) for PSD variables, max(0, -x) for non-negative ones.
  std::vector<double> cone_residuals;
  double objective = 0.0;
  double max_residual = 0.0;
  bool feasible = false;
};

FeasibilityReport check_feasible(const ConicProgram& prog, const Assignment& a, double tol);

// Plain-text listing of variables, constraints and objective.
std::string dump(const ConicProgram& prog);

struct SolverOptions {
  double tol = 1e-8;  // relative primal/dual infeasibility and gap
  int max_iter = 100;
  double step_fraction = 0.97;
  bool verbose = false;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::kMaxIter;
  int iterations = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  // Relative measures from the final iterate of the standard form.
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  Assignment primal;
  std::vector<Value> duals;  // one per constraint
  std::string message;
};

ConicSolution solve(const ConicProgram& prog, const SolverOptions& opts = {});

// ---- standard form, exposed for tests and diagnostics ----

struct StandardRow {
  std::vector<std::pair<int, CMatrix>> blocks;  // (block, Hermitian coefficient)
  std::vector<std::pair<int, double>> lp;       // (index, coefficient)
  std::vector<std::pair<int, double>> free;     // (index, coefficient)
  double b = 0.0;
};

struct StandardForm {
  std::vector<int> block_dims;
  int lp_size = 0;
  std::vector<CMatrix> c_blocks;
  RVector c_lp;
  int free_size = 0;
  RVector c_free;
  std::vector<StandardRow> rows;
  double objective_constant = 0.0;  // added to <C, X>
};

struct StandardSolution {
  SolveStatus status = SolveStatus::kMaxIter;
  int iterations = 0;
  std::vector<CMatrix> x_blocks, z_blocks;
  RVector x_lp, z_lp, x_free, y;
  double primal_objective = 0.0, dual_objective = 0.0;
  double primal_infeasibility = 0.0, dual_infeasibility = 0.0, relative_gap = 0.0;
  std::string message;
};

// Minimization form; maximizations are negated.
StandardForm to_standard_form(const ConicProgram& prog);
// Each Hermitian block of size d becomes a real symmetric block of size 2d
// via A -> [[Re A, -Im A], [Im A, Re A]] / 2; optimal values are unchanged.
StandardForm real_embedding(const StandardForm& sf);
StandardSolution solve_standard(const StandardForm& sf, const SolverOptions& opts = {});

}  // namespace incompat::sdp

#endif  // INCOMPAT_SDP_HPP_
