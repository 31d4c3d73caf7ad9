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

#include "incompat/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace incompat::sdp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kMaxIter: return "MaxIter";
  }
  return "?";
}

LinearExpr& LinearExpr::add(VarId var, double scale) {
  terms_.push_back({var, scale, HermitianMatrix()});
  return *this;
}

LinearExpr& LinearExpr::add(VarId var, const HermitianMatrix& matrix) {
  terms_.push_back({var, 1.0, matrix});
  return *this;
}

VarId ConicProgram::add_variable(std::string name, Cone cone, int dim) {
  Variable v{std::move(name), cone, dim};
  if (v.is_matrix() && dim < 1) throw Error(ErrorCode::kDomainError, "matrix variable needs dim >= 1");
  if (!v.is_matrix()) v.dim = 0;
  variables_.push_back(std::move(v));
  return static_cast<VarId>(variables_.size() - 1);
}

void ConicProgram::check_terms(const LinearExpr& e) const {
  for (const auto& t : e.terms()) {
    if (t.var < 0 || t.var >= static_cast<VarId>(variables_.size())) {
      throw Error(ErrorCode::kDomainError, "unknown variable in expression");
    }
    const Variable& v = variables_[t.var];
    const bool has_matrix = t.matrix.dim() > 0;
    if (e.dim() > 0) {
      if (v.is_matrix() && (has_matrix || v.dim != e.dim())) {
        throw Error(ErrorCode::kDimensionMismatch, "matrix term in constraint " + v.name);
      }
      if (!v.is_matrix() && (!has_matrix || t.matrix.dim() != e.dim())) {
        throw Error(ErrorCode::kDimensionMismatch, "scalar variable needs a matrix coefficient: " + v.name);
      }
    } else {
      if (v.is_matrix() && (!has_matrix || t.matrix.dim() != v.dim)) {
        throw Error(ErrorCode::kDimensionMismatch, "trace term needs a weight: " + v.name);
      }
      if (!v.is_matrix() && has_matrix) {
        throw Error(ErrorCode::kDimensionMismatch, "scalar term with matrix coefficient: " + v.name);
      }
    }
  }
}

int ConicProgram::add_constraint(std::string name, LinearExpr lhs, Relation rel,
                                 HermitianMatrix rhs) {
  if (lhs.dim() < 1 || rhs.dim() != lhs.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix constraint " + name);
  }
  check_terms(lhs);
  constraints_.push_back({std::move(name), std::move(lhs), rel, std::move(rhs), 0.0});
  return static_cast<int>(constraints_.size() - 1);
}

int ConicProgram::add_constraint(std::string name, LinearExpr lhs, Relation rel, double rhs) {
  if (lhs.dim() != 0) throw Error(ErrorCode::kDimensionMismatch, "scalar constraint " + name);
  check_terms(lhs);
  constraints_.push_back({std::move(name), std::move(lhs), rel, HermitianMatrix(), rhs});
  return static_cast<int>(constraints_.size() - 1);
}

void ConicProgram::set_objective(LinearExpr objective, double constant) {
  if (objective.dim() != 0) throw Error(ErrorCode::kDimensionMismatch, "objective must be scalar");
  check_terms(objective);
  objective_ = std::move(objective);
  objective_constant_ = constant;
}

Value evaluate(const ConicProgram& prog, const LinearExpr& expr, const Assignment& a) {
  const auto& vars = prog.variables();
  if (expr.dim() > 0) {
    HermitianMatrix m(expr.dim());
    for (const auto& t : expr.terms()) {
      if (vars[t.var].is_matrix()) {
        m += t.scale * a.matrix(t.var);
      } else {
        m += a.scalar(t.var) * t.matrix;
      }
    }
    return m;
  }
  double s = 0.0;
  for (const auto& t : expr.terms()) {
    if (vars[t.var].is_matrix()) {
      s += inner(t.matrix, a.matrix(t.var));
    } else {
      s += t.scale * a.scalar(t.var);
    }
  }
  return s;
}

FeasibilityReport check_feasible(const ConicProgram& prog, const Assignment& a, double tol) {
  if (a.values.size() != prog.variables().size()) {
    throw Error(ErrorCode::kShapeMismatch, "assignment size differs from variable count");
  }
  FeasibilityReport r;
  for (const auto& c : prog.constraints()) {
    const Value v = evaluate(prog, c.lhs, a);
    double res = 0.0;
    if (c.dim() > 0) {
      const HermitianMatrix diff = std::get<HermitianMatrix>(v) - c.rhs_matrix;
      switch (c.relation) {
        case Relation::kEqual: res = diff.frobenius_norm(); break;
        case Relation::kGreaterEqual: res = std::max(0.0, -min_eigenvalue(diff)); break;
        case Relation::kLessEqual: res = std::max(0.0, max_eigenvalue(diff)); break;
      }
    } else {
      const double diff = std::get<double>(v) - c.rhs_scalar;
      switch (c.relation) {
        case Relation::kEqual: res = std::abs(diff); break;
        case Relation::kGreaterEqual: res = std::max(0.0, -diff); break;
        case Relation::kLessEqual: res = std::max(0.0, diff); break;
      }
    }
    r.constraint_residuals.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
  for (VarId i = 0; i < static_cast<VarId>(prog.variables().size()); ++i) {
    const Variable& var = prog.variables()[i];
    double res = 0.0;
    if (var.cone == Cone::kHermitianPsd) {
      res = std::max(0.0, -min_eigenvalue(a.matrix(i)));
    } else if (var.cone == Cone::kNonnegScalar) {
      res = std::max(0.0, -a.scalar(i));
    }
    r.cone_residuals.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
  r.objective = std::get<double>(evaluate(prog, prog.objective(), a)) + prog.objective_constant();
  r.feasible = r.max_residual <= tol;
  return r;
}

namespace {

const char* cone_name(Cone c) {
  switch (c) {
    case Cone::kHermitianPsd: return "psd";
    case Cone::kHermitianFree: return "herm";
    case Cone::kNonnegScalar: return "nonneg";
    case Cone::kFreeScalar: return "free";
  }
  return "?";
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::kEqual: return "==";
    case Relation::kLessEqual: return "<=";
    case Relation::kGreaterEqual: return ">=";
  }
  return "?";
}

void dump_expr(std::ostringstream& os, const ConicProgram& prog, const LinearExpr& e) {
  bool first = true;
  for (const auto& t : e.terms()) {
    if (!first) os << " + ";
    first = false;
    const Variable& v = prog.variables()[t.var];
    if (t.matrix.dim() > 0) {
      os << (e.dim() > 0 ? "" : "tr(") << "M" << t.matrix.dim() << "[|M|=" << t.matrix.frobenius_norm()
         << "]*" << v.name << (e.dim() > 0 ? "" : ")");
    } else {
      os << t.scale << "*" << v.name;
    }
  }
  if (first) os << "0";
}

}  // namespace

std::string dump(const ConicProgram& prog) {
  std::ostringstream os;
  os.precision(6);
  os << (prog.sense() == Sense::kMaximize ? "maximize " : "minimize ");
  dump_expr(os, prog, prog.objective());
  if (prog.objective_constant() != 0.0) os << " + " << prog.objective_constant();
  os << "\nvariables (" << prog.variables().size() << "):\n";
  for (const auto& v : prog.variables()) {
    os << "  " << v.name << " : " << cone_name(v.cone);
    if (v.is_matrix()) os << "(" << v.dim << ")";
    os << "\n";
  }
  os << "constraints (" << prog.constraints().size() << "):\n";
  for (const auto& c : prog.constraints()) {
    os << "  [" << c.name << "] ";
    dump_expr(os, prog, c.lhs);
    os << " " << relation_name(c.relation) << " ";
    if (c.dim() > 0) {
      os << "M" << c.dim() << "[|M|=" << c.rhs_matrix.frobenius_norm() << "]";
    } else {
      os << c.rhs_scalar;
    }
    os << "\n";
  }
  return os.str();
}

namespace {

// Where each modeling variable and constraint lives in the standard form.
struct VarSlot {
  int block = -1;  // PSD matrix
  int lp = -1;     // non-negative scalar
  int free = -1;   // first free coordinate (d*d of them for matrices)
};

struct ConstraintSlot {
  int first_row = 0;
  int row_count = 0;
};

struct Compiled {
  StandardForm sf;
  std::vector<VarSlot> vars;
  std::vector<ConstraintSlot> cons;
};

// Accumulates the coefficients of a single row, merging repeated blocks.
class RowBuilder {
 public:
  void add_block(int block, const CMatrix& m) {
    auto it = blocks_.find(block);
    if (it == blocks_.end()) {
      blocks_.emplace(block, m);
    } else {
      it->second += m;
    }
  }
  void add_lp(int idx, double v) {
    if (v != 0.0) lp_[idx] += v;
  }
  void add_free(int idx, double v) {
    if (v != 0.0) free_[idx] += v;
  }
  StandardRow finish(double b) {
    StandardRow row;
    for (auto& [k, m] : blocks_) {
      if (m.cwiseAbs().maxCoeff() > 0.0) row.blocks.emplace_back(k, std::move(m));
    }
    for (auto& [k, v] : lp_) {
      if (v != 0.0) row.lp.emplace_back(k, v);
    }
    for (auto& [k, v] : free_) {
      if (v != 0.0) row.free.emplace_back(k, v);
    }
    row.b = b;
    return row;
  }

 private:
  std::map<int, CMatrix> blocks_;
  std::map<int, double> lp_;
  std::map<int, double> free_;
};

Compiled compile(const ConicProgram& prog) {
  Compiled c;
  StandardForm& sf = c.sf;
  auto new_block = [&sf](int d) {
    sf.block_dims.push_back(d);
    return static_cast<int>(sf.block_dims.size() - 1);
  };
  auto new_lp = [&sf]() { return sf.lp_size++; };
  auto new_free = [&sf](int n) {
    const int first = sf.free_size;
    sf.free_size += n;
    return first;
  };

  for (const auto& v : prog.variables()) {
    VarSlot s;
    switch (v.cone) {
      case Cone::kHermitianPsd: s.block = new_block(v.dim); break;
      case Cone::kHermitianFree: s.free = new_free(v.dim * v.dim); break;
      case Cone::kNonnegScalar: s.lp = new_lp(); break;
      case Cone::kFreeScalar: s.free = new_free(1); break;
    }
    c.vars.push_back(s);
  }

  auto add_matrix_var = [&](RowBuilder& rb, VarId v, const CMatrix& coeff) {
    const VarSlot& s = c.vars[v];
    if (s.block >= 0) {
      rb.add_block(s.block, coeff);
      return;
    }
    const RVector co = hermitian_coordinates(HermitianMatrix::hermitian_part(coeff));
    for (int i = 0; i < co.size(); ++i) rb.add_free(s.free + i, co(i));
  };
  auto add_scalar_var = [&](RowBuilder& rb, VarId v, double coeff) {
    const VarSlot& s = c.vars[v];
    if (s.lp >= 0) {
      rb.add_lp(s.lp, coeff);
    } else {
      rb.add_free(s.free, coeff);
    }
  };

  const auto& vars = prog.variables();
  for (const auto& con : prog.constraints()) {
    ConstraintSlot slot;
    slot.first_row = static_cast<int>(sf.rows.size());
    if (con.dim() == 0) {
      RowBuilder rb;
      for (const auto& t : con.lhs.terms()) {
        if (vars[t.var].is_matrix()) {
          add_matrix_var(rb, t.var, t.matrix.matrix());
        } else {
          add_scalar_var(rb, t.var, t.scale);
        }
      }
      if (con.relation != Relation::kEqual) {
        rb.add_lp(new_lp(), con.relation == Relation::kGreaterEqual ? -1.0 : 1.0);
      }
      sf.rows.push_back(rb.finish(con.rhs_scalar));
      slot.row_count = 1;
    } else {
      const int d = con.dim();
      const auto basis = hermitian_basis(d);
      int slack = -1;
      if (con.relation != Relation::kEqual) slack = new_block(d);
      const double slack_sign = con.relation == Relation::kGreaterEqual ? -1.0 : 1.0;
      for (const auto& e : basis) {
        RowBuilder rb;
        for (const auto& t : con.lhs.terms()) {
          if (vars[t.var].is_matrix()) {
            add_matrix_var(rb, t.var, t.scale * e.matrix());
          } else {
            add_scalar_var(rb, t.var, inner(e, t.matrix));
          }
        }
        if (slack >= 0) rb.add_block(slack, slack_sign * e.matrix());
        sf.rows.push_back(rb.finish(inner(e, con.rhs_matrix)));
      }
      slot.row_count = d * d;
    }
    c.cons.push_back(slot);
  }

  // Objective in minimization form.
  const double sign = prog.sense() == Sense::kMaximize ? -1.0 : 1.0;
  sf.c_blocks.clear();
  for (int d : sf.block_dims) sf.c_blocks.push_back(CMatrix::Zero(d, d));
  sf.c_lp = RVector::Zero(sf.lp_size);
  sf.c_free = RVector::Zero(sf.free_size);
  for (const auto& t : prog.objective().terms()) {
    const VarSlot& s = c.vars[t.var];
    if (vars[t.var].is_matrix()) {
      if (s.block >= 0) {
        sf.c_blocks[s.block] += sign * t.matrix.matrix();
      } else {
        const RVector co = hermitian_coordinates(t.matrix);
        sf.c_free.segment(s.free, co.size()) += sign * co;
      }
    } else if (s.lp >= 0) {
      sf.c_lp(s.lp) += sign * t.scale;
    } else {
      sf.c_free(s.free) += sign * t.scale;
    }
  }
  sf.objective_constant = sign * prog.objective_constant();
  return c;
}

}  // namespace

StandardForm to_standard_form(const ConicProgram& prog) { return compile(prog).sf; }

StandardForm real_embedding(const StandardForm& sf) {
  auto embed = [](const CMatrix& a) {
    const int d = static_cast<int>(a.rows());
    CMatrix out = CMatrix::Zero(2 * d, 2 * d);
    const RMatrix re = a.real(), im = a.imag();
    out.topLeftCorner(d, d) = (0.5 * re).cast<Complex>();
    out.bottomRightCorner(d, d) = (0.5 * re).cast<Complex>();
    out.topRightCorner(d, d) = (-0.5 * im).cast<Complex>();
    out.bottomLeftCorner(d, d) = (0.5 * im).cast<Complex>();
    return out;
  };
  StandardForm out = sf;
  for (auto& d : out.block_dims) d *= 2;
  for (auto& c : out.c_blocks) c = embed(c);
  for (auto& row : out.rows) {
    for (auto& [k, m] : row.blocks) m = embed(m);
  }
  return out;
}

ConicSolution solve(const ConicProgram& prog, const SolverOptions& opts) {
  const Compiled c = compile(prog);
  const StandardSolution ss = solve_standard(c.sf, opts);

  ConicSolution sol;
  sol.status = ss.status;
  sol.iterations = ss.iterations;
  sol.primal_infeasibility = ss.primal_infeasibility;
  sol.dual_infeasibility = ss.dual_infeasibility;
  sol.relative_gap = ss.relative_gap;
  sol.message = ss.message;
  const bool maximize = prog.sense() == Sense::kMaximize;
  sol.primal_objective = maximize ? -ss.primal_objective : ss.primal_objective;
  sol.dual_objective = maximize ? -ss.dual_objective : ss.dual_objective;

  const auto& vars = prog.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const VarSlot& s = c.vars[i];
    if (vars[i].is_matrix()) {
      if (s.block >= 0) {
        sol.primal.values.emplace_back(HermitianMatrix::hermitian_part(ss.x_blocks[s.block]));
      } else {
        const int d = vars[i].dim;
        sol.primal.values.emplace_back(
            from_hermitian_coordinates(ss.x_free.segment(s.free, d * d), d));
      }
    } else {
      sol.primal.values.emplace_back(s.lp >= 0 ? ss.x_lp(s.lp) : ss.x_free(s.free));
    }
  }
  const double dual_sign = maximize ? -1.0 : 1.0;
  const auto& cons = prog.constraints();
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const ConstraintSlot& slot = c.cons[k];
    if (cons[k].dim() == 0) {
      sol.duals.emplace_back(dual_sign * ss.y(slot.first_row));
    } else {
      const RVector seg = dual_sign * ss.y.segment(slot.first_row, slot.row_count);
      sol.duals.emplace_back(from_hermitian_coordinates(seg, cons[k].dim()));
    }
  }
  return sol;
}

}  // namespace incompat::sdp
