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

#include "incompat/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace incompat {

namespace {

using sdp::Cone;
using sdp::LinearExpr;
using sdp::Relation;

constexpr double kCompatibleTol = 1e-7;

// members[x][a] = parent indices j with j_x = a.
std::vector<std::vector<std::vector<std::size_t>>> marginal_members(const std::vector<int>& shape) {
  std::size_t total = 1;
  for (int n : shape) total *= static_cast<std::size_t>(n);
  std::vector<std::vector<std::vector<std::size_t>>> m(shape.size());
  for (std::size_t x = 0; x < shape.size(); ++x) m[x].resize(shape[x]);
  for (std::size_t j = 0; j < total; ++j) {
    const auto idx = unravel_index(j, shape);
    for (std::size_t x = 0; x < shape.size(); ++x) m[x][idx[x]].push_back(j);
  }
  return m;
}

// Noise for d and r.
MeasurementSet fixed_noise(const MeasurementSet& s, NoiseModel kind) {
  return canonical_noise(kind, s);
}

void check_input(const MeasurementSet& s, const RobustnessOptions& opts) {
  if (s.size() < 2) throw Error(ErrorCode::kDomainError, "need at least two measurements");
  if (s.parent_size() > opts.max_parent_outcomes) {
    std::ostringstream os;
    os << "parent would have " << s.parent_size() << " outcomes (cap "
       << opts.max_parent_outcomes << ")";
    throw Error(ErrorCode::kTooLarge, os.str());
  }
  if (opts.validate_input) {
    const ValidationReport v = validate(s, opts.input_tol);
    if (!v.valid) {
      std::ostringstream os;
      double psd = 0.0;
      for (double p : v.psd_residuals) psd = std::max(psd, p);
      os << "invalid measurement set (psd residual " << psd << ", normalization residual "
         << v.normalization_residual << ")";
      throw Error(ErrorCode::kNotNormalized, os.str());
    }
  }
}

// S_j = sum_x X_{j_x|x}.
std::vector<HermitianMatrix> combine(const MeasurementSet& s,
                                     const std::vector<std::vector<HermitianMatrix>>& x) {
  const auto shape = s.outcome_counts();
  const std::size_t total = s.parent_size();
  std::vector<HermitianMatrix> out;
  out.reserve(total);
  for (std::size_t j = 0; j < total; ++j) {
    const auto idx = unravel_index(j, shape);
    HermitianMatrix acc = HermitianMatrix::zero(s.dim());
    for (int m = 0; m < s.size(); ++m) acc += x[m][idx[m]];
    out.push_back(std::move(acc));
  }
  return out;
}

double neg_part(double v) { return std::max(0.0, -v); }

// Extra shift on top of the measured violation so that rounding in the
// eigenvalues cannot make a degenerate certificate look better than it is.
double rounding_margin(const DualCertificate& c) {
  double scale = 1.0;
  for (const auto& row : c.x) {
    for (const auto& e : row) scale = std::max(scale, e.max_abs());
  }
  if (c.n) scale = std::max(scale, c.n->max_abs());
  return 1e-12 * scale;
}

double min_eig_all(const std::vector<HermitianMatrix>& ms) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& m : ms) lo = std::min(lo, min_eigenvalue(m));
  return lo;
}

void check_cert_shape(const MeasurementSet& s, NoiseModel kind, const DualCertificate& c) {
  bool ok = static_cast<int>(c.x.size()) == s.size();
  for (int m = 0; ok && m < s.size(); ++m) {
    ok = static_cast<int>(c.x[m].size()) == s[m].outcomes();
    for (const auto& e : c.x[m]) ok = ok && e.dim() == s.dim();
  }
  if ((kind == NoiseModel::kJointlyMeasurable || kind == NoiseModel::kGeneralised) &&
      (!c.n || c.n->dim() != s.dim())) {
    ok = false;
  }
  if (!ok) throw Error(ErrorCode::kShapeMismatch, "dual certificate shape differs from the set");
}

// Normalized noise from a possibly unnormalized PSD candidate.
MeasurementSet renormalize(std::vector<std::vector<HermitianMatrix>> el, int d) {
  std::vector<Povm> out;
  for (auto& row : el) {
    HermitianMatrix sum = HermitianMatrix::zero(d);
    for (auto& e : row) {
      e = psd_part(e);
      sum += e;
    }
    if (min_eigenvalue(sum) > 1e-12) {
      const HermitianMatrix w = inverse_sqrt(sum);
      for (auto& e : row) e = conjugate(e, w.matrix());
    } else {
      const int n = static_cast<int>(row.size());
      for (auto& e : row) e = HermitianMatrix::identity(d) * (1.0 / n);
    }
    out.emplace_back(std::move(row));
  }
  return MeasurementSet(std::move(out));
}

ResidualReport primal_residuals(const MeasurementSet& s, NoiseModel kind, const ParentPovm& g,
                                const ParentPovm& ht, double eta, const NoiseInstance& noise,
                                const std::vector<std::vector<double>>& pt) {
  ResidualReport r;
  const int d = s.dim();
  for (const auto& e : g.elements) r.parent_psd = std::max(r.parent_psd, neg_part(min_eigenvalue(e)));
  for (const auto& e : ht.elements) r.parent_psd = std::max(r.parent_psd, neg_part(min_eigenvalue(e)));
  const MeasurementSet marg = g.marginals();
  std::optional<MeasurementSet> hmarg;
  if (kind == NoiseModel::kJointlyMeasurable && !ht.elements.empty()) hmarg = ht.marginals();
  std::optional<MeasurementSet> fixed;
  if (kind == NoiseModel::kDepolarising || kind == NoiseModel::kRandom) fixed = fixed_noise(s, kind);
  for (int x = 0; x < s.size(); ++x) {
    for (int a = 0; a < s[x].outcomes(); ++a) {
      const HermitianMatrix& m = marg[x][a];
      double res = 0.0;
      switch (kind) {
        case NoiseModel::kDepolarising:
        case NoiseModel::kRandom:
          res = (m - (s[x][a] * eta + (*fixed)[x][a] * (1.0 - eta))).frobenius_norm();
          break;
        case NoiseModel::kProbabilistic:
          res = (m - s[x][a] * eta - HermitianMatrix::identity(d) * pt[x][a]).frobenius_norm();
          break;
        case NoiseModel::kJointlyMeasurable: {
          HermitianMatrix lhs = m - s[x][a] * eta;
          if (hmarg) lhs -= (*hmarg)[x][a];
          res = lhs.frobenius_norm();
          break;
        }
        case NoiseModel::kGeneralised:
          res = neg_part(min_eigenvalue(m - s[x][a] * eta));
          break;
      }
      r.marginal = std::max(r.marginal, res);
    }
  }
  if (kind == NoiseModel::kJointlyMeasurable || kind == NoiseModel::kGeneralised) {
    r.normalization = (g.sum() - HermitianMatrix::identity(d)).frobenius_norm();
  }
  if (kind == NoiseModel::kProbabilistic) {
    for (const auto& row : pt) {
      double sum = eta;
      for (double v : row) {
        r.marginal = std::max(r.marginal, neg_part(v));
        sum += v;
      }
      r.marginal = std::max(r.marginal, std::abs(sum - 1.0));
    }
  }
  r.noise = membership_check(kind, s, noise, 1e-7).residual;
  return r;
}

}  // namespace

double ResidualReport::max() const {
  return std::max({marginal, parent_psd, normalization, noise, dual_cone, dual_scalar});
}

sdp::ConicProgram build_primal(const MeasurementSet& s, NoiseModel kind, PrimalLayout* layout) {
  const int d = s.dim();
  const auto shape = s.outcome_counts();
  const std::size_t total = s.parent_size();
  const auto members = marginal_members(shape);
  sdp::ConicProgram prog(sdp::Sense::kMaximize);
  PrimalLayout lay;
  for (std::size_t j = 0; j < total; ++j) {
    lay.parent.push_back(prog.add_variable("G" + std::to_string(j), Cone::kHermitianPsd, d));
  }
  lay.eta = prog.add_variable("eta", Cone::kNonnegScalar);
  if (kind == NoiseModel::kProbabilistic) {
    lay.pt.resize(s.size());
    for (int x = 0; x < s.size(); ++x) {
      for (int a = 0; a < s[x].outcomes(); ++a) {
        lay.pt[x].push_back(prog.add_variable(
            "p" + std::to_string(x) + "_" + std::to_string(a), Cone::kNonnegScalar));
      }
    }
  }
  if (kind == NoiseModel::kJointlyMeasurable) {
    for (std::size_t j = 0; j < total; ++j) {
      lay.noise_parent.push_back(prog.add_variable("H" + std::to_string(j), Cone::kHermitianPsd, d));
    }
  }
  const HermitianMatrix id = HermitianMatrix::identity(d);
  if (kind == NoiseModel::kJointlyMeasurable || kind == NoiseModel::kGeneralised) {
    LinearExpr sum(d);
    for (auto v : lay.parent) sum.add(v);
    prog.add_constraint("normalization", std::move(sum), Relation::kEqual, id);
  }
  std::optional<MeasurementSet> noise;
  if (kind == NoiseModel::kDepolarising || kind == NoiseModel::kRandom) noise = fixed_noise(s, kind);
  for (int x = 0; x < s.size(); ++x) {
    for (int a = 0; a < s[x].outcomes(); ++a) {
      const std::string name = "marginal" + std::to_string(x) + "_" + std::to_string(a);
      LinearExpr e(d);
      for (std::size_t j : members[x][a]) e.add(lay.parent[j]);
      switch (kind) {
        case NoiseModel::kDepolarising:
        case NoiseModel::kRandom:
          e.add(lay.eta, (*noise)[x][a] - s[x][a]);
          prog.add_constraint(name, std::move(e), Relation::kEqual, (*noise)[x][a]);
          break;
        case NoiseModel::kProbabilistic:
          e.add(lay.eta, -s[x][a]);
          e.add(lay.pt[x][a], -id);
          prog.add_constraint(name, std::move(e), Relation::kEqual, HermitianMatrix::zero(d));
          break;
        case NoiseModel::kJointlyMeasurable:
          for (std::size_t j : members[x][a]) e.add(lay.noise_parent[j], -1.0);
          e.add(lay.eta, -s[x][a]);
          prog.add_constraint(name, std::move(e), Relation::kEqual, HermitianMatrix::zero(d));
          break;
        case NoiseModel::kGeneralised:
          e.add(lay.eta, -s[x][a]);
          prog.add_constraint(name, std::move(e), Relation::kGreaterEqual,
                              HermitianMatrix::zero(d));
          break;
      }
    }
  }
  if (kind == NoiseModel::kDepolarising || kind == NoiseModel::kRandom) {
    LinearExpr e(0);
    e.add(lay.eta);
    prog.add_constraint("eta_max", std::move(e), Relation::kLessEqual, 1.0);
  }
  if (kind == NoiseModel::kProbabilistic) {
    for (int x = 0; x < s.size(); ++x) {
      LinearExpr e(0);
      e.add(lay.eta);
      for (auto v : lay.pt[x]) e.add(v);
      prog.add_constraint("distribution" + std::to_string(x), std::move(e), Relation::kEqual, 1.0);
    }
  }
  LinearExpr obj(0);
  obj.add(lay.eta);
  prog.set_objective(std::move(obj));
  if (layout) *layout = std::move(lay);
  return prog;
}

sdp::ConicProgram build_dual(const MeasurementSet& s, NoiseModel kind, DualLayout* layout) {
  const int d = s.dim();
  const auto shape = s.outcome_counts();
  const std::size_t total = s.parent_size();
  sdp::ConicProgram prog(sdp::Sense::kMinimize);
  DualLayout lay;
  const Cone xcone = kind == NoiseModel::kGeneralised ? Cone::kHermitianPsd : Cone::kHermitianFree;
  lay.x.resize(s.size());
  for (int x = 0; x < s.size(); ++x) {
    for (int a = 0; a < s[x].outcomes(); ++a) {
      lay.x[x].push_back(
          prog.add_variable("X" + std::to_string(x) + "_" + std::to_string(a), xcone, d));
    }
  }
  const bool has_n = kind == NoiseModel::kJointlyMeasurable || kind == NoiseModel::kGeneralised;
  if (has_n) lay.n = prog.add_variable("N", Cone::kHermitianFree, d);
  if (kind == NoiseModel::kProbabilistic) {
    for (int x = 0; x < s.size(); ++x) {
      lay.xi.push_back(prog.add_variable("xi" + std::to_string(x), Cone::kFreeScalar));
    }
  }
  for (std::size_t j = 0; j < total; ++j) {
    const auto idx = unravel_index(j, shape);
    LinearExpr sj(d);
    for (int x = 0; x < s.size(); ++x) sj.add(lay.x[x][idx[x]]);
    if (kind != NoiseModel::kGeneralised) {
      prog.add_constraint("S" + std::to_string(j), sj, Relation::kGreaterEqual,
                          HermitianMatrix::zero(d));
    }
    if (has_n) {
      LinearExpr e(d);
      e.add(lay.n);
      for (int x = 0; x < s.size(); ++x) e.add(lay.x[x][idx[x]], -1.0);
      prog.add_constraint("N-S" + std::to_string(j), std::move(e), Relation::kGreaterEqual,
                          HermitianMatrix::zero(d));
    }
  }
  // sum tr(X A)
  LinearExpr xa(0);
  for (int x = 0; x < s.size(); ++x) {
    for (int a = 0; a < s[x].outcomes(); ++a) xa.add(lay.x[x][a], s[x][a]);
  }
  if (kind == NoiseModel::kDepolarising || kind == NoiseModel::kRandom) {
    const MeasurementSet noise = fixed_noise(s, kind);
    LinearExpr e(0);
    for (int x = 0; x < s.size(); ++x) {
      for (int a = 0; a < s[x].outcomes(); ++a) e.add(lay.x[x][a], s[x][a] - noise[x][a]);
    }
    prog.add_constraint("scalar", std::move(e), Relation::kGreaterEqual, -1.0);
    prog.set_objective(xa, 1.0);
  } else if (kind == NoiseModel::kProbabilistic) {
    LinearExpr e = xa;
    for (auto v : lay.xi) e.add(v, -1.0);
    prog.add_constraint("scalar", std::move(e), Relation::kGreaterEqual, -1.0);
    const HermitianMatrix id = HermitianMatrix::identity(d);
    for (int x = 0; x < s.size(); ++x) {
      for (int a = 0; a < s[x].outcomes(); ++a) {
        LinearExpr t(0);
        t.add(lay.xi[x], 1.0);
        t.add(lay.x[x][a], -id);
        prog.add_constraint("xi" + std::to_string(x) + "_" + std::to_string(a), std::move(t),
                            Relation::kGreaterEqual, 0.0);
      }
    }
    prog.set_objective(xa, 1.0);
  } else {
    prog.add_constraint("scalar", xa, Relation::kGreaterEqual, 1.0);
    LinearExpr obj(0);
    obj.add(lay.n, HermitianMatrix::identity(d));
    prog.set_objective(std::move(obj));
  }
  if (layout) *layout = std::move(lay);
  return prog;
}

sdp::Assignment primal_assignment(const MeasurementSet& s, NoiseModel kind,
                                  const ParentPovm& parent, double eta,
                                  const NoiseInstance& noise) {
  PrimalLayout lay;
  const sdp::ConicProgram prog = build_primal(s, kind, &lay);
  if (parent.elements.size() != lay.parent.size()) {
    throw Error(ErrorCode::kShapeMismatch, "parent size differs from the program");
  }
  sdp::Assignment a;
  a.values.resize(prog.variables().size(), 0.0);
  for (std::size_t j = 0; j < lay.parent.size(); ++j) a.values[lay.parent[j]] = parent.elements[j];
  a.values[lay.eta] = eta;
  if (kind == NoiseModel::kProbabilistic) {
    for (int x = 0; x < s.size(); ++x) {
      for (int i = 0; i < s[x].outcomes(); ++i) {
        double p = 1.0 / s[x].outcomes();
        if (!noise.distributions.empty()) {
          p = noise.distributions.at(x).at(i);
        } else if (noise.noise) {
          p = (*noise.noise)[x][i].trace() / s.dim();
        }
        a.values[lay.pt[x][i]] = (1.0 - eta) * p;
      }
    }
  }
  if (kind == NoiseModel::kJointlyMeasurable) {
    const NoiseInstance fallback = canonical_instance(kind, s);
    const ParentPovm& h = noise.parent ? *noise.parent : *fallback.parent;
    if (h.elements.size() != lay.noise_parent.size()) {
      throw Error(ErrorCode::kShapeMismatch, "noise parent size differs from the program");
    }
    for (std::size_t j = 0; j < lay.noise_parent.size(); ++j) {
      a.values[lay.noise_parent[j]] = h.elements[j] * (1.0 - eta);
    }
  }
  return a;
}

sdp::Assignment dual_assignment(const MeasurementSet& s, NoiseModel kind,
                                const DualCertificate& cert) {
  check_cert_shape(s, kind, cert);
  DualLayout lay;
  const sdp::ConicProgram prog = build_dual(s, kind, &lay);
  sdp::Assignment a;
  a.values.resize(prog.variables().size(), 0.0);
  for (int x = 0; x < s.size(); ++x) {
    for (int i = 0; i < s[x].outcomes(); ++i) a.values[lay.x[x][i]] = cert.x[x][i];
  }
  if (lay.n >= 0) a.values[lay.n] = *cert.n;
  for (int x = 0; x < static_cast<int>(lay.xi.size()); ++x) {
    double xi = -std::numeric_limits<double>::infinity();
    if (x < static_cast<int>(cert.xi.size())) {
      xi = cert.xi[x];
    } else {
      for (const auto& e : cert.x[x]) xi = std::max(xi, e.trace());
    }
    a.values[lay.xi[x]] = xi;
  }
  return a;
}

DualCheck certify_dual(const MeasurementSet& s, NoiseModel kind, const DualCertificate& cert,
                       double tol) {
  check_cert_shape(s, kind, cert);
  const int d = s.dim();
  const double margin = rounding_margin(cert);
  DualCheck out;
  auto x = cert.x;
  double d_val = 0.0;
  for (int m = 0; m < s.size(); ++m) {
    for (int a = 0; a < s[m].outcomes(); ++a) d_val += inner(x[m][a], s[m][a]);
  }
  const HermitianMatrix id = HermitianMatrix::identity(d);
  switch (kind) {
    case NoiseModel::kDepolarising:
    case NoiseModel::kRandom: {
      const MeasurementSet noise = fixed_noise(s, kind);
      double t_val = 0.0;
      for (int m = 0; m < s.size(); ++m) {
        for (int a = 0; a < s[m].outcomes(); ++a) t_val += inner(x[m][a], noise[m][a]);
      }
      out.objective = 1.0 + d_val;
      out.cone_violation = neg_part(min_eig_all(combine(s, x)));
      out.scalar_violation = neg_part(1.0 + d_val - t_val);
      // Shifting every X_{a|1} by eps I adds eps to each S_j and eps d to
      // both sums.
      const double eps = out.cone_violation + margin;
      d_val += eps * d;
      t_val += eps * d;
      out.certified_bound = t_val > d_val ? std::min(1.0, t_val / (t_val - d_val)) : 1.0;
      break;
    }
    case NoiseModel::kProbabilistic: {
      out.objective = 1.0 + d_val;
      out.cone_violation = neg_part(min_eig_all(combine(s, x)));
      const double eps = out.cone_violation + margin;
      double t_max = 0.0;
      double xi_sum = 0.0;
      for (int m = 0; m < s.size(); ++m) {
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& e : x[m]) hi = std::max(hi, e.trace());
        t_max += hi;
        const double xi = m < static_cast<int>(cert.xi.size()) ? cert.xi[m] : hi;
        xi_sum += xi;
        out.scalar_violation = std::max(out.scalar_violation, neg_part(xi - hi));
      }
      out.scalar_violation = std::max(out.scalar_violation, neg_part(1.0 + d_val - xi_sum));
      d_val += eps * d;
      t_max += eps * d;
      out.certified_bound = t_max > d_val ? std::min(1.0, t_max / (t_max - d_val)) : 1.0;
      break;
    }
    case NoiseModel::kJointlyMeasurable: {
      HermitianMatrix n = *cert.n;
      out.objective = n.trace();
      auto sj = combine(s, x);
      const double eps = neg_part(min_eig_all(sj));
      double viol = eps;
      for (const auto& m : sj) viol = std::max(viol, neg_part(min_eigenvalue(n - m)));
      out.cone_violation = viol;
      out.scalar_violation = neg_part(d_val - 1.0);
      if (eps > 0.0) {
        for (auto& e : x[0]) e += id * eps;
        for (auto& m : sj) m += id * eps;
        d_val += eps * d;
      }
      double delta = 0.0;
      for (const auto& m : sj) delta = std::max(delta, neg_part(min_eigenvalue(n - m)));
      n += id * (delta + margin);
      out.certified_bound = d_val > 0.0 ? std::min(1.0, n.trace() / d_val) : 1.0;
      break;
    }
    case NoiseModel::kGeneralised: {
      HermitianMatrix n = *cert.n;
      out.objective = n.trace();
      double viol = 0.0;
      for (auto& row : x) {
        for (auto& e : row) {
          viol = std::max(viol, neg_part(min_eigenvalue(e)));
          e = psd_part(e);
        }
      }
      d_val = 0.0;
      for (int m = 0; m < s.size(); ++m) {
        for (int a = 0; a < s[m].outcomes(); ++a) d_val += inner(x[m][a], s[m][a]);
      }
      const auto sj = combine(s, x);
      double delta = 0.0;
      for (const auto& m : sj) delta = std::max(delta, neg_part(min_eigenvalue(n - m)));
      // Violation of the unrepaired certificate.
      for (const auto& m : combine(s, cert.x)) viol = std::max(viol, neg_part(min_eigenvalue(n - m)));
      out.cone_violation = viol;
      double raw = 0.0;
      for (int m = 0; m < s.size(); ++m) {
        for (int a = 0; a < s[m].outcomes(); ++a) raw += inner(cert.x[m][a], s[m][a]);
      }
      out.scalar_violation = neg_part(raw - 1.0);
      n += id * (delta + margin);
      out.certified_bound = d_val > 0.0 ? std::min(1.0, n.trace() / d_val) : 1.0;
      break;
    }
  }
  out.feasible = out.cone_violation <= tol && out.scalar_violation <= tol;
  return out;
}

RobustnessResult solve_robustness(const MeasurementSet& s, NoiseModel kind,
                                  const RobustnessOptions& opts) {
  check_input(s, opts);
  const int d = s.dim();
  PrimalLayout lay;
  const sdp::ConicProgram prog = build_primal(s, kind, &lay);
  sdp::SolverOptions so;
  so.tol = opts.tol;
  so.max_iter = opts.max_iter;
  const sdp::ConicSolution sol = sdp::solve(prog, so);
  const double worst =
      std::max({sol.primal_infeasibility, sol.dual_infeasibility, sol.relative_gap});
  if (sol.status == sdp::SolveStatus::kInfeasible ||
      (sol.status != sdp::SolveStatus::kOptimal && worst > 1e-6)) {
    std::ostringstream os;
    os << "robustness " << short_name(kind) << ": " << sdp::to_string(sol.status)
       << " after " << sol.iterations << " iterations (primal infeasibility "
       << sol.primal_infeasibility << ", dual infeasibility " << sol.dual_infeasibility
       << ", gap " << sol.relative_gap << ")";
    if (!sol.message.empty()) os << ": " << sol.message;
    throw Error(ErrorCode::kSolverFailure, os.str());
  }

  RobustnessResult r;
  r.measure = kind;
  r.status = sol.status;
  r.iterations = sol.iterations;
  const double eta_raw = sol.primal.scalar(lay.eta);
  r.eta = std::clamp(eta_raw, 0.0, 1.0);
  r.parent.shape = s.outcome_counts();
  for (auto v : lay.parent) r.parent.elements.push_back(sol.primal.matrix(v));

  // Noise certificate.
  const double rest = 1.0 - r.eta;
  const bool degenerate = rest <= 1e-9;
  r.noise = canonical_instance(kind, s);
  std::vector<std::vector<double>> pt;
  switch (kind) {
    case NoiseModel::kDepolarising:
    case NoiseModel::kRandom:
      break;
    case NoiseModel::kProbabilistic: {
      pt.resize(s.size());
      std::vector<Povm> noise;
      r.noise.distributions.clear();
      for (int x = 0; x < s.size(); ++x) {
        std::vector<double> p;
        double total = 0.0;
        for (auto v : lay.pt[x]) {
          pt[x].push_back(sol.primal.scalar(v));
          p.push_back(std::max(0.0, sol.primal.scalar(v)));
          total += p.back();
        }
        if (degenerate || total <= 0.0) {
          std::fill(p.begin(), p.end(), 1.0 / p.size());
        } else {
          for (double& v : p) v /= total;
        }
        std::vector<HermitianMatrix> el;
        for (double v : p) el.push_back(HermitianMatrix::identity(d) * v);
        noise.emplace_back(std::move(el));
        r.noise.distributions.push_back(std::move(p));
      }
      r.noise.noise = MeasurementSet(std::move(noise));
      break;
    }
    case NoiseModel::kJointlyMeasurable: {
      r.noise_parent.shape = s.outcome_counts();
      for (auto v : lay.noise_parent) r.noise_parent.elements.push_back(sol.primal.matrix(v));
      if (!degenerate) {
        ParentPovm h;
        h.shape = r.noise_parent.shape;
        HermitianMatrix sum = HermitianMatrix::zero(d);
        for (const auto& e : r.noise_parent.elements) {
          h.elements.push_back(psd_part(e));
          sum += h.elements.back();
        }
        if (min_eigenvalue(sum) > 1e-12) {
          const HermitianMatrix w = inverse_sqrt(sum);
          for (auto& e : h.elements) e = conjugate(e, w.matrix());
          r.noise.noise = h.marginals();
          r.noise.parent = std::move(h);
        }
      }
      break;
    }
    case NoiseModel::kGeneralised: {
      if (!degenerate) {
        const MeasurementSet marg = r.parent.marginals();
        std::vector<std::vector<HermitianMatrix>> el(s.size());
        for (int x = 0; x < s.size(); ++x) {
          for (int a = 0; a < s[x].outcomes(); ++a) {
            el[x].push_back((marg[x][a] - s[x][a] * r.eta) * (1.0 / rest));
          }
        }
        r.noise.noise = renormalize(std::move(el), d);
      }
      break;
    }
  }

  // Dual certificate. For the maximization the multipliers w satisfy the
  // dual in the orientation documented in the header up to sign.
  r.dual.x.resize(s.size());
  int c = 0;
  const auto& cons = prog.constraints();
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const std::string& name = cons[i].name;
    const sdp::Value& w = sol.duals[i];
    if (name == "normalization") {
      r.dual.n = std::get<HermitianMatrix>(w);
    } else if (name.rfind("marginal", 0) == 0) {
      HermitianMatrix m = std::get<HermitianMatrix>(w);
      if (kind == NoiseModel::kJointlyMeasurable || kind == NoiseModel::kGeneralised) m = -m;
      int x = 0;
      int acc = 0;
      while (c - acc >= s[x].outcomes()) acc += s[x++].outcomes();
      r.dual.x[x].push_back(std::move(m));
      ++c;
    } else if (name.rfind("distribution", 0) == 0) {
      r.dual.xi.push_back(std::get<double>(w));
    }
  }
  const DualCheck dc = certify_dual(s, kind, r.dual, 1e-7);
  r.certified_bound = dc.certified_bound;
  r.gap = r.certified_bound - r.eta;

  r.residuals = primal_residuals(s, kind, r.parent, r.noise_parent, r.eta, r.noise, pt);
  r.residuals.dual_cone = dc.cone_violation;
  r.residuals.dual_scalar = dc.scalar_violation;
  r.jointly_measurable = eta_raw >= 1.0 - kCompatibleTol;
  return r;
}

VerifyReport verify_result(const MeasurementSet& s, const RobustnessResult& r, double tol) {
  VerifyReport rep;
  std::ostringstream detail;
  if (r.parent.shape != s.outcome_counts() || r.parent.elements.size() != s.parent_size() ||
      r.parent.dim() != s.dim()) {
    rep.detail = "parent shape differs from the set";
    rep.residuals.marginal = std::numeric_limits<double>::infinity();
    return rep;
  }
  std::vector<std::vector<double>> pt;
  if (r.measure == NoiseModel::kProbabilistic) {
    for (int x = 0; x < s.size(); ++x) {
      std::vector<double> row;
      for (int a = 0; a < s[x].outcomes(); ++a) {
        double p = 1.0 / s[x].outcomes();
        if (!r.noise.distributions.empty()) p = r.noise.distributions.at(x).at(a);
        row.push_back((1.0 - r.eta) * p);
      }
      pt.push_back(std::move(row));
    }
  }
  ParentPovm ht = r.noise_parent;
  if (r.measure == NoiseModel::kJointlyMeasurable && ht.elements.empty()) {
    const NoiseInstance fallback = canonical_instance(r.measure, s);
    const ParentPovm& h = r.noise.parent ? *r.noise.parent : *fallback.parent;
    ht = h;
    for (auto& e : ht.elements) e *= (1.0 - r.eta);
  }
  rep.residuals = primal_residuals(s, r.measure, r.parent, ht, r.eta, r.noise, pt);
  try {
    const DualCheck dc = certify_dual(s, r.measure, r.dual, tol);
    rep.residuals.dual_cone = dc.cone_violation;
    rep.residuals.dual_scalar = dc.scalar_violation;
    rep.certified_bound = dc.certified_bound;
  } catch (const Error& e) {
    detail << "dual certificate: " << e.what() << "; ";
    rep.certified_bound = 1.0;
  }
  rep.gap = rep.certified_bound - r.eta;
  const bool bound_ok = rep.certified_bound >= r.eta - 1e-6;
  if (!bound_ok) detail << "certified bound below eta; ";
  if (rep.residuals.max() > tol) detail << "residual " << rep.residuals.max() << " above " << tol;
  rep.ok = bound_ok && rep.residuals.max() <= tol;
  rep.detail = detail.str();
  return rep;
}

JointMeasurability is_jointly_measurable(const MeasurementSet& s, double tol,
                                         const RobustnessOptions& opts) {
  JointMeasurability out;
  if (s.size() < 2) {
    out.jointly_measurable = true;
    out.eta_g = 1.0;
    ParentPovm p;
    p.shape = s.outcome_counts();
    p.elements = s[0].elements();
    out.parent = std::move(p);
    return out;
  }
  const RobustnessResult r = solve_robustness(s, NoiseModel::kGeneralised, opts);
  out.eta_g = r.eta;
  out.jointly_measurable = r.eta >= 1.0 - tol;
  if (out.jointly_measurable) out.parent = r.parent;
  return out;
}

}  // namespace incompat
