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

#include "incompat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/LU>

#include "incompat/error.hpp"

namespace incompat {

namespace {

constexpr std::size_t kMaxMultiIndices = std::size_t{1} << 22;
constexpr double kTraceEps = 1e-14;

double root_term(int d) { return std::sqrt(double(d) * d + 4.0 * d - 4.0); }

// Coefficients of the depolarising pair parent.
double dep_x(int d) { return (-2.0 + root_term(d)) / d; }
double dep_y(int d) {
  const double t = (d + 2.0 - root_term(d)) / (2.0 * d);
  return t * t;
}

void check_dim(int d) {
  if (d < 2) throw Error(ErrorCode::kDomainError, "dimension must be at least 2");
}

// Visits every multi-index over `shape` with the running operator sum.
void for_each_sum(const MeasurementSet& s,
                  const std::function<void(const HermitianMatrix&)>& fn,
                  const std::vector<std::vector<HermitianMatrix>>& elems) {
  const std::vector<int> shape = s.outcome_counts();
  if (s.parent_size() > kMaxMultiIndices) {
    throw Error(ErrorCode::kTooLarge, "too many outcome combinations");
  }
  const int k = s.size();
  std::vector<int> j(k, 0);
  // partial[x] = sum of the first x chosen elements.
  std::vector<HermitianMatrix> partial(k + 1, HermitianMatrix::zero(s.dim()));
  for (int x = 0; x < k; ++x) partial[x + 1] = partial[x] + elems[x][0];
  while (true) {
    fn(partial[k]);
    int x = k - 1;
    while (x >= 0 && ++j[x] == shape[x]) {
      j[x] = 0;
      --x;
    }
    if (x < 0) break;
    for (int y = x; y < k; ++y) partial[y + 1] = partial[y] + elems[y][j[y]];
  }
}

std::vector<std::vector<HermitianMatrix>> elements_of(const MeasurementSet& s) {
  std::vector<std::vector<HermitianMatrix>> e;
  for (const auto& m : s.measurements()) e.push_back(m.elements());
  return e;
}

bool near_zero_gap(double f, double g) { return f - g <= 1e-12 * std::max(1.0, std::abs(f)); }

struct Piece {
  int outcome;
  HermitianMatrix op;  // rank one
};

// Rank-one decomposition of every element.
std::vector<Piece> rank_one_pieces(const Povm& p) {
  std::vector<Piece> out;
  for (int a = 0; a < p.outcomes(); ++a) {
    const Spectrum sp = eigh(p[a]);
    const double scale = std::max(1.0, sp.eigenvalues.cwiseAbs().maxCoeff());
    for (int i = 0; i < sp.eigenvalues.size(); ++i) {
      const double ev = sp.eigenvalues(i);
      if (ev <= 1e-13 * scale) continue;
      out.push_back({a, HermitianMatrix::projector(sp.eigenvectors.col(i)) * ev});
    }
  }
  return out;
}

HermitianMatrix embed_block(const HermitianMatrix& m, int offset, int dim) {
  CMatrix full = CMatrix::Zero(dim, dim);
  full.block(offset, offset, m.dim(), m.dim()) = m.matrix();
  return HermitianMatrix::hermitian_part(full);
}

}  // namespace

double Quantities::g(NoiseModel kind) const {
  switch (kind) {
    case NoiseModel::kDepolarising: return g_d;
    case NoiseModel::kRandom: return g_r;
    case NoiseModel::kProbabilistic: return g_p;
    case NoiseModel::kJointlyMeasurable: return g_jm;
    case NoiseModel::kGeneralised: return 0.0;
  }
  return 0.0;
}

Quantities compute_quantities(const MeasurementSet& s) {
  const int d = s.dim();
  Quantities q;
  bool zero_trace = false;
  std::vector<std::vector<HermitianMatrix>> normalized;
  for (const auto& m : s.measurements()) {
    q.g_r += 1.0 / m.outcomes();
    double min_tr = std::numeric_limits<double>::infinity();
    std::vector<HermitianMatrix> nm;
    for (const auto& e : m.elements()) {
      const double tr = e.trace();
      q.f += inner(e, e) / d;
      q.g_d += (tr / d) * (tr / d);
      min_tr = std::min(min_tr, tr / d);
      if (tr <= kTraceEps) {
        zero_trace = true;
        nm.push_back(e);
      } else {
        nm.push_back(e * (1.0 / tr));
      }
    }
    q.g_p += min_tr;
    normalized.push_back(std::move(nm));
  }
  double lam = -std::numeric_limits<double>::infinity();
  double gjm = std::numeric_limits<double>::infinity();
  for_each_sum(
      s,
      [&](const HermitianMatrix& sum) {
        const RVector ev = eigh(sum).eigenvalues;
        lam = std::max(lam, ev(ev.size() - 1));
        gjm = std::min(gjm, ev(0));
      },
      elements_of(s));
  q.lambda = lam;
  q.g_jm = gjm;
  if (!zero_trace) {
    double f_tr = 0.0;
    for (const auto& m : s.measurements()) {
      for (const auto& e : m.elements()) f_tr += inner(e, e) / (d * e.trace());
    }
    double lt = -std::numeric_limits<double>::infinity();
    double gt = std::numeric_limits<double>::infinity();
    for_each_sum(
        s,
        [&](const HermitianMatrix& sum) {
          const RVector ev = eigh(sum).eigenvalues;
          lt = std::max(lt, ev(ev.size() - 1));
          gt = std::min(gt, ev(0));
        },
        normalized);
    q.f_tr = f_tr;
    q.lambda_tr = lt;
    q.g_tr = double(s.size()) / d;
    q.g_jm_tr = gt;
  }
  return q;
}

namespace {

// Dual points shared by the standard and trace-normalized bounds. `w[x][a]`
// rescales A_{a|x} (1 or 1/tr A).
UpperBound dual_ansatz_bound(const MeasurementSet& s, NoiseModel kind, double f, double lambda,
                             double g, const std::vector<std::vector<double>>& w) {
  const int d = s.dim();
  const int k = s.size();
  const HermitianMatrix id = HermitianMatrix::identity(d);
  UpperBound ub;
  ub.dual.x.resize(k);
  if (kind == NoiseModel::kGeneralised || near_zero_gap(f, g)) {
    // The g point; for trivial sets it still certifies a value >= 1.
    for (int x = 0; x < k; ++x) {
      for (int a = 0; a < s[x].outcomes(); ++a) {
        ub.dual.x[x].push_back(s[x][a] * (w[x][a] / (f * d)));
      }
    }
    ub.dual.n = id * (lambda / (f * d));
    if (kind == NoiseModel::kGeneralised) {
      ub.value = lambda / f;
    } else {
      ub.value = 1.0;
      ub.trivial = true;
      ub.dual = {};
      ub.dual.x.resize(k);
      for (int x = 0; x < k; ++x) {
        ub.dual.x[x].assign(s[x].outcomes(), HermitianMatrix::zero(d));
      }
      if (kind == NoiseModel::kJointlyMeasurable) {
        // Any X with sum tr(XA) = 1 and N = max_j S_j: fall back to the g point.
        for (int x = 0; x < k; ++x) {
          for (int a = 0; a < s[x].outcomes(); ++a) {
            ub.dual.x[x][a] = s[x][a] * (w[x][a] / (f * d));
          }
        }
        ub.dual.n = id * (lambda / (f * d));
      }
    }
    return ub;
  }
  const double den = (f - g) * d;
  if (kind == NoiseModel::kJointlyMeasurable) {
    for (int x = 0; x < k; ++x) {
      for (int a = 0; a < s[x].outcomes(); ++a) {
        ub.dual.x[x].push_back((s[x][a] * w[x][a] - id * (g / k)) * (1.0 / den));
      }
    }
    ub.dual.n = id * ((lambda - g) / ((f - g) * d));
  } else {
    for (int x = 0; x < k; ++x) {
      for (int a = 0; a < s[x].outcomes(); ++a) {
        ub.dual.x[x].push_back((id * (lambda / k) - s[x][a] * w[x][a]) * (1.0 / den));
      }
    }
    if (kind == NoiseModel::kProbabilistic) {
      for (int x = 0; x < k; ++x) {
        double xi = -std::numeric_limits<double>::infinity();
        for (const auto& e : ub.dual.x[x]) xi = std::max(xi, e.trace());
        ub.dual.xi.push_back(xi);
      }
    }
  }
  ub.value = (lambda - g) / (f - g);
  return ub;
}

}  // namespace

UpperBound upper_bound_detail(const MeasurementSet& s, NoiseModel kind) {
  const Quantities q = compute_quantities(s);
  std::vector<std::vector<double>> w;
  for (const auto& m : s.measurements()) w.emplace_back(m.outcomes(), 1.0);
  return dual_ansatz_bound(s, kind, q.f, q.lambda, q.g(kind), w);
}

double upper_bounds(const MeasurementSet& s, NoiseModel kind) {
  return upper_bound_detail(s, kind).value;
}

UpperBound trace_normalized_upper_bound_detail(const MeasurementSet& s, NoiseModel kind) {
  const Quantities q = compute_quantities(s);
  if (!q.f_tr) throw Error(ErrorCode::kZeroTraceElement, "an element has zero trace");
  std::vector<std::vector<double>> w;
  for (const auto& m : s.measurements()) {
    std::vector<double> row;
    for (const auto& e : m.elements()) row.push_back(1.0 / e.trace());
    w.push_back(std::move(row));
  }
  double g = *q.g_tr;
  if (kind == NoiseModel::kJointlyMeasurable) g = *q.g_jm_tr;
  if (kind == NoiseModel::kGeneralised) g = 0.0;
  return dual_ansatz_bound(s, kind, *q.f_tr, *q.lambda_tr, g, w);
}

double trace_normalized_upper_bounds(const MeasurementSet& s, NoiseModel kind) {
  return trace_normalized_upper_bound_detail(s, kind).value;
}

double cloning_lower_bound(int d, int k) {
  check_dim(d);
  if (k < 2) throw Error(ErrorCode::kDomainError, "need at least two measurements");
  return (1.0 + (k - 1.0) / (d + 1.0)) / k;
}

double universal_lower_bound(NoiseModel kind, int d, const std::vector<int>& outcome_counts,
                             int k) {
  check_dim(d);
  if (k < 2) throw Error(ErrorCode::kDomainError, "need at least two measurements");
  const double r = root_term(d);
  const double dep = (d - 2.0 + r) / (4.0 * (d - 1.0));
  const double gen = 0.5 * (1.0 + 1.0 / std::sqrt(double(d)));
  if (k == 2) {
    auto random_bound = [&]() {
      if (outcome_counts.size() != 2 || outcome_counts[0] < 1 || outcome_counts[1] < 1) {
        throw Error(ErrorCode::kDomainError, "random bound needs two outcome counts");
      }
      const double n = std::sqrt(double(outcome_counts[0]) * outcome_counts[1]);
      return 0.5 * (1.0 + 1.0 / (n + 1.0));
    };
    switch (kind) {
      case NoiseModel::kDepolarising: return dep;
      case NoiseModel::kRandom: return random_bound();
      case NoiseModel::kProbabilistic: return std::max(dep, random_bound());
      case NoiseModel::kJointlyMeasurable: return 2.0 * r / (3.0 * d - 2.0 + r);
      case NoiseModel::kGeneralised: return gen;
    }
  }
  if (kind == NoiseModel::kRandom) {
    throw Error(ErrorCode::kDomainError, "no universal random bound for more than two measurements");
  }
  double dk = std::max(cloning_lower_bound(d, k), cascade_visibility(k, dep));
  const bool qubit_triplet = d == 2 && k == 3;
  if (qubit_triplet) dk = std::max(dk, 1.0 / std::sqrt(3.0));
  switch (kind) {
    case NoiseModel::kDepolarising:
    case NoiseModel::kProbabilistic:
      return dk;
    case NoiseModel::kJointlyMeasurable:
      return qubit_triplet ? std::max(dk, std::sqrt(3.0) - 1.0) : dk;
    case NoiseModel::kGeneralised: {
      double v = std::max({dk + (1.0 - dk) / d, cascade_visibility(k, gen)});
      if (qubit_triplet) v = std::max(v, 0.5 * (1.0 + 1.0 / std::sqrt(3.0)));
      return v;
    }
    default: break;
  }
  return dk;
}

std::pair<double, double> rank_one_ansatz_eigenvalues(double tr_a, double tr_b, double tr_ab,
                                                      double at, double bt, double gamma) {
  const double s = at * tr_a + bt * tr_b + 2.0 * tr_ab;
  const double diff = at * tr_a - bt * tr_b;
  const double disc = std::max(0.0, diff * diff + 4.0 * tr_ab * (at + tr_b) * (bt + tr_a));
  const double root = std::sqrt(disc);
  return {0.5 * (s - root) + gamma, 0.5 * (s + root) + gamma};
}

AnsatzParent ansatz_parent(const Povm& a, const Povm& b, const std::vector<double>& alpha,
                           const std::vector<double>& beta, const RMatrix& gamma, double delta,
                           double psd_tol) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kShapeMismatch, "dimensions differ");
  const int na = a.outcomes();
  const int nb = b.outcomes();
  if (int(alpha.size()) != nb || int(beta.size()) != na || gamma.rows() != na ||
      gamma.cols() != nb) {
    throw Error(ErrorCode::kShapeMismatch, "coefficient shapes do not match the pair");
  }
  const int d = a.dim();
  const HermitianMatrix id = HermitianMatrix::identity(d);
  std::vector<HermitianMatrix> sqrt_a, sqrt_b;
  if (delta != 0.0) {
    for (const auto& e : a.elements()) sqrt_a.push_back(psd_sqrt(e));
    for (const auto& e : b.elements()) sqrt_b.push_back(psd_sqrt(e));
  }
  std::vector<bool> a_rank1(na), b_rank1(nb);
  for (int i = 0; i < na; ++i) a_rank1[i] = numerical_rank(a[i]) <= 1;
  for (int j = 0; j < nb; ++j) b_rank1[j] = numerical_rank(b[j]) <= 1;

  AnsatzParent out;
  out.parent.shape = {na, nb};
  HermitianMatrix total = HermitianMatrix::zero(d);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      HermitianMatrix g = anticommutator(a[i], b[j]) + a[i] * alpha[j] + b[j] * beta[i] +
                          id * gamma(i, j);
      if (delta != 0.0) {
        const CMatrix t = sqrt_a[i].matrix() * b[j].matrix() * sqrt_a[i].matrix() +
                          sqrt_b[j].matrix() * a[i].matrix() * sqrt_b[j].matrix();
        g += HermitianMatrix::hermitian_part(t) * delta;
      }
      total += g;
      out.parent.elements.push_back(std::move(g));
    }
  }
  const double scale = total.trace() / d;
  if (!(scale > 0.0) || (total - id * scale).max_abs() > 1e-9 * std::max(1.0, scale)) {
    throw Error(ErrorCode::kNotNormalized, "sum of the candidate is not a multiple of I");
  }
  out.scale = scale;
  for (auto& g : out.parent.elements) g *= 1.0 / scale;

  out.min_eigenvalues = RMatrix::Zero(na, nb);
  out.closed_form = true;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      const double ta = a[i].trace();
      const double tb = b[j].trace();
      double mn;
      if (a_rank1[i] && b_rank1[j] && ta > kTraceEps && tb > kTraceEps) {
        const double tab = inner(a[i], b[j]);
        // A^1/2 B A^1/2 = tr(AB)/tr(A) A for rank-one A.
        const double at = alpha[j] + delta * tab / ta;
        const double bt = beta[i] + delta * tab / tb;
        const auto ev = rank_one_ansatz_eigenvalues(ta, tb, tab, at, bt, gamma(i, j));
        mn = ev.first;
        if (d >= 3) mn = std::min(mn, gamma(i, j));
        mn /= scale;
      } else {
        out.closed_form = false;
        mn = min_eigenvalue(out.parent.elements[i * nb + j]);
      }
      out.min_eigenvalues(i, j) = mn;
      worst = std::min(worst, mn);
    }
  }
  out.min_eigenvalue = worst;
  out.psd = worst >= -psd_tol;
  return out;
}

RMatrix overlaps(const Povm& a, const Povm& b) {
  RMatrix c = RMatrix::Zero(a.outcomes(), b.outcomes());
  for (int i = 0; i < a.outcomes(); ++i) {
    for (int j = 0; j < b.outcomes(); ++j) {
      const double ta = a[i].trace();
      const double tb = b[j].trace();
      if (ta <= kTraceEps || tb <= kTraceEps) continue;
      const double v = std::sqrt(std::max(0.0, inner(a[i], b[j]) / (ta * tb)));
      c(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return c;
}

double critical_overlap(NoiseModel kind, int d) {
  check_dim(d);
  switch (kind) {
    case NoiseModel::kDepolarising: return (d - 2.0 + root_term(d)) / (2.0 * d);
    case NoiseModel::kJointlyMeasurable: return (2.0 - d + root_term(d)) / (2.0 * d);
    case NoiseModel::kGeneralised: return 1.0 / std::sqrt(double(d));
    default: break;
  }
  throw Error(ErrorCode::kDomainError, "no critical overlap for this measure");
}

OverlapSplit split_overlaps(const RMatrix& c, double critical, double tol) {
  OverlapSplit s;
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < c.cols(); ++j) {
      const double v = c(i, j);
      if (std::abs(v - critical) <= tol) {
        s.at_critical = true;
      } else if (v < critical) {
        if (!s.has_minus || v > s.c_minus) s.c_minus = v;
        s.has_minus = true;
      } else {
        if (!s.has_plus || v < s.c_plus) s.c_plus = v;
        s.has_plus = true;
      }
    }
  }
  if (!s.has_minus) s.c_minus = 0.0;
  if (!s.has_plus) s.c_plus = 1.0;
  return s;
}

namespace {

AnsatzParent depolarising_ansatz(const Povm& a, const Povm& b, double x, double y) {
  std::vector<double> alpha, beta;
  for (const auto& e : b.elements()) alpha.push_back(x * e.trace());
  for (const auto& e : a.elements()) beta.push_back(x * e.trace());
  RMatrix gamma(a.outcomes(), b.outcomes());
  for (int i = 0; i < a.outcomes(); ++i) {
    for (int j = 0; j < b.outcomes(); ++j) gamma(i, j) = y * a[i].trace() * b[j].trace();
  }
  return ansatz_parent(a, b, alpha, beta, gamma, 0.0);
}

AnsatzParent generalised_ansatz(const Povm& a, const Povm& b, double x, double y) {
  std::vector<double> alpha, beta;
  for (const auto& e : b.elements()) alpha.push_back(x * e.trace());
  for (const auto& e : a.elements()) beta.push_back(x * e.trace());
  return ansatz_parent(a, b, alpha, beta, RMatrix::Zero(a.outcomes(), b.outcomes()), y);
}

double dep_eta(int d, double x, double y) {
  return (2.0 + d * x) / (2.0 * (1.0 + d * x) + double(d) * d * y);
}

}  // namespace

RefinedBound refined_lower_bound(const MeasurementSet& s, NoiseModel kind) {
  if (s.size() != 2) throw Error(ErrorCode::kDomainError, "refinements are for pairs");
  if (kind != NoiseModel::kDepolarising && kind != NoiseModel::kJointlyMeasurable &&
      kind != NoiseModel::kGeneralised) {
    throw Error(ErrorCode::kDomainError, "refinements exist for d, jm and g only");
  }
  for (const auto& m : s.measurements()) {
    for (const auto& e : m.elements()) {
      if (numerical_rank(e) > 1) throw Error(ErrorCode::kNotRankOne, "element of rank > 1");
    }
  }
  const int d = s.dim();
  const Povm& a = s[0];
  const Povm& b = s[1];
  RefinedBound rb;
  rb.overlaps = overlaps(a, b);
  rb.c_crit = critical_overlap(kind, d);

  // Depolarising part, shared by all three measures.
  const double crit_d = critical_overlap(NoiseModel::kDepolarising, d);
  rb.depolarising = split_overlaps(rb.overlaps, crit_d);
  double x_d = dep_x(d), y_d = dep_y(d);
  if (!rb.depolarising.at_critical) {
    const OverlapSplit& sp = rb.depolarising;
    x_d = sp.c_minus + sp.c_plus - 1.0;
    y_d = (1.0 - sp.c_minus) * (1.0 - sp.c_plus);
  }
  const double eta_d = dep_eta(d, x_d, y_d);

  if (kind == NoiseModel::kDepolarising) {
    rb.split = rb.depolarising;
    rb.value = eta_d;
    rb.parent = depolarising_ansatz(a, b, x_d, y_d);
    return rb;
  }
  rb.split = split_overlaps(rb.overlaps, rb.c_crit);
  const double cm = rb.split.c_minus;
  const double cp = rb.split.c_plus;
  if (kind == NoiseModel::kJointlyMeasurable) {
    if (rb.split.at_critical) {
      rb.value = universal_lower_bound(kind, d, s.outcome_counts());
    } else {
      const double t = 1.0 + cm + cp;
      const double term = (t * d - 2.0) / (t * (d - 1.0) + cm * cp * d) / d;
      rb.value = eta_d + (1.0 - eta_d) * term;
    }
    return rb;
  }
  // Generalised.
  double x_g = 1.0 / (2.0 * std::sqrt(double(d)));
  double y_g = std::sqrt(double(d)) / 2.0;
  if (rb.split.at_critical) {
    rb.overlap_bound = universal_lower_bound(kind, d, s.outcome_counts());
  } else {
    x_g = cm * cp / (cm + cp);
    y_g = 1.0 / (cm + cp);
    rb.overlap_bound = (2.0 * (cm + cp) * d + (1.0 + cm * cp * d) * (d + 1.0)) /
                       (2.0 * d * (1.0 + cm + cp + cm * cp * d));
  }
  rb.transferred_bound = relation_transfer(eta_d, d, 0, Transfer::kGFromD);
  rb.value = std::max(rb.overlap_bound, rb.transferred_bound);
  rb.parent = generalised_ansatz(a, b, x_g, y_g);
  return rb;
}

double embedding_upper_bound(double inner_lambda, int d_i, int d_f) {
  if (d_i < 2 || d_f < d_i) throw Error(ErrorCode::kDomainError, "need d_f >= d_i >= 2");
  if (!(inner_lambda <= 2.0 + 1e-12) || inner_lambda < 1.0 - 1e-12) {
    throw Error(ErrorCode::kDomainError, "lambda must lie in [1, 2]");
  }
  const double l = inner_lambda;
  return 0.5 * (1.0 + ((l - 1.0) * d_i - 1.0) / ((2.0 - l) * d_f + (l - 1.0) * d_i - 1.0));
}

double embedding_upper_bound(const MeasurementSet& inner, int d_f) {
  const int d_i = inner.dim();
  const int k = inner.size();
  if (d_i < 2 || d_f < d_i || k < 2) throw Error(ErrorCode::kDomainError, "need d_f >= d_i >= 2");
  for (const auto& m : inner.measurements()) {
    if (!is_rank_one_projective(m) || m.outcomes() != d_i) {
      throw Error(ErrorCode::kDomainError, "inner measurements must be bases");
    }
  }
  // lam[m] = largest eigenvalue of a sum of m elements from m distinct
  // measurements.
  std::vector<double> lam(k + 1, 0.0);
  {
    std::vector<int> choice(k, -1);  // -1: measurement absent
    while (true) {
      HermitianMatrix sum = HermitianMatrix::zero(d_i);
      int m = 0;
      for (int x = 0; x < k; ++x) {
        if (choice[x] >= 0) {
          sum += inner[x][choice[x]];
          ++m;
        }
      }
      if (m > 0) lam[m] = std::max(lam[m], max_eigenvalue(sum));
      int x = k - 1;
      while (x >= 0 && ++choice[x] == d_i) {
        choice[x] = -1;
        --x;
      }
      if (x < 0) break;
    }
  }
  // Dual point: X = alpha I - beta A^ on the inner outcomes, gamma I on the
  // padding outcomes (both supported on the inner block). Variables
  // v = (alpha, beta, gamma); rows r with r . v + c >= 0.
  std::vector<Eigen::Vector3d> rows;
  std::vector<double> consts;
  rows.emplace_back(0, 0, 1);
  consts.push_back(0);
  rows.emplace_back(0, 1, 0);
  consts.push_back(0);
  for (int m = 1; m <= k; ++m) {
    rows.emplace_back(m, -lam[m], k - m);
    consts.push_back(0);
  }
  // 1 + k d_i (alpha - beta) >= (k/d_f)[d_i (alpha d_i - beta) + (d_f - d_i) d_i gamma]
  const double kd = double(k) * d_i;
  rows.emplace_back(kd - kd * d_i / d_f, -kd + kd / d_f, -kd * (d_f - d_i) / double(d_f));
  consts.push_back(1.0);
  const Eigen::Vector3d obj(kd, -kd, 0.0);

  double best = std::numeric_limits<double>::infinity();
  const int nr = static_cast<int>(rows.size());
  for (int i = 0; i < nr; ++i) {
    for (int j = i + 1; j < nr; ++j) {
      for (int l = j + 1; l < nr; ++l) {
        Eigen::Matrix3d m;
        m.row(0) = rows[i];
        m.row(1) = rows[j];
        m.row(2) = rows[l];
        Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
        if (!lu.isInvertible()) continue;
        const Eigen::Vector3d v = lu.solve(-Eigen::Vector3d(consts[i], consts[j], consts[l]));
        bool ok = true;
        for (int r = 0; r < nr && ok; ++r) ok = rows[r].dot(v) + consts[r] >= -1e-12;
        if (ok) best = std::min(best, 1.0 + obj.dot(v));
      }
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::kDomainError, "embedding program has no vertex");
  return best;
}

double embedding_table_value(int d_i, int d_f) {
  return embedding_upper_bound(complete_mub_set(d_i), d_f);
}

double block_structure_p_upper_bound(const MeasurementSet& s, int d_i) {
  const int d_f = s.dim();
  if (s.size() != 2 || d_i < 2 || d_f % d_i != 0) {
    throw Error(ErrorCode::kNotBlockStructured, "dimension is not a multiple of the block size");
  }
  const int blocks = d_f / d_i;
  std::vector<Povm> inner;
  for (const auto& m : s.measurements()) {
    if (m.outcomes() != d_f) throw Error(ErrorCode::kNotBlockStructured, "wrong outcome count");
    std::vector<HermitianMatrix> hat;
    for (int a = 0; a < d_i; ++a) {
      hat.push_back(HermitianMatrix::hermitian_part(m[a].matrix().topLeftCorner(d_i, d_i)));
    }
    for (int a = 0; a < d_f; ++a) {
      const HermitianMatrix expect = embed_block(hat[a % d_i], (a / d_i) * d_i, d_f);
      if ((m[a] - expect).max_abs() > 1e-10) {
        throw Error(ErrorCode::kNotBlockStructured, "element differs from its block copy");
      }
    }
    Povm p(std::move(hat));
    if (!validate(p, 1e-10).valid || !is_rank_one_projective(p)) {
      throw Error(ErrorCode::kNotBlockStructured, "block measurement is not a basis");
    }
    inner.push_back(std::move(p));
  }
  (void)blocks;
  const Quantities q = compute_quantities(MeasurementSet(std::move(inner)));
  return embedding_upper_bound(std::min(q.lambda, 2.0), d_i, d_f);
}

double zero_outcome_limit_bound(const MeasurementSet& s) {
  if (s.size() != 2) throw Error(ErrorCode::kDomainError, "pairs only");
  const Quantities q = compute_quantities(s);
  if (!(q.lambda < 2.0 - 1e-12) || !(2.0 * (q.lambda - 1.0) < q.f - 1e-12)) {
    throw Error(ErrorCode::kPreconditionFailed, "need lambda < 2 and 2(lambda - 1) < f");
  }
  return (2.0 - q.lambda) / (q.f - 2.0 * (q.lambda - 1.0));
}

double zero_outcome_padded_bound(const MeasurementSet& s, int n_f) {
  if (s.size() != 2 || s[0].outcomes() != s[1].outcomes()) {
    throw Error(ErrorCode::kDomainError, "pairs with equal outcome counts only");
  }
  const int n_i = s[0].outcomes();
  if (n_f < n_i) throw Error(ErrorCode::kDomainError, "padding below the outcome count");
  const Quantities q = compute_quantities(s);
  const double shift = 2.0 / n_f + 2.0 * (q.lambda - 1.0) * (1.0 - double(n_i) / n_f);
  if (!(q.f - shift > 0.0)) throw Error(ErrorCode::kPreconditionFailed, "non-positive denominator");
  return (q.lambda - shift) / (q.f - shift);
}

double relation_transfer(double eta, int d, int n_max, Transfer target) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorCode::kDomainError, "visibility outside [0, 1]");
  double factor = 0.0;
  switch (target) {
    case Transfer::kJmFromD:
      check_dim(d);
      factor = 2.0 / (d + root_term(d));
      break;
    case Transfer::kGFromD:
      check_dim(d);
      factor = 1.0 / d;
      break;
    case Transfer::kGFromR:
      if (n_max < 1) throw Error(ErrorCode::kDomainError, "n_max must be positive");
      factor = 1.0 / n_max;
      break;
  }
  return eta + (1.0 - eta) * factor;
}

ParentPovm universal_pair_parent(NoiseModel kind, const Povm& a, const Povm& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kShapeMismatch, "dimensions differ");
  if (kind != NoiseModel::kDepolarising && kind != NoiseModel::kGeneralised) {
    throw Error(ErrorCode::kDomainError, "pair parents exist for d and g");
  }
  const int d = a.dim();
  const HermitianMatrix id = HermitianMatrix::identity(d);
  const std::vector<Piece> pa = rank_one_pieces(a);
  const std::vector<Piece> pb = rank_one_pieces(b);
  ParentPovm g;
  g.shape = {a.outcomes(), b.outcomes()};
  g.elements.assign(a.outcomes() * b.outcomes(), HermitianMatrix::zero(d));
  const double x = dep_x(d), y = dep_y(d);
  const double sd = std::sqrt(double(d));
  for (const auto& u : pa) {
    const double ta = u.op.trace();
    for (const auto& v : pb) {
      const double tb = v.op.trace();
      HermitianMatrix e(d);
      if (kind == NoiseModel::kDepolarising) {
        e = (anticommutator(u.op, v.op) + (u.op * tb + v.op * ta) * x + id * (y * ta * tb)) *
            (1.0 / (2.0 * (1.0 + d * x) + double(d) * d * y));
      } else {
        const double tab = inner(u.op, v.op);
        e = (u.op * tb + v.op * ta + anticommutator(u.op, v.op) * (2.0 * sd) +
             (u.op * (tab / ta) + v.op * (tab / tb)) * double(d)) *
            (1.0 / (4.0 * (d + sd)));
      }
      g.elements[u.outcome * b.outcomes() + v.outcome] += e;
    }
  }
  return g;
}

double cascade_visibility(int k, double pair_eta) {
  if (k < 2) throw Error(ErrorCode::kDomainError, "need at least two measurements");
  std::vector<int> depth(k, 0);
  std::vector<std::vector<int>> nodes;
  for (int i = 0; i < k; ++i) nodes.push_back({i});
  while (nodes.size() > 1) {
    std::vector<std::vector<int>> next;
    for (std::size_t i = 0; i < nodes.size(); i += 2) {
      if (i + 1 < nodes.size()) {
        std::vector<int> merged = nodes[i];
        merged.insert(merged.end(), nodes[i + 1].begin(), nodes[i + 1].end());
        for (int p : merged) ++depth[p];
        next.push_back(std::move(merged));
      } else {
        next.push_back(nodes[i]);
      }
    }
    nodes = std::move(next);
  }
  double v = 0.0;
  for (int p : depth) v += std::pow(pair_eta, p);
  return v / k;
}

CascadeBound cascade_lower_bound(const MeasurementSet& s, NoiseModel kind) {
  if (kind != NoiseModel::kDepolarising && kind != NoiseModel::kGeneralised) {
    throw Error(ErrorCode::kDomainError, "cascades are built for d and g");
  }
  const int k = s.size();
  if (k < 2) throw Error(ErrorCode::kDomainError, "need at least two measurements");
  if (s.parent_size() > kMaxMultiIndices) throw Error(ErrorCode::kTooLarge, "parent too large");
  const int d = s.dim();
  CascadeBound cb;
  cb.pair_eta = universal_lower_bound(kind, d, s.outcome_counts(), 2);
  cb.eta = cascade_visibility(k, cb.pair_eta);
  {
    std::vector<int> depth(k, 0);
    std::vector<std::vector<int>> nodes;
    for (int i = 0; i < k; ++i) nodes.push_back({i});
    while (nodes.size() > 1) {
      std::vector<std::vector<int>> next;
      for (std::size_t i = 0; i < nodes.size(); i += 2) {
        if (i + 1 < nodes.size()) {
          std::vector<int> merged = nodes[i];
          merged.insert(merged.end(), nodes[i + 1].begin(), nodes[i + 1].end());
          for (int p : merged) ++depth[p];
          next.push_back(std::move(merged));
        } else {
          next.push_back(nodes[i]);
        }
      }
      nodes = std::move(next);
    }
    cb.depths = depth;
  }
  const std::vector<int> shape = s.outcome_counts();
  cb.parent.shape = shape;
  cb.parent.elements.assign(s.parent_size(), HermitianMatrix::zero(d));

  struct Node {
    Povm povm;
    std::vector<int> members;  // measurement indices, row-major outcome order
  };
  for (int rot = 0; rot < k; ++rot) {
    std::vector<Node> nodes;
    for (int i = 0; i < k; ++i) {
      const int x = (rot + i) % k;
      nodes.push_back({s[x], {x}});
    }
    while (nodes.size() > 1) {
      std::vector<Node> next;
      for (std::size_t i = 0; i < nodes.size(); i += 2) {
        if (i + 1 < nodes.size()) {
          ParentPovm pp = universal_pair_parent(kind, nodes[i].povm, nodes[i + 1].povm);
          std::vector<int> members = nodes[i].members;
          members.insert(members.end(), nodes[i + 1].members.begin(),
                         nodes[i + 1].members.end());
          next.push_back({Povm(std::move(pp.elements)), std::move(members)});
        } else {
          next.push_back(std::move(nodes[i]));
        }
      }
      nodes = std::move(next);
    }
    const Node& root = nodes.front();
    std::vector<int> node_shape;
    for (int x : root.members) node_shape.push_back(shape[x]);
    for (int j = 0; j < root.povm.outcomes(); ++j) {
      const std::vector<int> idx = unravel_index(j, node_shape);
      std::size_t target = 0;
      std::vector<int> full(k);
      for (int p = 0; p < k; ++p) full[root.members[p]] = idx[p];
      for (int x = 0; x < k; ++x) target = target * shape[x] + full[x];
      cb.parent.elements[target] += root.povm[j] * (1.0 / k);
    }
  }
  return cb;
}

double mub_closed_form(int d, NoiseModel kind) {
  check_dim(d);
  const double sd = std::sqrt(double(d));
  switch (kind) {
    case NoiseModel::kDepolarising:
    case NoiseModel::kRandom:
    case NoiseModel::kProbabilistic:
      return 0.5 * (1.0 + 1.0 / (sd + 1.0));
    case NoiseModel::kJointlyMeasurable:
      return d == 2 ? 2.0 * (std::sqrt(2.0) - 1.0) : 0.5 * (1.0 + 1.0 / sd);
    case NoiseModel::kGeneralised:
      return 0.5 * (1.0 + 1.0 / sd);
  }
  return 0.0;
}

ParentPovm mub_parent(int d) {
  check_dim(d);
  const MeasurementSet s = mub_pair(d);
  const double sd = std::sqrt(double(d));
  ParentPovm g;
  g.shape = {d, d};
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      g.elements.push_back((anticommutator(s[0][a], s[1][b]) + (s[0][a] + s[1][b]) * (1.0 / sd)) *
                           (1.0 / (2.0 * (sd + 1.0))));
    }
  }
  return g;
}

ParentPovm mub_noise_parent(int d) {
  if (d < 3) throw Error(ErrorCode::kDomainError, "the noise parent needs d >= 3");
  const MeasurementSet s = mub_pair(d);
  const double eta = mub_closed_form(d, NoiseModel::kJointlyMeasurable);
  const HermitianMatrix id = HermitianMatrix::identity(d);
  ParentPovm h;
  h.shape = {d, d};
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      h.elements.push_back(
          (id + (anticommutator(s[0][a], s[1][b]) - s[0][a] - s[1][b]) * (d / (d - 1.0))) *
          ((1.0 - eta) / (d * (d - 2.0))));
    }
  }
  return h;
}

TripletTable qubit_triplet_bounds() {
  const double r3 = std::sqrt(3.0);
  return {1.0 / r3, 1.0 / r3, r3 - 1.0, 0.5 * (1.0 + 1.0 / r3)};
}

TripletParent qubit_triplet_parent(const MeasurementSet& s) {
  if (s.size() != 3 || s.dim() != 2) {
    throw Error(ErrorCode::kNotRankOneQubit, "need three qubit measurements");
  }
  for (const auto& m : s.measurements()) {
    for (const auto& e : m.elements()) {
      if (numerical_rank(e) > 1) throw Error(ErrorCode::kNotRankOneQubit, "element of rank 2");
    }
  }
  const double r3 = std::sqrt(3.0);
  const HermitianMatrix id = HermitianMatrix::identity(2);
  TripletParent tp;
  tp.eta = 1.0 / r3;
  tp.parent.shape = s.outcome_counts();
  double worst = std::numeric_limits<double>::infinity();
  for (int a = 0; a < s[0].outcomes(); ++a) {
    for (int b = 0; b < s[1].outcomes(); ++b) {
      for (int c = 0; c < s[2].outcomes(); ++c) {
        const CMatrix& A = s[0][a].matrix();
        const CMatrix& B = s[1][b].matrix();
        const CMatrix& C = s[2][c].matrix();
        const CMatrix prod = A * B * C + A * C * B + B * C * A + B * A * C + C * A * B + C * B * A;
        const double ta = s[0][a].trace(), tb = s[1][b].trace(), tc = s[2][c].trace();
        HermitianMatrix g = HermitianMatrix::hermitian_part(prod) +
                            (s[0][a] * (tb * tc) + s[1][b] * (ta * tc) + s[2][c] * (ta * tb)) *
                                ((3.0 * r3 - 4.0) / 2.0) +
                            id * ((9.0 - 5.0 * r3) / 2.0 * ta * tb * tc);
        g *= 1.0 / (2.0 * (9.0 - r3));
        worst = std::min(worst, min_eigenvalue(g));
        tp.parent.elements.push_back(std::move(g));
      }
    }
  }
  tp.min_eigenvalue = worst;
  tp.psd = worst >= -1e-10;
  const MeasurementSet target =
      noisy_version(s, canonical_noise(NoiseModel::kDepolarising, s), tp.eta);
  const MeasurementSet marg = tp.parent.marginals();
  for (int x = 0; x < 3; ++x) {
    for (int a = 0; a < s[x].outcomes(); ++a) {
      tp.marginal_residual = std::max(tp.marginal_residual, (marg[x][a] - target[x][a]).max_abs());
    }
  }
  return tp;
}

const MeasureBounds& BoundReport::at(NoiseModel m) const {
  for (const auto& mb : measures) {
    if (mb.measure == m) return mb;
  }
  throw Error(ErrorCode::kUnknownId, "measure missing from report");
}

BoundReport bound_report(const MeasurementSet& s) {
  BoundReport rep;
  rep.quantities = compute_quantities(s);
  const Quantities& q = rep.quantities;
  const int d = s.dim();
  const int k = s.size();
  const std::vector<int> counts = s.outcome_counts();
  const int n_max = *std::max_element(counts.begin(), counts.end());
  for (NoiseModel m : kAllNoiseModels) rep.measures.push_back({m, {}, {}, {}, {}});
  auto entry = [&](NoiseModel m) -> MeasureBounds& {
    return rep.measures[static_cast<int>(m)];
  };
  using NM = NoiseModel;

  // Upper bounds.
  bool trivial = false;
  for (NoiseModel m : kAllNoiseModels) {
    const UpperBound ub = upper_bound_detail(s, m);
    trivial = trivial || ub.trivial;
    entry(m).upper.push_back({ub.value, "dual-ansatz"});
    if (q.f_tr) {
      entry(m).upper.push_back({trace_normalized_upper_bounds(s, m), "trace-normalized-dual"});
    }
  }
  if (trivial) rep.notes.push_back("f equals g for some measure: every element is a multiple of I");
  if (k == 2 && d % 2 == 0) {
    try {
      entry(NM::kProbabilistic).upper.push_back({block_structure_p_upper_bound(s, 2), "qubit-blocks"});
    } catch (const Error&) {
    }
  }
  // d, r <= p <= jm <= g: an upper bound on a larger measure caps the smaller ones.
  const std::vector<std::pair<NM, std::vector<NM>>> larger = {
      {NM::kDepolarising, {NM::kProbabilistic, NM::kJointlyMeasurable, NM::kGeneralised}},
      {NM::kRandom, {NM::kProbabilistic, NM::kJointlyMeasurable, NM::kGeneralised}},
      {NM::kProbabilistic, {NM::kJointlyMeasurable, NM::kGeneralised}},
      {NM::kJointlyMeasurable, {NM::kGeneralised}},
  };
  for (const auto& [m, ups] : larger) {
    for (NM u : ups) {
      for (const auto& e : std::vector<BoundEntry>(entry(u).upper)) {
        entry(m).upper.push_back({e.value, e.tag + "@" + std::string(short_name(u))});
      }
    }
  }

  // Lower bounds.
  auto add_lower = [&](NM m, double v, const std::string& tag) { entry(m).lower.push_back({v, tag}); };
  if (k == 2) {
    for (NM m : kAllNoiseModels) add_lower(m, universal_lower_bound(m, d, counts, 2), "universal");
  } else {
    for (NM m : {NM::kDepolarising, NM::kProbabilistic, NM::kJointlyMeasurable, NM::kGeneralised}) {
      add_lower(m, universal_lower_bound(m, d, counts, k), "universal-k");
    }
    add_lower(NM::kDepolarising, cloning_lower_bound(d, k), "cloning");
    add_lower(NM::kDepolarising, cascade_visibility(k, universal_lower_bound(NM::kDepolarising, d, {}, 2)),
              "pair-cascade");
    add_lower(NM::kGeneralised, cascade_visibility(k, universal_lower_bound(NM::kGeneralised, d, {}, 2)),
              "pair-cascade");
  }
  bool rank_one = true;
  for (const auto& m : s.measurements()) {
    for (const auto& e : m.elements()) rank_one = rank_one && numerical_rank(e) <= 1;
  }
  if (k == 2 && rank_one) {
    for (NM m : {NM::kDepolarising, NM::kJointlyMeasurable, NM::kGeneralised}) {
      const RefinedBound rb = refined_lower_bound(s, m);
      add_lower(m, rb.value, "overlap-refinement");
      rep.critical.emplace_back(std::string(short_name(m)), rb.c_crit);
      rep.splits.emplace_back(std::string(short_name(m)), rb.split);
      if (!rep.overlaps) rep.overlaps = rb.overlaps;
    }
  }
  // Transfers from the best depolarising / random lower bounds.
  auto best_of = [](const std::vector<BoundEntry>& v, bool lower) {
    BoundEntry b{lower ? -std::numeric_limits<double>::infinity()
                       : std::numeric_limits<double>::infinity(),
                 ""};
    for (const auto& e : v) {
      if (lower ? e.value > b.value : e.value < b.value) b = e;
    }
    return b;
  };
  const BoundEntry bd = best_of(entry(NM::kDepolarising).lower, true);
  add_lower(NM::kProbabilistic, bd.value, bd.tag + "@d");
  if (k == 2) {
    const BoundEntry br = best_of(entry(NM::kRandom).lower, true);
    add_lower(NM::kProbabilistic, br.value, br.tag + "@r");
    add_lower(NM::kJointlyMeasurable, relation_transfer(bd.value, d, n_max, Transfer::kJmFromD),
              "from-d");
    add_lower(NM::kGeneralised, relation_transfer(br.value, d, n_max, Transfer::kGFromR), "from-r");
  }
  add_lower(NM::kGeneralised, relation_transfer(bd.value, d, n_max, Transfer::kGFromD), "from-d");
  const BoundEntry bjm = best_of(entry(NM::kJointlyMeasurable).lower, true);
  add_lower(NM::kGeneralised, bjm.value, bjm.tag + "@jm");

  for (auto& mb : rep.measures) {
    if (!mb.lower.empty()) mb.best_lower = best_of(mb.lower, true);
    mb.best_upper = best_of(mb.upper, false);
    mb.best_upper.value = std::min(mb.best_upper.value, 1.0);
  }
  return rep;
}

}  // namespace incompat
