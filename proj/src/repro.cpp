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

#include "incompat/repro.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "incompat/bounds.hpp"
#include "incompat/error.hpp"
#include "incompat/search.hpp"

namespace incompat {

namespace {

using NM = NoiseModel;
constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

class Checker {
 public:
  explicit Checker(ReproResult* r) : r_(r) {}

  void eq(const std::string& name, double actual, double expected, double tol) {
    add({name, "=", actual, expected, tol, std::abs(actual - expected) <= tol});
  }
  void le(const std::string& name, double lhs, double rhs, double slack = 0.0) {
    add({name, "<=", lhs, rhs, slack, lhs <= rhs + slack});
  }
  // Strict, and by more than `margin`.
  void lt(const std::string& name, double lhs, double rhs, double margin = 0.0) {
    add({name, "<", lhs, rhs, margin, lhs < rhs - margin});
  }

 private:
  void add(ReproCheck c) {
    if (!std::isfinite(c.actual)) c.pass = false;
    r_->pass = r_->pass && c.pass;
    r_->checks.push_back(std::move(c));
  }
  ReproResult* r_;
};

HermitianMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = int(rows.size());
  RMatrix m(n, n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return HermitianMatrix::from_real(m);
}

MeasurementSet qubit_mub() { return mub_pair(2); }

double eta_of(const MeasurementSet& s, NM m, const RobustnessOptions& opts) {
  return solve_robustness(s, m, opts).eta;
}

std::string name_of(NM m) { return std::string(short_name(m)); }

// Closed-form lower bounds of the summary table, for pairs of d-outcome
// measurements in dimension d.
double table_lower(NM m, int d) {
  const double s = std::sqrt(double(d) * d + 4.0 * d - 4.0);
  const double dd = (d - 2 + s) / (4.0 * (d - 1));
  const double rr = 0.5 * (1 + 1 / (std::sqrt(double(d) * d) + 1));
  switch (m) {
    case NM::kDepolarising:
      return dd;
    case NM::kRandom:
      return rr;
    case NM::kProbabilistic:
      return std::max(dd, rr);
    case NM::kJointlyMeasurable:
      return 2 * s / (3.0 * d - 2 + s);
    case NM::kGeneralised:
      return 0.5 * (1 + 1 / std::sqrt(double(d)));
  }
  return 0.0;
}

double table_mub(NM m, int d) {
  const double sd = std::sqrt(double(d));
  switch (m) {
    case NM::kDepolarising:
    case NM::kRandom:
    case NM::kProbabilistic:
      return 0.5 * (1 + 1 / (sd + 1));
    case NM::kJointlyMeasurable:
      return d == 2 ? 2 * (kSqrt2 - 1) : 0.5 * (1 + 1 / sd);
    case NM::kGeneralised:
      return 0.5 * (1 + 1 / sd);
  }
  return 0.0;
}

ReproResult table_magic(const RobustnessOptions&) {
  ReproResult r;
  Checker c(&r);
  Table t;
  t.columns = {"d"};
  for (NM m : kAllNoiseModels) {
    const std::string n = name_of(m);
    t.columns.insert(t.columns.end(), {"lower_" + n, "mub_" + n, "upper_" + n});
  }
  for (int d = 2; d <= 5; ++d) {
    const MeasurementSet s = mub_pair(d);
    std::vector<double> row{double(d)};
    for (NM m : kAllNoiseModels) {
      const std::string tag = name_of(m) + " d=" + std::to_string(d);
      const double lo = universal_lower_bound(m, d, {d, d});
      const double mub = mub_closed_form(d, m);
      const double up = upper_bounds(s, m);
      c.eq("lower bound " + tag, lo, table_lower(m, d), kClosedTol);
      c.eq("MUB value " + tag, mub, table_mub(m, d), kClosedTol);
      c.eq("upper bound tight " + tag, up, mub, kClosedTol);
      c.le("lower <= MUB " + tag, lo, mub, kClosedTol);
      row.insert(row.end(), {lo, mub, up});
    }
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult mub_values(const RobustnessOptions& opts) {
  ReproResult r;
  Checker c(&r);
  Table t;
  t.columns = {"d"};
  for (NM m : kAllNoiseModels) t.columns.push_back("eta_" + name_of(m));
  for (NM m : kAllNoiseModels) t.columns.push_back("closed_" + name_of(m));
  for (int d = 2; d <= 5; ++d) {
    const MeasurementSet s = mub_pair(d);
    std::vector<double> row{double(d)}, closed;
    for (NM m : kAllNoiseModels) {
      const RobustnessResult res = solve_robustness(s, m, opts);
      const std::string tag = name_of(m) + " d=" + std::to_string(d);
      c.eq("eta " + tag, res.eta, mub_closed_form(d, m), kSdpTol);
      c.le("gap " + tag, res.gap, 1e-7 * (1 + std::abs(res.eta)));
      row.push_back(res.eta);
      closed.push_back(mub_closed_form(d, m));
    }
    row.insert(row.end(), closed.begin(), closed.end());
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult fig_runex(const RobustnessOptions& opts) {
  ReproResult r;
  Checker c(&r);
  Table t = figure_curves(Figure::kRunex, 50, opts);
  double dev[5] = {0, 0, 0, 0, 0};
  for (const auto& row : t.rows) {
    for (int m = 0; m < 5; ++m) {
      const double closed = row[6 + std::max(0, m - 2)];
      dev[m] = std::max(dev[m], std::abs(row[1 + m] - closed));
    }
  }
  for (int m = 0; m < 5; ++m) {
    c.eq("max |eta_" + name_of(kAllNoiseModels[m]) + " - closed form|", dev[m], 0.0, kSdpTol);
  }
  const double cs = std::cos(kPi / 8) + std::sin(kPi / 8);
  c.eq("eta_d(pi/8)", 1 / cs, 0.76537, 5e-6);
  c.eq("eta_g(pi/8)", (kSqrt2 + 1) / (kSqrt2 + cs), 0.88733, 5e-6);
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult fig_devil(const RobustnessOptions& opts) {
  ReproResult r;
  Checker c(&r);
  Table t = figure_curves(Figure::kDevil, 9, opts);
  const auto& dev = t.rows.front();
  const auto& mub = t.rows.back();
  const auto qmub = *std::find_if(t.rows.begin(), t.rows.end(),
                                  [](const auto& row) { return std::abs(row[0] - 1) < 1e-12; });
  // columns: s, leg, param, d, p, jm, g
  c.eq("qMUB eta_d", qmub[3], 0.5 * (1 + kSqrt2 / (3 + kSqrt2)), kSdpTol);
  c.eq("qMUB eta_d (quoted)", qmub[3], 0.6602, 5e-4);
  c.eq("dev eta_p (quoted)", dev[4], 0.6813, 5e-4);
  c.eq("MUB eta_d", mub[3], mub_closed_form(3, NM::kDepolarising), kSdpTol);
  c.eq("MUB eta_d (quoted)", mub[3], 0.6830, 5e-4);
  c.eq("MUB eta_jm", mub[5], mub_closed_form(3, NM::kJointlyMeasurable), kSdpTol);
  c.eq("MUB eta_g", mub[6], mub_closed_form(3, NM::kGeneralised), kSdpTol);
  double min_jm = 1, min_g = 1;
  for (const auto& row : t.rows) {
    min_jm = std::min(min_jm, row[5]);
    min_g = std::min(min_g, row[6]);
  }
  c.le("MUB minimizes eta_jm on the path", mub[5], min_jm, 1e-6);
  c.le("MUB minimizes eta_g on the path", mub[6], min_g, 1e-6);
  c.lt("qMUB beats MUB for eta_d", qmub[3], mub[3]);
  c.lt("dev beats MUB for eta_p", dev[4], mub[4]);
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult fig_chi(const RobustnessOptions& opts) {
  ReproResult r;
  Checker c(&r);
  Table t = figure_curves(Figure::kChi, 15, opts);
  // columns: d, mub_d, best_p, qmub_d, universal_d
  for (const auto& row : t.rows) {
    const int d = int(row[0]);
    const std::string tag = " d=" + std::to_string(d);
    c.le("universal <= qMUB" + tag, row[4], row[3], kClosedTol);
    if (d >= 3) c.lt("qMUB beats MUB" + tag, row[3], row[1]);
    if (d >= 3 && !std::isnan(row[2])) c.lt("best p beats MUB" + tag, row[2], row[1]);
    if (d == 8) c.eq("qMUB eta_d d=8", row[3], 0.57511, 5e-6);
  }
  for (int d = 3; d <= 5; ++d) {
    c.eq("SDP eta_d qMUB(" + std::to_string(d) + ")",
         eta_of(embedded_qubit_mub(d), NM::kDepolarising, opts), t.rows[d - 2][3], kSdpTol);
  }
  for (int d : {4, 6}) {
    c.eq("SDP eta_p qubit blocks d=" + std::to_string(d),
         eta_of(block_qubit_mub(d), NM::kProbabilistic, opts), t.rows[d - 2][2], kSdpTol);
  }
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult ctrex_1(const RobustnessOptions& opts) {
  ReproResult r;
  Checker c(&r);
  const MeasurementSet s = ctrex_preprocessed_pair();
  const double bound = (14 * std::sqrt(39.0) - 3) / 120;
  c.eq("tr A^L_2", s[0][1].trace(), 2.0, kClosedTol);
  const DualCheck dc = certify_dual(s, NM::kDepolarising, ctrex_preprocessed_dual());
  c.le("dual point cone violation", dc.cone_violation, 1e-12);
  c.le("dual point scalar violation", dc.scalar_violation, 1e-12);
  c.eq("dual bound", dc.objective, bound, kClosedTol);
  c.eq("dual bound (quoted)", dc.objective, 0.7036, 5e-5);
  c.lt("dual bound below 1/sqrt2", dc.objective, 1 / kSqrt2);
  const double before = eta_of(qubit_mub(), NM::kDepolarising, opts);
  const double after = eta_of(s, NM::kDepolarising, opts);
  c.eq("eta_d(A,B)", before, 1 / kSqrt2, kSdpTol);
  c.le("eta_d(A^L,B^L) <= dual bound", after, bound, 1e-7);
  c.eq("standard upper bound", upper_bounds(s, NM::kDepolarising), (9 * kSqrt2 - 1) / 14,
       kClosedTol);
  c.eq("trace-normalized upper bound", trace_normalized_upper_bounds(s, NM::kDepolarising),
       3 * (std::sqrt(13.0) + 1) / 10, kClosedTol);
  Table t{{"eta_d_before", "eta_d_after", "dual_bound"}, {{before, after, dc.objective}}};
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult ctrex_2(const RobustnessOptions& opts) {
  ReproResult r;
  Checker c(&r);
  const MeasurementSet p0 = ctrex_convexity_pair(0), p1 = ctrex_convexity_pair(1);
  const MeasurementSet mid = mix(p0, p1, 0.5);
  const double e0 = eta_of(p0, NM::kDepolarising, opts);
  const double e1 = eta_of(p1, NM::kDepolarising, opts);
  const double em = eta_of(mid, NM::kDepolarising, opts);
  c.eq("eta_d(A^0,B^0)", e0, std::sqrt((5 + std::sqrt(5.0)) / 10), kSdpTol);
  c.eq("eta_d(A^1,B^1)", e1, 1.0, kSdpTol);
  c.eq("eta_d(mid)", em, std::sqrt((25 + std::sqrt(13.0)) / 34), kSdpTol);
  const double avg_inv = 0.5 * (1 / e0 + 1 / e1);
  c.eq("mean of 1/eta (quoted)", avg_inv, 1.0878, 1e-4);
  c.eq("1/eta of mid (quoted)", 1 / em, 1.0902, 1e-4);
  c.lt("1/eta_d not convex", avg_inv, 1 / em, 1e-6);
  Table t{{"eta_d_0", "eta_d_1", "eta_d_mid", "mean_inverse", "inverse_mid"},
          {{e0, e1, em, avg_inv, 1 / em}}};
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult ctrex_3(const RobustnessOptions& opts) {
  ReproResult r;
  Checker c(&r);
  const MeasurementSet s = ctrex_split_pair();
  const MeasurementSet ab = qubit_mub();
  const double bound = (14 * std::sqrt(39.0) - 3) / 120;
  c.eq("A^b_1 = A_1/2", (s[0][0] - ab[0][0] * 0.5).max_abs(), 0.0, kClosedTol);
  c.eq("A^b_3 = A_2", (s[0][2] - ab[0][1]).max_abs(), 0.0, kClosedTol);
  const DualCheck dc = certify_dual(s, NM::kRandom, ctrex_split_dual());
  c.le("dual point cone violation", dc.cone_violation, 1e-12);
  c.le("dual point scalar violation", dc.scalar_violation, 1e-12);
  c.eq("dual bound", dc.objective, bound, kClosedTol);
  c.lt("dual bound below 1/sqrt2", dc.objective, 1 / kSqrt2);
  const double before = eta_of(ab, NM::kRandom, opts);
  const double after = eta_of(s, NM::kRandom, opts);
  c.eq("eta_r(A,B)", before, 1 / kSqrt2, kSdpTol);
  c.le("eta_r(A^b,B) <= dual bound", after, bound, 1e-7);
  c.eq("trace-normalized upper bound (d)", trace_normalized_upper_bounds(s, NM::kDepolarising),
       1 / kSqrt2, kClosedTol);
  c.eq("standard upper bound (d)", upper_bounds(s, NM::kDepolarising), (4 * kSqrt2 + 1) / 7,
       kClosedTol);
  Table t{{"eta_r_before", "eta_r_after", "dual_bound"}, {{before, after, dc.objective}}};
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult ctrex_4(const RobustnessOptions& opts) {
  ReproResult r;
  Checker c(&r);
  const MeasurementSet p0 = ctrex_convexity_pair(0);
  const double d0 = eta_of(p0, NM::kDepolarising, opts);
  const double r0 = eta_of(p0, NM::kRandom, opts);
  c.eq("eta_d(A^0,B^0)", d0, std::sqrt((5 + std::sqrt(5.0)) / 10), kSdpTol);
  c.eq("eta_r(A^0,B^0)", r0, kSqrt3 / 2, kSdpTol);
  c.lt("eta_d < eta_r on (A^0,B^0)", d0, r0, 1e-6);

  const MeasurementSet q = ctrex_qutrit_pair(false);
  const double min_eig = min_eigenvalue(q[1][0]);
  r.notes.push_back("published B^2_1 has minimum eigenvalue " + format_number(min_eig, 6) +
                    "; the programs are solved without input validation");
  RobustnessOptions loose = opts;
  loose.validate_input = false;
  const double d2 = eta_of(q, NM::kDepolarising, loose);
  const double r2 = eta_of(q, NM::kRandom, loose);
  c.eq("eta_r(A^2,B^2) (quoted)", r2, 0.8799, kSdpTol);
  c.eq("eta_d(A^2,B^2) (quoted)", d2, 0.8816, kSdpTol);
  c.lt("eta_r < eta_d on (A^2,B^2)", r2, d2, 1e-6);

  const MeasurementSet qc = ctrex_qutrit_pair(true);
  const double dc = eta_of(qc, NM::kDepolarising, opts);
  const double rc = eta_of(qc, NM::kRandom, opts);
  c.lt("eta_r < eta_d on the PSD variant", rc, dc, 1e-6);
  Table t{{"pair", "eta_d", "eta_r"}, {{0, d0, r0}, {2, d2, r2}, {3, dc, rc}}};
  r.notes.push_back("pair 3 is the PSD variant with B_1(1,1) = 1/24");
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult ctrex_5(const RobustnessOptions& opts) {
  ReproResult r;
  Checker c(&r);
  const MeasurementSet p0 = ctrex_concavity_pair(0), p1 = ctrex_concavity_pair(1);
  const MeasurementSet mid = mix(p0, p1, 0.5);
  Table t{{"measure", "eta_0", "eta_1", "eta_mid", "mean"}, {}};
  int idx = 0;
  for (NM m : kAllNoiseModels) {
    const double e0 = eta_of(p0, m, opts), e1 = eta_of(p1, m, opts), em = eta_of(mid, m, opts);
    c.lt("eta_" + name_of(m) + " not concave", em, 0.5 * (e0 + e1), 1e-6);
    t.rows.push_back({double(idx++), e0, e1, em, 0.5 * (e0 + e1)});
  }
  r.notes.push_back("measure column indexes d, r, p, jm, g");
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult triplet_qubit(const RobustnessOptions& opts) {
  ReproResult r;
  Checker c(&r);
  const MeasurementSet s = prime_mub_set(2, 3);
  const TripletTable tb = qubit_triplet_bounds();
  const double want_d = 1 / kSqrt3, want_jm = kSqrt3 - 1, want_g = 0.5 * (1 + 1 / kSqrt3);
  c.eq("closed d", tb.d, want_d, kClosedTol);
  c.eq("closed p", tb.p, want_d, kClosedTol);
  c.eq("closed jm", tb.jm, want_jm, kClosedTol);
  c.eq("closed g", tb.g, want_g, kClosedTol);
  Table t{{"eta_d", "eta_p", "eta_jm", "eta_g"}, {{}}};
  const std::pair<NM, double> want[] = {{NM::kDepolarising, want_d},
                                        {NM::kProbabilistic, want_d},
                                        {NM::kJointlyMeasurable, want_jm},
                                        {NM::kGeneralised, want_g}};
  for (const auto& [m, v] : want) {
    const double e = eta_of(s, m, opts);
    c.eq("SDP eta_" + name_of(m), e, v, kSdpTol);
    t.rows[0].push_back(e);
  }
  const TripletParent mp = qubit_triplet_parent(s);
  c.le("MUB triplet parent PSD", -mp.min_eigenvalue, 1e-12);
  c.le("MUB triplet parent marginals", mp.marginal_residual, kClosedTol);
  std::mt19937_64 rng(2026);
  int bad = 0;
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<Povm> povms;
    for (int x = 0; x < 3; ++x) povms.push_back(random_rank_one_povm(2, 2 + (i + x) % 2, rng));
    const TripletParent tp = qubit_triplet_parent(MeasurementSet(std::move(povms)));
    if (!tp.psd) ++bad;
    worst = std::max(worst, tp.marginal_residual);
  }
  c.eq("random triplets with a non-PSD parent", bad, 0, 0);
  c.le("random triplet marginal residual", worst, kClosedTol);
  r.tables.push_back({"", std::move(t)});
  return r;
}

ReproResult table_embed(const RobustnessOptions&) {
  ReproResult r;
  Checker c(&r);
  const std::map<std::pair<int, int>, double> printed = {
      {{2, 2}, 0.5774}, {{2, 3}, 0.5273}, {{2, 4}, 0.4975}, {{2, 5}, 0.4778}, {{2, 6}, 0.4605},
      {{3, 3}, 0.4818}, {{3, 4}, 0.4514}, {{3, 5}, 0.4314}, {{3, 6}, 0.4114},
      {{4, 4}, 0.4309}, {{4, 5}, 0.4128}, {{4, 6}, 0.4},
      {{5, 5}, 0.3863}, {{5, 6}, 0.3620}};
  r.notes.push_back("the (5, 5) entry is printed as 0.6863; the construction gives 0.3863");
  Table t{{"d_i", "d_f", "value", "printed"}, {}};
  for (const auto& [key, want] : printed) {
    const double v = embedding_table_value(key.first, key.second);
    c.eq("embedding " + std::to_string(key.first) + "->" + std::to_string(key.second), v, want,
         kSdpTol);
    t.rows.push_back({double(key.first), double(key.second), v, want});
  }
  c.eq("embedding 4->6 exact", embedding_table_value(4, 6), 0.4, kClosedTol);
  r.tables.push_back({"", std::move(t)});
  return r;
}

}  // namespace

UnitalChannel ctrex_channel() {
  CMatrix k1 = CMatrix::Zero(3, 2), k2 = CMatrix::Zero(3, 2);
  k1(0, 0) = 1;
  k1(1, 1) = 1;
  k2(2, 1) = 1;
  return UnitalChannel{{k1, k2}};
}

MeasurementSet ctrex_preprocessed_pair() {
  return apply_pre_processing(qubit_mub(), ctrex_channel());
}

DualCertificate ctrex_preprocessed_dual() {
  const double r39 = std::sqrt(39.0);
  const double y00 = (2 * r39 - 99) / 40, y11 = (4 * r39 - 63) / 60;
  DualCertificate cert;
  cert.x = {{real_matrix({{9.0 / 4, 0, 0}, {0, 27.0 / 20, 0}, {0, 0, 3.0 / 4}}),
             real_matrix({{27.0 / 10, 0, 0}, {0, 3.0 / 4, 0}, {0, 0, 3.0 / 4}})},
            {real_matrix({{y00, -0.25, 0}, {-0.25, y11, 0}, {0, 0, -0.75}}),
             real_matrix({{y00, 0.25, 0}, {0.25, y11, 0}, {0, 0, -0.75}})}};
  return cert;
}

MeasurementSet ctrex_split_pair() {
  RMatrix beta(3, 2);
  beta << 0.5, 0, 0.5, 0, 0, 1;
  const MeasurementSet ab = qubit_mub();
  return MeasurementSet({apply_post_processing(ab[0], beta), ab[1]});
}

DualCertificate ctrex_split_dual() {
  const double r39 = std::sqrt(39.0);
  const double y00 = (4 * r39 - 63) / 60, y11 = (2 * r39 - 99) / 40;
  const HermitianMatrix x12 = real_matrix({{3.0 / 4, 0}, {0, 27.0 / 10}});
  DualCertificate cert;
  cert.x = {{x12, x12, real_matrix({{27.0 / 20, 0}, {0, 9.0 / 4}})},
            {real_matrix({{y00, -0.25}, {-0.25, y11}}), real_matrix({{y00, 0.25}, {0.25, y11}})}};
  return cert;
}

MeasurementSet ctrex_convexity_pair(int which) {
  const MeasurementSet ab = qubit_mub();
  if (which == 0) {
    return MeasurementSet({Povm({real_matrix({{1, 0}, {0, 0.5}}), real_matrix({{0, 0}, {0, 0.5}})}),
                           ab[1]});
  }
  if (which == 1) {
    return MeasurementSet(
        {Povm({HermitianMatrix::identity(2), HermitianMatrix::zero(2)}), ab[1]});
  }
  throw Error(ErrorCode::kDomainError, "pair index must be 0 or 1");
}

MeasurementSet ctrex_qutrit_pair(bool corrected) {
  const double b00 = corrected ? 1.0 / 24 : 1.0 / 32;
  const Povm a({real_matrix({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}),
                real_matrix({{0, 0, 0}, {0, 1, 0}, {0, 0, 1}})});
  const Povm b({real_matrix({{b00, 0.125, -0.125}, {0.125, 0.75, -0.125}, {-0.125, -0.125, 0.75}}),
                real_matrix({{1 - b00, -0.125, 0.125}, {-0.125, 0.25, 0.125}, {0.125, 0.125, 0.25}})});
  return MeasurementSet({a, b});
}

MeasurementSet ctrex_concavity_pair(int which) {
  if (which == 0) {
    return MeasurementSet({Povm::computational_basis(2),
                           Povm({real_matrix({{0.05, 0.05}, {0.05, 0.95}}),
                                 real_matrix({{0.95, -0.05}, {-0.05, 0.05}})})});
  }
  if (which == 1) {
    CMatrix ua(2, 2), ub(2, 2);
    ua << std::sqrt(19.0 / 20), std::sqrt(1.0 / 20), std::sqrt(1.0 / 20), -std::sqrt(19.0 / 20);
    ub << std::sqrt(1.0 / 5), std::sqrt(4.0 / 5), std::sqrt(4.0 / 5), -std::sqrt(1.0 / 5);
    return MeasurementSet({Povm::from_basis(ua), Povm::from_basis(ub)});
  }
  throw Error(ErrorCode::kDomainError, "pair index must be 0 or 1");
}

const std::vector<std::string>& repro_targets() {
  static const std::vector<std::string> ids = {
      "table-magic", "fig-runex", "fig-devil", "fig-chi", "mub-values", "ctrex-1", "ctrex-2",
      "ctrex-3",     "ctrex-4",   "ctrex-5",   "triplet-qubit", "table-embed"};
  return ids;
}

ReproResult reproduce(std::string_view target, const RobustnessOptions& opts) {
  using Fn = std::function<ReproResult(const RobustnessOptions&)>;
  static const std::map<std::string, Fn, std::less<>> fns = {
      {"table-magic", table_magic}, {"fig-runex", fig_runex},   {"fig-devil", fig_devil},
      {"fig-chi", fig_chi},         {"mub-values", mub_values}, {"ctrex-1", ctrex_1},
      {"ctrex-2", ctrex_2},         {"ctrex-3", ctrex_3},       {"ctrex-4", ctrex_4},
      {"ctrex-5", ctrex_5},         {"triplet-qubit", triplet_qubit},
      {"table-embed", table_embed}};
  const auto it = fns.find(target);
  if (it == fns.end()) throw Error(ErrorCode::kUnknownId, "unknown target " + std::string(target));
  ReproResult r = it->second(opts);
  r.target = std::string(target);
  return r;
}

Json repro_to_json(const ReproResult& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"relation", c.relation},
                      {"actual", std::stod(format_number(c.actual, 12))},
                      {"expected", std::stod(format_number(c.expected, 12))},
                      {"tol", c.tol},
                      {"pass", c.pass}});
  }
  Json tables = Json::object();
  for (const auto& [name, t] : r.tables) tables[name.empty() ? "main" : name] = table_to_json(t);
  return {{"target", r.target},
          {"pass", r.pass},
          {"checks", checks},
          {"notes", r.notes},
          {"tables", tables}};
}

void write_repro_outputs(const ReproResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  for (const auto& [name, t] : r.tables) {
    const std::string file = r.target + (name.empty() ? "" : "-" + name) + ".csv";
    write_csv((base / file).string(), t);
  }
  write_json_file((base / (r.target + ".json")).string(), repro_to_json(r));
}

}  // namespace incompat
