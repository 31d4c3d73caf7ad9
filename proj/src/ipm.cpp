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

// Infeasible-start primal-dual interior-point method with the HKM search
// direction and Mehrotra predictor-corrector steps. Blocks are complex
// Hermitian; real data keeps every iterate real.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "incompat/sdp.hpp"

namespace incompat::sdp {

namespace {

// Re tr(A B) for general square A, B.
double re_trace(const CMatrix& a, const CMatrix& b) {
  return (a.array() * b.transpose().array()).real().sum();
}

CMatrix herm(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

struct Entry {
  int row;
  const CMatrix* coeff;
};

struct LpEntry {
  int row;
  double coeff;
};

struct Iterate {
  std::vector<CMatrix> x, z;
  RVector xl, zl, xf, y;
};

class Solver {
 public:
  Solver(const StandardForm& sf, const SolverOptions& opts) : sf_(sf), opts_(opts) {}

  StandardSolution run();

 private:
  bool reduce_rows(std::string* message);
  RVector apply_a(const std::vector<CMatrix>& x, const RVector& xl, const RVector& xf) const;
  void apply_at(const RVector& y, std::vector<CMatrix>* out, RVector* out_lp,
                RVector* out_free) const;
  double max_step(const CMatrix& x, const CMatrix& dx) const;
  static double max_step_lp(const RVector& x, const RVector& dx);

  const StandardForm& sf_;
  SolverOptions opts_;
  std::vector<int> kept_;                      // original row ids kept
  RVector b_;                                  // reduced right-hand side
  std::vector<std::vector<Entry>> by_block_;   // reduced rows touching each block
  std::vector<std::vector<LpEntry>> by_lp_;    // reduced rows touching each LP entry
  std::vector<std::vector<LpEntry>> by_free_;  // reduced rows touching each free entry
  std::vector<int> free_kept_;                 // free columns that are independent
};

// Greedy Cholesky over the columns of a Gram matrix; returns the indices
// of a maximal independent subset in order, and the Cholesky factor of
// the kept part in *chol.
std::vector<int> independent_subset(const RMatrix& gram, RMatrix* chol) {
  const int n = static_cast<int>(gram.rows());
  *chol = RMatrix::Zero(n, n);
  std::vector<int> kept;
  for (int i = 0; i < n; ++i) {
    const double gii = gram(i, i);
    const int r = static_cast<int>(kept.size());
    RVector col(r);
    for (int t = 0; t < r; ++t) col(t) = gram(kept[t], i);
    RVector l = r > 0 ? RVector(chol->topLeftCorner(r, r).triangularView<Eigen::Lower>().solve(col))
                      : RVector(0);
    const double res = gii - l.squaredNorm();
    if (gii > 0.0 && res > 1e-10 * gii) {
      chol->row(r).head(r) = l.transpose();
      (*chol)(r, r) = std::sqrt(res);
      kept.push_back(i);
    }
  }
  return kept;
}

bool Solver::reduce_rows(std::string* message) {
  const int m0 = static_cast<int>(sf_.rows.size());
  const int nb = static_cast<int>(sf_.block_dims.size());
  std::vector<std::vector<Entry>> blocks0(nb);
  std::vector<std::vector<LpEntry>> lp0(sf_.lp_size), free0(sf_.free_size);
  for (int i = 0; i < m0; ++i) {
    for (const auto& [k, m] : sf_.rows[i].blocks) blocks0[k].push_back({i, &m});
    for (const auto& [k, v] : sf_.rows[i].lp) lp0[k].push_back({i, v});
    for (const auto& [k, v] : sf_.rows[i].free) free0[k].push_back({i, v});
  }
  // Gram matrix of the constraint rows.
  RMatrix gram = RMatrix::Zero(m0, m0);
  for (int k = 0; k < nb; ++k) {
    const auto& list = blocks0[k];
    for (std::size_t p = 0; p < list.size(); ++p) {
      for (std::size_t q = p; q < list.size(); ++q) {
        const double v = re_trace(*list[p].coeff, *list[q].coeff);
        gram(list[p].row, list[q].row) += v;
        if (p != q) gram(list[q].row, list[p].row) += v;
      }
    }
  }
  for (const auto* lists : {&lp0, &free0}) {
    for (const auto& list : *lists) {
      for (std::size_t p = 0; p < list.size(); ++p) {
        for (std::size_t q = p; q < list.size(); ++q) {
          const double v = list[p].coeff * list[q].coeff;
          gram(list[p].row, list[q].row) += v;
          if (p != q) gram(list[q].row, list[p].row) += v;
        }
      }
    }
  }
  // Greedy Cholesky in row order, skipping rows that depend on earlier ones.
  RMatrix chol = RMatrix::Zero(m0, m0);
  std::vector<int> kept;
  for (int i = 0; i < m0; ++i) {
    const double gii = gram(i, i);
    const int r = static_cast<int>(kept.size());
    RVector col(r);
    for (int t = 0; t < r; ++t) col(t) = gram(kept[t], i);
    RVector l = r > 0 ? RVector(chol.topLeftCorner(r, r).triangularView<Eigen::Lower>().solve(col))
                      : RVector(0);
    const double res = gii - l.squaredNorm();
    if (gii > 0.0 && res > 1e-10 * gii) {
      chol.row(r).head(r) = l.transpose();
      chol(r, r) = std::sqrt(res);
      kept.push_back(i);
      continue;
    }
    // Dependent row: its right-hand side must follow from the kept rows.
    double predicted = 0.0;
    if (r > 0) {
      const RVector coef =
          chol.topLeftCorner(r, r).transpose().triangularView<Eigen::Upper>().solve(l);
      for (int t = 0; t < r; ++t) predicted += coef(t) * sf_.rows[kept[t]].b;
    }
    if (std::abs(sf_.rows[i].b - predicted) > 1e-8 * (1.0 + std::abs(sf_.rows[i].b))) {
      *message = "inconsistent linear constraints";
      return false;
    }
  }
  kept_ = kept;
  std::vector<int> reduced_index(m0, -1);
  for (std::size_t t = 0; t < kept_.size(); ++t) reduced_index[kept_[t]] = static_cast<int>(t);
  b_.resize(static_cast<int>(kept_.size()));
  for (std::size_t t = 0; t < kept_.size(); ++t) b_(t) = sf_.rows[kept_[t]].b;
  by_block_.assign(nb, {});
  by_lp_.assign(sf_.lp_size, {});
  by_free_.assign(sf_.free_size, {});
  for (int k = 0; k < nb; ++k) {
    for (const auto& e : blocks0[k]) {
      if (reduced_index[e.row] >= 0) by_block_[k].push_back({reduced_index[e.row], e.coeff});
    }
  }
  for (int k = 0; k < sf_.lp_size; ++k) {
    for (const auto& e : lp0[k]) {
      if (reduced_index[e.row] >= 0) by_lp_[k].push_back({reduced_index[e.row], e.coeff});
    }
  }
  for (int k = 0; k < sf_.free_size; ++k) {
    for (const auto& e : free0[k]) {
      if (reduced_index[e.row] >= 0) by_free_[k].push_back({reduced_index[e.row], e.coeff});
    }
  }
  // Free columns that depend on others leave the objective and constraints
  // unchanged along some direction; they are pinned at zero.
  RMatrix fgram = RMatrix::Zero(sf_.free_size, sf_.free_size);
  {
    RMatrix f = RMatrix::Zero(static_cast<int>(kept_.size()), sf_.free_size);
    for (int k = 0; k < sf_.free_size; ++k) {
      for (const auto& e : by_free_[k]) f(e.row, k) += e.coeff;
    }
    fgram = f.transpose() * f;
  }
  RMatrix fchol;
  free_kept_ = independent_subset(fgram, &fchol);
  return true;
}

RVector Solver::apply_a(const std::vector<CMatrix>& x, const RVector& xl,
                        const RVector& xf) const {
  RVector out = RVector::Zero(b_.size());
  for (std::size_t k = 0; k < by_block_.size(); ++k) {
    for (const auto& e : by_block_[k]) out(e.row) += re_trace(*e.coeff, x[k]);
  }
  for (std::size_t k = 0; k < by_lp_.size(); ++k) {
    for (const auto& e : by_lp_[k]) out(e.row) += e.coeff * xl(k);
  }
  for (std::size_t k = 0; k < by_free_.size(); ++k) {
    for (const auto& e : by_free_[k]) out(e.row) += e.coeff * xf(k);
  }
  return out;
}

void Solver::apply_at(const RVector& y, std::vector<CMatrix>* out, RVector* out_lp,
                      RVector* out_free) const {
  out->resize(by_block_.size());
  for (std::size_t k = 0; k < by_block_.size(); ++k) {
    const int d = sf_.block_dims[k];
    CMatrix m = CMatrix::Zero(d, d);
    for (const auto& e : by_block_[k]) m += y(e.row) * *e.coeff;
    (*out)[k] = std::move(m);
  }
  *out_lp = RVector::Zero(sf_.lp_size);
  for (std::size_t k = 0; k < by_lp_.size(); ++k) {
    for (const auto& e : by_lp_[k]) (*out_lp)(k) += e.coeff * y(e.row);
  }
  *out_free = RVector::Zero(sf_.free_size);
  for (std::size_t k = 0; k < by_free_.size(); ++k) {
    for (const auto& e : by_free_[k]) (*out_free)(k) += e.coeff * y(e.row);
  }
}

double Solver::max_step(const CMatrix& x, const CMatrix& dx) const {
  Eigen::LLT<CMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const CMatrix t = llt.matrixL().solve(dx);
  const CMatrix s = herm(CMatrix(llt.matrixL().solve(t.adjoint())).adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  return lo >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lo;
}

double Solver::max_step_lp(const RVector& x, const RVector& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (int i = 0; i < x.size(); ++i) {
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  }
  return a;
}

StandardSolution Solver::run() {
  StandardSolution out;
  const int nb = static_cast<int>(sf_.block_dims.size());
  const int m0 = static_cast<int>(sf_.rows.size());
  if (!reduce_rows(&out.message)) {
    out.status = SolveStatus::kInfeasible;
    return out;
  }
  const int m = static_cast<int>(kept_.size());
  const int nf = sf_.free_size;
  double n_cone = sf_.lp_size;
  for (int d : sf_.block_dims) n_cone += d;
  if (n_cone == 0) {
    out.message = "no conic variables";
    out.status = SolveStatus::kInfeasible;
    return out;
  }

  double c_norm2 = sf_.c_lp.squaredNorm() + sf_.c_free.squaredNorm();
  for (const auto& c : sf_.c_blocks) c_norm2 += c.squaredNorm();
  const double c_norm = std::sqrt(c_norm2);
  const double b_norm = b_.norm();

  // Starting point scaled from the data.
  RVector row_norm2 = RVector::Zero(m);
  for (int k = 0; k < nb; ++k) {
    for (const auto& e : by_block_[k]) row_norm2(e.row) += e.coeff->squaredNorm();
  }
  for (int k = 0; k < sf_.lp_size; ++k) {
    for (const auto& e : by_lp_[k]) row_norm2(e.row) += e.coeff * e.coeff;
  }
  for (int k = 0; k < nf; ++k) {
    for (const auto& e : by_free_[k]) row_norm2(e.row) += e.coeff * e.coeff;
  }
  double alpha = 1.0, max_row = 0.0;
  for (int i = 0; i < m; ++i) {
    const double rn = std::sqrt(row_norm2(i));
    alpha = std::max(alpha, n_cone * (1.0 + std::abs(b_(i))) / (1.0 + rn));
    max_row = std::max(max_row, rn);
  }
  const double beta = std::max(1.0, (1.0 + std::max(max_row, c_norm)) / std::sqrt(n_cone));

  Iterate it;
  for (int k = 0; k < nb; ++k) {
    const int d = sf_.block_dims[k];
    it.x.push_back(CMatrix::Identity(d, d) * (10.0 * alpha));
    it.z.push_back(CMatrix::Identity(d, d) * (10.0 * beta));
  }
  it.xl = RVector::Constant(sf_.lp_size, 10.0 * alpha);
  it.zl = RVector::Constant(sf_.lp_size, 10.0 * beta);
  it.xf = RVector::Zero(nf);
  it.y = RVector::Zero(m);

  Iterate best = it;
  double best_merit = std::numeric_limits<double>::infinity();
  double best_p = 0, best_d = 0, best_g = 0, best_pobj = 0, best_dobj = 0;
  int stalls = 0;
  out.status = SolveStatus::kMaxIter;

  std::vector<CMatrix> aty, rd(nb), zinv(nb), xrz(nb);
  RVector aty_lp, rd_lp, aty_free, rd_free;
  for (int iter = 0; iter <= opts_.max_iter; ++iter) {
    out.iterations = iter;
    const RVector rp = b_ - apply_a(it.x, it.xl, it.xf);
    apply_at(it.y, &aty, &aty_lp, &aty_free);
    double rd_norm2 = 0.0, pobj = sf_.objective_constant, xz = 0.0;
    for (int k = 0; k < nb; ++k) {
      rd[k] = sf_.c_blocks[k] - it.z[k] - aty[k];
      rd_norm2 += rd[k].squaredNorm();
      pobj += re_trace(sf_.c_blocks[k], it.x[k]);
      xz += re_trace(it.x[k], it.z[k]);
    }
    rd_lp = sf_.c_lp - it.zl - aty_lp;
    rd_norm2 += rd_lp.squaredNorm();
    rd_free = sf_.c_free - aty_free;
    rd_norm2 += rd_free.squaredNorm();
    pobj += sf_.c_lp.dot(it.xl) + sf_.c_free.dot(it.xf);
    xz += it.xl.dot(it.zl);
    const double dobj = sf_.objective_constant + b_.dot(it.y);
    const double mu = xz / n_cone;
    const double pinf = rp.norm() / (1.0 + b_norm);
    const double dinf = std::sqrt(rd_norm2) / (1.0 + c_norm);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (opts_.verbose) {
      std::fprintf(stderr, "ipm %3d  pobj % .12e  dobj % .12e  pinf %.2e  dinf %.2e  gap %.2e  mu %.2e\n",
                   iter, pobj, dobj, pinf, dinf, gap, mu);
    }
    const double merit = std::max({pinf, dinf, gap});
    if (merit < best_merit) {
      best_merit = merit;
      best = it;
      best_p = pinf;
      best_d = dinf;
      best_g = gap;
      best_pobj = pobj;
      best_dobj = dobj;
    }
    if (pinf <= opts_.tol && dinf <= opts_.tol && gap <= opts_.tol) {
      out.status = SolveStatus::kOptimal;
      best_p = pinf;
      best_d = dinf;
      best_g = gap;
      best_pobj = pobj;
      best_dobj = dobj;
      break;
    }
    if (!std::isfinite(merit)) {
      out.message = "non-finite iterate";
      break;
    }
    if (iter == opts_.max_iter) break;
    double x_size = it.xl.cwiseAbs().sum() + it.xf.cwiseAbs().sum(), y_size = it.y.cwiseAbs().maxCoeff();
    for (const auto& x : it.x) x_size += x.trace().real();
    if (x_size > 1e12 * (1.0 + b_norm) || (m > 0 && y_size > 1e12 * (1.0 + c_norm))) {
      out.status = SolveStatus::kInfeasible;
      out.message = x_size > 1e12 ? "primal iterates diverge (dual infeasible)"
                                  : "dual iterates diverge (primal infeasible)";
      break;
    }

    bool ok = true;
    for (int k = 0; k < nb; ++k) {
      const int d = sf_.block_dims[k];
      Eigen::LLT<CMatrix> llt(it.z[k]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      zinv[k] = herm(llt.solve(CMatrix::Identity(d, d)));
      xrz[k] = it.x[k] * rd[k] * zinv[k];
    }
    if (!ok) {
      out.message = "lost positive definiteness";
      break;
    }

    // Schur complement M_ij = sum_k Re tr(A_ik X_k A_jk Z_k^-1) + LP part.
    RMatrix schur = RMatrix::Zero(m, m);
    for (int k = 0; k < nb; ++k) {
      const auto& list = by_block_[k];
      for (std::size_t p = 0; p < list.size(); ++p) {
        const CMatrix w = it.x[k] * *list[p].coeff * zinv[k];
        for (std::size_t q = p; q < list.size(); ++q) {
          const double v = re_trace(w, *list[q].coeff);
          schur(list[p].row, list[q].row) += v;
          if (p != q) schur(list[q].row, list[p].row) += v;
        }
      }
    }
    for (int k = 0; k < sf_.lp_size; ++k) {
      const double ratio = it.xl(k) / it.zl(k);
      const auto& list = by_lp_[k];
      for (std::size_t p = 0; p < list.size(); ++p) {
        for (std::size_t q = p; q < list.size(); ++q) {
          const double v = list[p].coeff * list[q].coeff * ratio;
          schur(list[p].row, list[q].row) += v;
          if (p != q) schur(list[q].row, list[p].row) += v;
        }
      }
    }
    // Free variables make the system [[M, F], [F^T, 0]].
    Eigen::LLT<RMatrix> factor;
    Eigen::PartialPivLU<RMatrix> aug_factor;
    const int nfk = static_cast<int>(free_kept_.size());
    if (nfk == 0) {
      factor.compute(schur);
      if (factor.info() != Eigen::Success) {
        const double shift = 1e-13 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
        factor.compute(schur + shift * RMatrix::Identity(m, m));
        if (factor.info() != Eigen::Success) {
          out.message = "Schur complement not positive definite";
          break;
        }
      }
    } else {
      RMatrix aug = RMatrix::Zero(m + nfk, m + nfk);
      aug.topLeftCorner(m, m) = schur;
      for (int t = 0; t < nfk; ++t) {
        for (const auto& e : by_free_[free_kept_[t]]) {
          aug(e.row, m + t) += e.coeff;
          aug(m + t, e.row) += e.coeff;
        }
      }
      aug_factor.compute(aug);
    }

    struct Direction {
      std::vector<CMatrix> dx, dz;
      RVector dxl, dzl, dxf, dy;
    };
    auto direction = [&](const std::vector<CMatrix>& h, const RVector& hl) {
      Direction dir;
      RVector rhs = rp;
      for (int k = 0; k < nb; ++k) {
        const CMatrix t = h[k] - xrz[k];
        for (const auto& e : by_block_[k]) rhs(e.row) -= re_trace(*e.coeff, t);
      }
      RVector tl(sf_.lp_size);
      for (int k = 0; k < sf_.lp_size; ++k) {
        tl(k) = hl(k) - it.xl(k) * rd_lp(k) / it.zl(k);
        for (const auto& e : by_lp_[k]) rhs(e.row) -= e.coeff * tl(k);
      }
      dir.dxf = RVector::Zero(nf);
      if (nfk == 0) {
        dir.dy = m > 0 ? RVector(factor.solve(rhs)) : RVector(0);
      } else {
        RVector full(m + nfk);
        full.head(m) = rhs;
        for (int t = 0; t < nfk; ++t) full(m + t) = rd_free(free_kept_[t]);
        const RVector sol = aug_factor.solve(full);
        dir.dy = sol.head(m);
        for (int t = 0; t < nfk; ++t) dir.dxf(free_kept_[t]) = sol(m + t);
      }
      std::vector<CMatrix> atdy;
      RVector atdy_lp, atdy_free;
      apply_at(dir.dy, &atdy, &atdy_lp, &atdy_free);
      dir.dx.resize(nb);
      dir.dz.resize(nb);
      for (int k = 0; k < nb; ++k) {
        dir.dz[k] = rd[k] - atdy[k];
        dir.dx[k] = herm(h[k] - it.x[k] * dir.dz[k] * zinv[k]);
      }
      dir.dzl = rd_lp - atdy_lp;
      dir.dxl = hl - (it.xl.array() * dir.dzl.array() / it.zl.array()).matrix();
      return dir;
    };
    auto steps = [&](const Direction& dir, double frac, double* ap, double* ad) {
      double sp = max_step_lp(it.xl, dir.dxl), sd = max_step_lp(it.zl, dir.dzl);
      for (int k = 0; k < nb; ++k) {
        sp = std::min(sp, max_step(it.x[k], dir.dx[k]));
        sd = std::min(sd, max_step(it.z[k], dir.dz[k]));
      }
      *ap = std::min(1.0, frac * sp);
      *ad = std::min(1.0, frac * sd);
    };

    // Predictor.
    std::vector<CMatrix> h(nb);
    for (int k = 0; k < nb; ++k) h[k] = -it.x[k];
    RVector hl = -it.xl;
    const Direction aff = direction(h, hl);
    double ap = 0, ad = 0;
    steps(aff, 1.0, &ap, &ad);
    double xz_aff = 0.0;
    for (int k = 0; k < nb; ++k) {
      xz_aff += re_trace(it.x[k] + ap * aff.dx[k], it.z[k] + ad * aff.dz[k]);
    }
    xz_aff += (it.xl + ap * aff.dxl).dot(it.zl + ad * aff.dzl);
    const double mu_aff = std::max(0.0, xz_aff / n_cone);
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (int k = 0; k < nb; ++k) {
      h[k] = sigma * mu * zinv[k] - it.x[k] - aff.dx[k] * aff.dz[k] * zinv[k];
    }
    for (int k = 0; k < sf_.lp_size; ++k) {
      hl(k) = (sigma * mu - aff.dxl(k) * aff.dzl(k)) / it.zl(k) - it.xl(k);
    }
    const Direction dir = direction(h, hl);
    steps(dir, opts_.step_fraction, &ap, &ad);
    if (ap < 1e-10 && ad < 1e-10) {
      if (++stalls >= 3) {
        out.message = "step length stalled";
        break;
      }
    } else {
      stalls = 0;
    }
    for (int k = 0; k < nb; ++k) {
      it.x[k] = herm(it.x[k] + ap * dir.dx[k]);
      it.z[k] = herm(it.z[k] + ad * dir.dz[k]);
    }
    it.xl += ap * dir.dxl;
    it.xf += ap * dir.dxf;
    it.zl += ad * dir.dzl;
    it.y += ad * dir.dy;
  }

  if (out.status != SolveStatus::kOptimal) it = best;
  out.x_blocks = it.x;
  out.z_blocks = it.z;
  out.x_lp = it.xl;
  out.z_lp = it.zl;
  out.x_free = it.xf;
  out.y = RVector::Zero(m0);
  for (int t = 0; t < m; ++t) out.y(kept_[t]) = it.y(t);
  out.primal_infeasibility = best_p;
  out.dual_infeasibility = best_d;
  out.relative_gap = best_g;
  out.primal_objective = best_pobj;
  out.dual_objective = best_dobj;
  if (out.status == SolveStatus::kOptimal && out.message.empty()) out.message = "converged";
  return out;
}

}  // namespace

StandardSolution solve_standard(const StandardForm& sf, const SolverOptions& opts) {
  Solver s(sf, opts);
  return s.run();
}

}  // namespace incompat::sdp
