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

#include "incompat/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace incompat {

namespace {

bool is_prime(int d) {
  if (d < 2) return false;
  for (int q = 2; q * q <= d; ++q) {
    if (d % q == 0) return false;
  }
  return true;
}

CMatrix pauli(char c) {
  CMatrix m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix hadamard() {
  CMatrix h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  return h;
}

MeasurementSet basis_pair(const CMatrix& u) {
  const int d = static_cast<int>(u.rows());
  return MeasurementSet({Povm::computational_basis(d), Povm::from_basis(u)});
}

}  // namespace

Povm::Povm(std::vector<HermitianMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error(ErrorCode::kShapeMismatch, "POVM without elements");
  dim_ = elements_.front().dim();
  if (dim_ < 1) throw Error(ErrorCode::kShapeMismatch, "POVM of dimension 0");
  for (const auto& e : elements_) {
    if (e.dim() != dim_) throw Error(ErrorCode::kShapeMismatch, "POVM element dimensions differ");
  }
}

Povm Povm::computational_basis(int d) {
  return from_basis(CMatrix::Identity(d, d));
}

Povm Povm::from_basis(const CMatrix& u) {
  if (!is_unitary(u, 1e-10)) throw Error(ErrorCode::kNotUnitary, "basis matrix");
  std::vector<HermitianMatrix> el;
  for (int b = 0; b < u.cols(); ++b) el.push_back(HermitianMatrix::projector(u.col(b)));
  return Povm(std::move(el));
}

Povm Povm::trivial(int d, int n) {
  return Povm(std::vector<HermitianMatrix>(n, HermitianMatrix::identity(d) * (1.0 / n)));
}

HermitianMatrix Povm::sum() const {
  HermitianMatrix s(dim_);
  for (const auto& e : elements_) s += e;
  return s;
}

ValidationReport validate(const Povm& p, double tol) {
  ValidationReport r;
  r.valid = true;
  for (const auto& e : p.elements()) {
    const double lo = min_eigenvalue(e);
    const double res = std::max(0.0, -lo);
    r.psd_residuals.push_back(res);
    if (res > tol * (1.0 + e.frobenius_norm())) r.valid = false;
  }
  r.normalization_residual = (p.sum() - HermitianMatrix::identity(p.dim())).frobenius_norm();
  if (r.normalization_residual > tol) r.valid = false;
  return r;
}

MeasurementSet::MeasurementSet(std::vector<Povm> measurements)
    : measurements_(std::move(measurements)) {
  if (measurements_.empty()) throw Error(ErrorCode::kShapeMismatch, "empty measurement set");
  dim_ = measurements_.front().dim();
  for (const auto& m : measurements_) {
    if (m.dim() != dim_) throw Error(ErrorCode::kDimensionMismatch, "measurement dimensions differ");
  }
}

std::vector<int> MeasurementSet::outcome_counts() const {
  std::vector<int> n;
  for (const auto& m : measurements_) n.push_back(m.outcomes());
  return n;
}

std::size_t MeasurementSet::parent_size() const {
  std::size_t total = 1;
  for (const auto& m : measurements_) {
    const auto n = static_cast<std::size_t>(m.outcomes());
    if (total > std::numeric_limits<std::size_t>::max() / n) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= n;
  }
  return total;
}

ValidationReport validate(const MeasurementSet& s, double tol) {
  ValidationReport r;
  r.valid = true;
  for (const auto& m : s.measurements()) {
    const ValidationReport one = validate(m, tol);
    r.psd_residuals.insert(r.psd_residuals.end(), one.psd_residuals.begin(),
                           one.psd_residuals.end());
    r.normalization_residual = std::max(r.normalization_residual, one.normalization_residual);
    r.valid = r.valid && one.valid;
  }
  return r;
}

bool is_rank_one(const Povm& p, double tol) {
  for (const auto& e : p.elements()) {
    if (numerical_rank(e, tol) > 1) return false;
  }
  return true;
}

bool is_projective(const Povm& p, double tol) {
  for (const auto& e : p.elements()) {
    const CMatrix sq = e.matrix() * e.matrix();
    if ((sq - e.matrix()).norm() > tol) return false;
  }
  return true;
}

bool is_rank_one_projective(const Povm& p, double tol) {
  if (!is_projective(p, tol)) return false;
  for (const auto& e : p.elements()) {
    if (std::abs(e.trace() - 1.0) > tol) return false;
  }
  return true;
}

std::vector<int> unravel_index(std::size_t j, const std::vector<int>& shape) {
  std::vector<int> idx(shape.size());
  for (int x = static_cast<int>(shape.size()) - 1; x >= 0; --x) {
    idx[x] = static_cast<int>(j % shape[x]);
    j /= shape[x];
  }
  return idx;
}

HermitianMatrix ParentPovm::marginal(int x, int a) const {
  HermitianMatrix m(dim());
  for (std::size_t j = 0; j < elements.size(); ++j) {
    if (unravel_index(j, shape)[x] == a) m += elements[j];
  }
  return m;
}

MeasurementSet ParentPovm::marginals() const {
  std::vector<Povm> ms;
  for (int x = 0; x < static_cast<int>(shape.size()); ++x) {
    std::vector<HermitianMatrix> el(shape[x], HermitianMatrix(dim()));
    for (std::size_t j = 0; j < elements.size(); ++j) {
      el[unravel_index(j, shape)[x]] += elements[j];
    }
    ms.emplace_back(std::move(el));
  }
  return MeasurementSet(std::move(ms));
}

HermitianMatrix ParentPovm::sum() const {
  HermitianMatrix s(dim());
  for (const auto& g : elements) s += g;
  return s;
}

MeasurementSet qubit_theta_pair(double theta) {
  if (!(theta >= -1e-15 && theta <= std::numbers::pi / 4 + 1e-15)) {
    throw Error(ErrorCode::kDomainError, "theta must lie in [0, pi/4]");
  }
  const double c = std::cos(theta), s = std::sin(theta);
  auto element = [](double z, double x, int sign) {
    RMatrix m(2, 2);
    m << 1 + sign * z, sign * x, sign * x, 1 - sign * z;
    return HermitianMatrix::from_real(0.5 * m);
  };
  // a = 1 carries (-1)^1 = -1, a = 2 carries +1.
  Povm a({element(c, s, -1), element(c, s, +1)});
  Povm b({element(c, -s, -1), element(c, -s, +1)});
  return MeasurementSet({a, b});
}

MeasurementSet mub_pair(int d) {
  if (d < 2) throw Error(ErrorCode::kDomainError, "mub_pair needs d >= 2");
  return basis_pair(fourier_matrix(d));
}

MeasurementSet prime_mub_set(int d, int k) {
  if (!is_prime(d)) throw Error(ErrorCode::kNotPrime, std::to_string(d) + " is not prime");
  if (k < 1 || k > d + 1) throw Error(ErrorCode::kDomainError, "need 1 <= k <= d + 1");
  std::vector<Povm> bases{Povm::computational_basis(d)};
  for (int x = 0; x + 1 < k; ++x) {
    CMatrix u(d, d);
    if (d == 2) {
      const double r = 1.0 / std::sqrt(2.0);
      const Complex phase = x == 0 ? Complex(1, 0) : Complex(0, 1);
      for (int a = 0; a < 2; ++a) {
        u(0, a) = r;
        u(1, a) = (a == 0 ? 1.0 : -1.0) * r * phase;
      }
    } else {
      for (int a = 0; a < d; ++a) {
        for (int l = 0; l < d; ++l) {
          const long long e = (static_cast<long long>(x) * l * l + static_cast<long long>(a) * l) % d;
          u(l, a) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                               2.0 * std::numbers::pi * static_cast<double>(e) / d);
        }
      }
    }
    bases.push_back(Povm::from_basis(u));
  }
  return MeasurementSet(std::move(bases));
}

MeasurementSet complete_mub_set(int d) {
  if (d != 4) return prime_mub_set(d, d + 1);
  // Common eigenbases of the five maximal commuting sets of two-qubit Paulis.
  const char* sets[5][2] = {{"ZI", "IZ"}, {"XI", "IX"}, {"YI", "IY"},
                            {"XZ", "ZY"}, {"YZ", "ZX"}};
  std::vector<Povm> bases{Povm::computational_basis(4)};
  for (int s = 1; s < 5; ++s) {
    const CMatrix p1 = kron(pauli(sets[s][0][0]), pauli(sets[s][0][1]));
    const CMatrix p2 = kron(pauli(sets[s][1][0]), pauli(sets[s][1][1]));
    const Spectrum sp = eigh(CMatrix(p1 + 2.0 * p2));
    bases.push_back(Povm::from_basis(sp.eigenvectors));
  }
  return MeasurementSet(std::move(bases));
}

CMatrix qubit_mub3_unitary() {
  CMatrix u = CMatrix::Zero(3, 3);
  u.topLeftCorner(2, 2) = hadamard();
  u(2, 2) = 1.0;
  return u;
}

CMatrix deviation_unitary() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix u(3, 3);
  u << r, 0.5, 0.5, r, -0.5, -0.5, 0, -r, r;
  return u;
}

MeasurementSet embedded_qubit_mub(int d) {
  if (d < 2) throw Error(ErrorCode::kDomainError, "qMUB(d) needs d >= 2");
  CMatrix u = CMatrix::Identity(d, d);
  u.topLeftCorner(2, 2) = hadamard();
  return basis_pair(u);
}

MeasurementSet block_qubit_mub(int d) {
  if (d < 2 || d % 2 != 0) throw Error(ErrorCode::kDomainError, "block qubit MUB needs even d");
  CMatrix u = CMatrix::Zero(d, d);
  for (int b = 0; b < d; b += 2) u.block(b, b, 2, 2) = hadamard();
  return basis_pair(u);
}

MeasurementSet deviation_block_pair(int d) {
  if (d < 3 || d % 2 == 0) throw Error(ErrorCode::kDomainError, "deviation blocks need odd d >= 3");
  CMatrix u = CMatrix::Zero(d, d);
  u.topLeftCorner(3, 3) = deviation_unitary();
  for (int b = 3; b < d; b += 2) u.block(b, b, 2, 2) = hadamard();
  return basis_pair(u);
}

MeasurementSet named_pair(std::string_view id) {
  if (id == "qMUB3") return basis_pair(qubit_mub3_unitary());
  if (id == "dev3") return basis_pair(deviation_unitary());
  if (id == "qMUB4") return block_qubit_mub(4);
  if (id.size() > 6 && id.substr(0, 5) == "qMUB(" && id.back() == ')') {
    const std::string num(id.substr(5, id.size() - 6));
    int d = 0;
    try {
      std::size_t used = 0;
      d = std::stoi(num, &used);
      if (used != num.size()) d = 0;
    } catch (const std::exception&) {
      d = 0;
    }
    if (d >= 2) return embedded_qubit_mub(d);
  }
  throw Error(ErrorCode::kUnknownId, std::string(id));
}

Povm apply_post_processing(const Povm& p, const RMatrix& beta) {
  if (beta.cols() != p.outcomes() || beta.rows() < 1) {
    throw Error(ErrorCode::kShapeMismatch, "post-processing columns must match outcomes");
  }
  for (int a = 0; a < beta.cols(); ++a) {
    if (beta.col(a).minCoeff() < -1e-12 || std::abs(beta.col(a).sum() - 1.0) > 1e-12) {
      throw Error(ErrorCode::kDomainError, "post-processing is not column-stochastic");
    }
  }
  std::vector<HermitianMatrix> el(beta.rows(), HermitianMatrix(p.dim()));
  for (int ap = 0; ap < beta.rows(); ++ap) {
    for (int a = 0; a < beta.cols(); ++a) {
      if (beta(ap, a) != 0.0) el[ap] += beta(ap, a) * p[a];
    }
  }
  return Povm(std::move(el));
}

MeasurementSet apply_post_processing(const MeasurementSet& s,
                                     const std::vector<RMatrix>& betas) {
  if (static_cast<int>(betas.size()) != s.size()) {
    throw Error(ErrorCode::kShapeMismatch, "one post-processing per measurement");
  }
  std::vector<Povm> out;
  for (int x = 0; x < s.size(); ++x) out.push_back(apply_post_processing(s[x], betas[x]));
  return MeasurementSet(std::move(out));
}

HermitianMatrix UnitalChannel::apply(const HermitianMatrix& x) const {
  CMatrix out = CMatrix::Zero(out_dim(), out_dim());
  for (const auto& k : kraus) out += k * x.matrix() * k.adjoint();
  return HermitianMatrix::hermitian_part(out);
}

MeasurementSet apply_pre_processing(const MeasurementSet& s, const UnitalChannel& ch) {
  if (ch.kraus.empty()) throw Error(ErrorCode::kShapeMismatch, "channel without Kraus operators");
  const int din = ch.in_dim(), dout = ch.out_dim();
  CMatrix total = CMatrix::Zero(dout, dout);
  for (const auto& k : ch.kraus) {
    if (k.rows() != dout || k.cols() != din) {
      throw Error(ErrorCode::kDimensionMismatch, "Kraus operator shapes differ");
    }
    total += k * k.adjoint();
  }
  if (din != s.dim()) throw Error(ErrorCode::kDimensionMismatch, "channel input dimension");
  if ((total - CMatrix::Identity(dout, dout)).norm() > 1e-10) {
    throw Error(ErrorCode::kNonUnital, "sum K K^dagger != I");
  }
  std::vector<Povm> out;
  for (const auto& m : s.measurements()) {
    std::vector<HermitianMatrix> el;
    for (const auto& e : m.elements()) el.push_back(ch.apply(e));
    out.emplace_back(std::move(el));
  }
  return MeasurementSet(std::move(out));
}

MeasurementSet embed_set(const MeasurementSet& inner, const std::vector<Povm>& complements) {
  if (static_cast<int>(complements.size()) != inner.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one complement per measurement");
  }
  const int di = inner.dim();
  const int dc = complements.front().dim();
  for (const auto& c : complements) {
    if (c.dim() != dc) throw Error(ErrorCode::kDimensionMismatch, "complement dimensions differ");
  }
  const int df = di + dc;
  std::vector<Povm> out;
  for (int x = 0; x < inner.size(); ++x) {
    std::vector<HermitianMatrix> el;
    for (const auto& e : inner[x].elements()) {
      CMatrix m = CMatrix::Zero(df, df);
      m.topLeftCorner(di, di) = e.matrix();
      el.push_back(HermitianMatrix::hermitian_part(m));
    }
    for (const auto& e : complements[x].elements()) {
      CMatrix m = CMatrix::Zero(df, df);
      m.bottomRightCorner(dc, dc) = e.matrix();
      el.push_back(HermitianMatrix::hermitian_part(m));
    }
    out.emplace_back(std::move(el));
  }
  return MeasurementSet(std::move(out));
}

MeasurementSet embed_pair(const MeasurementSet& inner, const Povm& m, const Povm& n) {
  if (inner.size() != 2) throw Error(ErrorCode::kShapeMismatch, "embed_pair needs a pair");
  if (m.dim() != n.dim()) throw Error(ErrorCode::kDimensionMismatch, "complement measurements");
  return embed_set(inner, {m, n});
}

Povm mix(const Povm& a, const Povm& b, double p) {
  if (a.dim() != b.dim() || a.outcomes() != b.outcomes()) {
    throw Error(ErrorCode::kShapeMismatch, "mixing POVMs of different shape");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kDomainError, "mixing weight");
  std::vector<HermitianMatrix> el;
  for (int i = 0; i < a.outcomes(); ++i) el.push_back((1.0 - p) * a[i] + p * b[i]);
  return Povm(std::move(el));
}

MeasurementSet mix(const MeasurementSet& a, const MeasurementSet& b, double p) {
  if (a.size() != b.size()) throw Error(ErrorCode::kShapeMismatch, "mixing sets of different size");
  std::vector<Povm> out;
  for (int x = 0; x < a.size(); ++x) out.push_back(mix(a[x], b[x], p));
  return MeasurementSet(std::move(out));
}

MeasurementSet conjugate(const MeasurementSet& s, const CMatrix& u) {
  if (!is_unitary(u, 1e-10)) throw Error(ErrorCode::kNotUnitary, "conjugation");
  std::vector<Povm> out;
  for (const auto& m : s.measurements()) {
    std::vector<HermitianMatrix> el;
    for (const auto& e : m.elements()) el.push_back(incompat::conjugate(e, u));
    out.emplace_back(std::move(el));
  }
  return MeasurementSet(std::move(out));
}

Povm random_basis(int d, std::mt19937_64& rng) {
  return Povm::from_basis(haar_unitary(d, rng));
}

Povm random_rank_one_povm(int d, int n, std::mt19937_64& rng) {
  if (n < d) throw Error(ErrorCode::kDomainError, "rank-one POVM needs n >= d");
  const CMatrix u = haar_unitary(n, rng);
  std::vector<HermitianMatrix> el;
  for (int a = 0; a < n; ++a) el.push_back(HermitianMatrix::projector(u.col(a).head(d)));
  return Povm(std::move(el));
}

Povm random_povm(int d, int n, std::mt19937_64& rng) {
  if (n < 1) throw Error(ErrorCode::kDomainError, "need n >= 1");
  const CMatrix u = haar_unitary(n * d, rng);
  const CMatrix v = u.leftCols(d);
  std::vector<HermitianMatrix> el;
  for (int a = 0; a < n; ++a) {
    const CMatrix block = v.middleRows(a * d, d);
    el.push_back(HermitianMatrix::hermitian_part(block.adjoint() * block));
  }
  return Povm(std::move(el));
}

Povm random_coarse_basis(int d, int n, std::mt19937_64& rng) {
  if (n < 1 || n > d) throw Error(ErrorCode::kDomainError, "need 1 <= n <= d");
  const CMatrix u = haar_unitary(d, rng);
  std::vector<HermitianMatrix> el(n, HermitianMatrix(d));
  for (int i = 0; i < d; ++i) el[i % n] += HermitianMatrix::projector(u.col(i));
  return Povm(std::move(el));
}

RMatrix random_stochastic(int n_out, int n_in, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  RMatrix beta(n_out, n_in);
  for (int a = 0; a < n_in; ++a) {
    for (int ap = 0; ap < n_out; ++ap) beta(ap, a) = expo(rng);
    beta.col(a) /= beta.col(a).sum();
  }
  return beta;
}

UnitalChannel random_unital_channel(int in_dim, int out_dim, int kraus_count,
                                    std::mt19937_64& rng) {
  if (kraus_count < 1 || in_dim * kraus_count < out_dim) {
    throw Error(ErrorCode::kDomainError, "not enough Kraus operators for an isometry");
  }
  const CMatrix u = haar_unitary(in_dim * kraus_count, rng);
  const CMatrix w = u.leftCols(out_dim);
  UnitalChannel ch;
  for (int i = 0; i < kraus_count; ++i) {
    ch.kraus.push_back(w.middleRows(i * in_dim, in_dim).adjoint());
  }
  return ch;
}

}  // namespace incompat
