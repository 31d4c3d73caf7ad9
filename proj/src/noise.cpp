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

#include "incompat/noise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "incompat/robustness.hpp"

namespace incompat {

std::string_view short_name(NoiseModel m) {
  switch (m) {
    case NoiseModel::kDepolarising: return "d";
    case NoiseModel::kRandom: return "r";
    case NoiseModel::kProbabilistic: return "p";
    case NoiseModel::kJointlyMeasurable: return "jm";
    case NoiseModel::kGeneralised: return "g";
  }
  return "?";
}

std::string_view long_name(NoiseModel m) {
  switch (m) {
    case NoiseModel::kDepolarising: return "depolarising";
    case NoiseModel::kRandom: return "random";
    case NoiseModel::kProbabilistic: return "probabilistic";
    case NoiseModel::kJointlyMeasurable: return "jointly-measurable";
    case NoiseModel::kGeneralised: return "generalised";
  }
  return "?";
}

NoiseModel parse_noise_model(std::string_view s) {
  for (NoiseModel m : kAllNoiseModels) {
    if (s == short_name(m) || s == long_name(m)) return m;
  }
  throw Error(ErrorCode::kUnknownId, "noise model '" + std::string(s) + "'");
}

MeasurementSet canonical_noise(NoiseModel m, const MeasurementSet& s) {
  const int d = s.dim();
  std::vector<Povm> out;
  for (const auto& meas : s.measurements()) {
    if (m == NoiseModel::kDepolarising) {
      std::vector<HermitianMatrix> el;
      for (const auto& e : meas.elements()) {
        el.push_back(HermitianMatrix::identity(d) * (e.trace() / d));
      }
      out.emplace_back(std::move(el));
    } else {
      out.push_back(Povm::trivial(d, meas.outcomes()));
    }
  }
  return MeasurementSet(std::move(out));
}

MeasurementSet noisy_version(const MeasurementSet& s, const MeasurementSet& noise, double eta) {
  if (s.dim() != noise.dim() || s.outcome_counts() != noise.outcome_counts()) {
    throw Error(ErrorCode::kShapeMismatch, "noise shape differs from the set");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorCode::kDomainError, "visibility outside [0, 1]");
  // mix() weights its second argument by p.
  return mix(noise, s, eta);
}

NoiseInstance canonical_instance(NoiseModel m, const MeasurementSet& s) {
  NoiseInstance inst;
  inst.kind = m;
  inst.noise = canonical_noise(m, s);
  if (m == NoiseModel::kProbabilistic) {
    for (const auto& meas : s.measurements()) {
      inst.distributions.emplace_back(meas.outcomes(), 1.0 / meas.outcomes());
    }
  }
  if (m == NoiseModel::kJointlyMeasurable) {
    ParentPovm parent;
    parent.shape = s.outcome_counts();
    const std::size_t total = s.parent_size();
    parent.elements.assign(total, HermitianMatrix::identity(s.dim()) * (1.0 / total));
    inst.parent = std::move(parent);
  }
  return inst;
}

namespace {

double max_deviation(const MeasurementSet& a, const MeasurementSet& b) {
  double dev = 0.0;
  for (int x = 0; x < a.size(); ++x) {
    for (int i = 0; i < a[x].outcomes(); ++i) {
      dev = std::max(dev, (a[x][i] - b[x][i]).frobenius_norm());
    }
  }
  return dev;
}

}  // namespace

MembershipReport membership_check(NoiseModel kind, const MeasurementSet& s,
                                  const NoiseInstance& candidate, double tol) {
  MembershipReport r;
  if (!candidate.noise) {
    r.detail = "no noise measurements given";
    return r;
  }
  const MeasurementSet& n = *candidate.noise;
  if (n.dim() != s.dim() || n.outcome_counts() != s.outcome_counts()) {
    r.detail = "shape differs from the measurement set";
    r.residual = std::numeric_limits<double>::infinity();
    return r;
  }
  const ValidationReport v = validate(n, tol);
  double res = v.normalization_residual;
  for (double p : v.psd_residuals) res = std::max(res, p);
  std::ostringstream detail;
  const int d = s.dim();
  switch (kind) {
    case NoiseModel::kDepolarising:
    case NoiseModel::kRandom: {
      res = std::max(res, max_deviation(n, canonical_noise(kind, s)));
      break;
    }
    case NoiseModel::kProbabilistic: {
      for (int x = 0; x < n.size(); ++x) {
        for (int a = 0; a < n[x].outcomes(); ++a) {
          const double p = n[x][a].trace() / d;
          res = std::max(res, (n[x][a] - HermitianMatrix::identity(d) * p).frobenius_norm());
          if (!candidate.distributions.empty()) {
            res = std::max(res, std::abs(candidate.distributions.at(x).at(a) - p));
          }
        }
      }
      break;
    }
    case NoiseModel::kJointlyMeasurable: {
      if (candidate.parent) {
        const ParentPovm& g = *candidate.parent;
        if (g.shape != s.outcome_counts()) {
          r.detail = "parent shape differs";
          r.residual = std::numeric_limits<double>::infinity();
          return r;
        }
        for (const auto& e : g.elements) res = std::max(res, std::max(0.0, -min_eigenvalue(e)));
        res = std::max(res, max_deviation(g.marginals(), n));
      } else {
        const JointMeasurability jm = is_jointly_measurable(n, std::max(tol, 1e-7));
        if (!jm.jointly_measurable) {
          detail << "no parent exists (generalised robustness " << jm.eta_g << ")";
          res = std::max(res, 1.0 - jm.eta_g);
        }
      }
      break;
    }
    case NoiseModel::kGeneralised:
      break;
  }
  r.residual = res;
  r.member = res <= tol;
  r.detail = detail.str();
  return r;
}

}  // namespace incompat
