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

#include "incompat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "incompat/error.hpp"

namespace incompat {

namespace {

// Rounded to `digits` significant digits so that dumps stay short.
double rounded(double v, int digits) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_number(v, digits));
}

Json num(double v, int digits = 12) {
  if (!std::isfinite(v)) return nullptr;
  return rounded(v, digits);
}

Complex parse_entry(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw Error(ErrorCode::kParseError, "matrix entry must be a number or [re, im]");
}

}  // namespace

std::string format_number(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

Json hermitian_to_json(const HermitianMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.dim(); ++j) {
      row.push_back({rounded(m(i, j).real(), 17), rounded(m(i, j).imag(), 17)});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

HermitianMatrix hermitian_from_json(const Json& j, int dim) {
  if (!j.is_array()) throw Error(ErrorCode::kParseError, "matrix must be an array");
  CMatrix m(dim, dim);
  if (j.size() == std::size_t(dim) && j[0].is_array() && j[0].size() == std::size_t(dim)) {
    // Nested rows.
    for (int r = 0; r < dim; ++r) {
      if (!j[r].is_array() || j[r].size() != std::size_t(dim)) {
        throw Error(ErrorCode::kParseError, "matrix row has the wrong length");
      }
      for (int c = 0; c < dim; ++c) m(r, c) = parse_entry(j[r][c]);
    }
  } else if (j.size() == std::size_t(dim) * dim) {
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) m(r, c) = parse_entry(j[r * dim + c]);
    }
  } else {
    throw Error(ErrorCode::kParseError, "matrix has the wrong number of entries");
  }
  return HermitianMatrix::from_matrix(m);
}

Json measurement_set_to_json(const MeasurementSet& s) {
  Json meas = Json::array();
  for (const auto& m : s.measurements()) {
    Json el = Json::array();
    for (const auto& e : m.elements()) el.push_back(hermitian_to_json(e));
    meas.push_back(std::move(el));
  }
  return {{"dim", s.dim()}, {"measurements", std::move(meas)}};
}

MeasurementSet measurement_set_from_json(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("dim") || !j.contains("measurements")) {
      throw Error(ErrorCode::kParseError, "expected {\"dim\", \"measurements\"}");
    }
    const int dim = j.at("dim").get<int>();
    if (dim < 1) throw Error(ErrorCode::kParseError, "dim must be positive");
    const Json& ms = j.at("measurements");
    if (!ms.is_array() || ms.empty()) throw Error(ErrorCode::kParseError, "no measurements");
    std::vector<Povm> povms;
    for (const auto& m : ms) {
      if (!m.is_array() || m.empty()) throw Error(ErrorCode::kParseError, "empty measurement");
      std::vector<HermitianMatrix> el;
      for (const auto& e : m) el.push_back(hermitian_from_json(e, dim));
      povms.emplace_back(std::move(el));
    }
    return MeasurementSet(std::move(povms));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw Error(ErrorCode::kParseError, "not an integer: " + s);
  return v;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw Error(ErrorCode::kParseError, "not a number: " + s);
  return v;
}

}  // namespace

MeasurementSet named_set(std::string_view spec) {
  if (spec.substr(0, 5) == "file:") return read_measurement_set(std::string(spec.substr(5)));
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  if (parts.size() == 1) return named_pair(spec);
  if (kind == "mub" && parts.size() == 2) return mub_pair(to_int(parts[1]));
  if (kind == "theta" && parts.size() == 2) return qubit_theta_pair(to_double(parts[1]));
  if (kind == "qMUB" && parts.size() == 2) return embedded_qubit_mub(to_int(parts[1]));
  if (kind == "dev" && parts.size() == 2) {
    const int d = to_int(parts[1]);
    return d == 3 ? named_pair("dev3") : deviation_block_pair(d);
  }
  if (kind == "primemubs" && parts.size() == 3) {
    return prime_mub_set(to_int(parts[1]), to_int(parts[2]));
  }
  throw Error(ErrorCode::kParseError, "cannot parse construction " + std::string(spec));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path);
  out << j.dump(2) << "\n";
}

MeasurementSet read_measurement_set(const std::string& path) {
  return measurement_set_from_json(read_json_file(path));
}

void write_measurement_set(const std::string& path, const MeasurementSet& s) {
  write_json_file(path, measurement_set_to_json(s));
}

Json parent_to_json(const ParentPovm& p) {
  Json el = Json::array();
  for (const auto& e : p.elements) el.push_back(hermitian_to_json(e));
  return {{"shape", p.shape}, {"elements", std::move(el)}};
}

Json result_to_json(const RobustnessResult& r, const ResultJsonOptions& opts) {
  Json j;
  j["measure"] = std::string(short_name(r.measure));
  j["eta"] = num(r.eta);
  j["certified_bound"] = num(r.certified_bound);
  j["gap"] = num(r.gap);
  j["jointly_measurable"] = r.jointly_measurable;
  j["status"] = sdp::to_string(r.status);
  j["iterations"] = r.iterations;
  j["residuals"] = {{"marginal", num(r.residuals.marginal)},
                    {"parent_psd", num(r.residuals.parent_psd)},
                    {"normalization", num(r.residuals.normalization)},
                    {"noise", num(r.residuals.noise)},
                    {"dual_cone", num(r.residuals.dual_cone)},
                    {"dual_scalar", num(r.residuals.dual_scalar)}};
  if (opts.parent) {
    j["parent"] = parent_to_json(r.parent);
    if (r.measure == NoiseModel::kJointlyMeasurable) {
      j["noise_parent"] = parent_to_json(r.noise_parent);
    }
    if (r.noise.noise) j["noise"] = measurement_set_to_json(*r.noise.noise);
    if (!r.noise.distributions.empty()) j["distributions"] = r.noise.distributions;
  }
  if (opts.dual) {
    Json x = Json::array();
    for (const auto& row : r.dual.x) {
      Json jr = Json::array();
      for (const auto& e : row) jr.push_back(hermitian_to_json(e));
      x.push_back(std::move(jr));
    }
    Json dual = {{"x", std::move(x)}};
    if (r.dual.n) dual["n"] = hermitian_to_json(*r.dual.n);
    if (!r.dual.xi.empty()) dual["xi"] = r.dual.xi;
    j["dual"] = std::move(dual);
  }
  return j;
}

Json quantities_to_json(const Quantities& q) {
  Json j = {{"f", num(q.f)},       {"lambda", num(q.lambda)}, {"g_d", num(q.g_d)},
            {"g_r", num(q.g_r)},   {"g_p", num(q.g_p)},       {"g_jm", num(q.g_jm)}};
  if (q.f_tr) {
    j["f_tr"] = num(*q.f_tr);
    j["lambda_tr"] = num(*q.lambda_tr);
    j["g_tr"] = num(*q.g_tr);
    j["g_jm_tr"] = num(*q.g_jm_tr);
  }
  return j;
}

Json bound_report_to_json(const BoundReport& r) {
  Json j;
  j["quantities"] = quantities_to_json(r.quantities);
  Json measures = Json::object();
  for (const auto& mb : r.measures) {
    auto list = [](const std::vector<BoundEntry>& v) {
      Json a = Json::array();
      for (const auto& e : v) a.push_back({{"value", num(e.value)}, {"tag", e.tag}});
      return a;
    };
    Json m = {{"lower", list(mb.lower)}, {"upper", list(mb.upper)}};
    if (!mb.lower.empty()) {
      m["best_lower"] = {{"value", num(mb.best_lower.value)}, {"tag", mb.best_lower.tag}};
    }
    m["best_upper"] = {{"value", num(mb.best_upper.value)}, {"tag", mb.best_upper.tag}};
    measures[std::string(short_name(mb.measure))] = std::move(m);
  }
  j["measures"] = std::move(measures);
  if (r.overlaps) {
    Json c = Json::array();
    for (int i = 0; i < r.overlaps->rows(); ++i) {
      Json row = Json::array();
      for (int k = 0; k < r.overlaps->cols(); ++k) row.push_back(num((*r.overlaps)(i, k)));
      c.push_back(std::move(row));
    }
    j["overlaps"] = std::move(c);
  }
  Json crit = Json::object();
  for (const auto& [name, v] : r.critical) crit[name] = num(v);
  if (!crit.empty()) j["critical_overlaps"] = std::move(crit);
  Json splits = Json::object();
  for (const auto& [name, sp] : r.splits) {
    splits[name] = {{"c_minus", num(sp.c_minus)},     {"c_plus", num(sp.c_plus)},
                    {"has_minus", sp.has_minus},      {"has_plus", sp.has_plus},
                    {"at_critical", sp.at_critical}};
  }
  if (!splits.empty()) j["overlap_splits"] = std::move(splits);
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

void write_csv(std::ostream& os, const Table& t, int digits) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    os << (c ? "," : "") << t.columns[c];
  }
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ",";
      if (!std::isnan(row[c])) os << format_number(row[c], digits);
    }
    os << "\n";
  }
}

void write_csv(const std::string& path, const Table& t, int digits) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path);
  write_csv(out, t, digits);
}

Json table_to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r = Json::object();
    for (std::size_t c = 0; c < row.size() && c < t.columns.size(); ++c) r[t.columns[c]] = num(row[c]);
    rows.push_back(std::move(r));
  }
  return {{"columns", t.columns}, {"rows", std::move(rows)}};
}

}  // namespace incompat
