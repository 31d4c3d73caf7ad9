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

#include "incompat/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "incompat/bounds.hpp"
#include "incompat/error.hpp"

namespace incompat {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> counts_of(const SearchConfig& cfg) {
  if (!cfg.outcome_counts.empty()) return cfg.outcome_counts;
  return std::vector<int>(cfg.k, cfg.d);
}

void check_config(const SearchConfig& cfg) {
  if (cfg.d < 2) throw Error(ErrorCode::kDomainError, "search needs d >= 2");
  if (cfg.k < 2) throw Error(ErrorCode::kDomainError, "search needs k >= 2");
  if (cfg.samples < 1) throw Error(ErrorCode::kDomainError, "sample count must be positive");
  if (cfg.checkpoint_every < 1) throw Error(ErrorCode::kDomainError, "checkpoint_every < 1");
  if (cfg.measures.empty()) throw Error(ErrorCode::kDomainError, "no measure to search");
  const auto counts = counts_of(cfg);
  if (int(counts.size()) != cfg.k) {
    throw Error(ErrorCode::kDomainError, "outcome_counts must have k entries");
  }
  for (int n : counts) {
    if (n < 1) throw Error(ErrorCode::kDomainError, "outcome counts must be positive");
    if (cfg.restriction == Restriction::kRankOneProjective && n != cfg.d) {
      throw Error(ErrorCode::kDomainError, "rank-one projective measurements have d outcomes");
    }
    if (cfg.restriction == Restriction::kRankOne && n < cfg.d) {
      throw Error(ErrorCode::kDomainError, "rank-one POVMs need at least d outcomes");
    }
  }
  std::size_t size = 1;
  for (int n : counts) size *= std::size_t(n);
  if (size > cfg.solver.max_parent_outcomes) {
    throw Error(ErrorCode::kTooLarge, "parent POVM too large for the solver");
  }
  for (const auto& s : cfg.extra_sets) {
    if (s.dim() != cfg.d) throw Error(ErrorCode::kDomainError, "extra set has the wrong dimension");
  }
}

// Sentinel for failed solves.
constexpr double kFailed = std::numeric_limits<double>::quiet_NaN();

std::vector<double> evaluate(const MeasurementSet& s, const SearchConfig& cfg) {
  std::vector<double> out;
  for (NoiseModel m : cfg.measures) {
    if (m == NoiseModel::kRandom) {
      out.push_back(0.5);
      continue;
    }
    try {
      out.push_back(solve_robustness(s, m, cfg.solver).eta);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSolverFailure) throw;
      out.push_back(kFailed);
    }
  }
  return out;
}

// Runs f(i) for i in [begin, end) on `threads` workers.
template <class F>
void parallel_for(long begin, long end, int threads, F&& f) {
  const long n = end - begin;
  threads = int(std::min<long>(threads, n));
  if (threads <= 1) {
    for (long i = begin; i < end; ++i) f(i);
    return;
  }
  std::atomic<long> next{begin};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (long i = next++; i < end; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

Json config_identity(const SearchConfig& cfg) {
  Json j = search_config_to_json(cfg);
  j.erase("threads");
  j.erase("checkpoint_path");
  j.erase("checkpoint_every");
  j.erase("keep_log");
  return j;
}

void write_checkpoint(const SearchConfig& cfg, const SearchRecord& rec) {
  Json best_eta = Json::object();
  Json best_set = Json::object();
  Json best_index = Json::object();
  for (const auto& m : rec.measures) {
    const std::string name(short_name(m.measure));
    best_eta[name] = m.best_eta;
    best_index[name] = m.best_index;
    best_set[name] = m.best_set ? measurement_set_to_json(*m.best_set) : Json(nullptr);
  }
  Json j = {{"config", config_identity(cfg)},
            {"seed", cfg.seed},
            {"samples_done", rec.samples_done},
            {"failures", rec.failures},
            {"best_eta", best_eta},
            {"best_index", best_index},
            {"best_set", best_set}};
  const std::string tmp = cfg.checkpoint_path + ".tmp";
  write_json_file(tmp, j);
  std::filesystem::rename(tmp, cfg.checkpoint_path);
}

bool load_checkpoint(const SearchConfig& cfg, SearchRecord* rec) {
  if (cfg.checkpoint_path.empty() || !std::filesystem::exists(cfg.checkpoint_path)) return false;
  const Json j = read_json_file(cfg.checkpoint_path);
  try {
    if (j.at("config") != config_identity(cfg)) {
      throw Error(ErrorCode::kPreconditionFailed,
                  "checkpoint " + cfg.checkpoint_path + " belongs to another search");
    }
    rec->samples_done = j.at("samples_done").get<long>();
    rec->failures = j.value("failures", 0L);
    for (auto& m : rec->measures) {
      const std::string name(short_name(m.measure));
      m.best_eta = j.at("best_eta").at(name).get<double>();
      m.best_index = j.at("best_index").value(name, 0L);
      const Json& bs = j.at("best_set").at(name);
      if (!bs.is_null()) m.best_set = measurement_set_from_json(bs);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("checkpoint: ") + e.what());
  }
  return true;
}

}  // namespace

std::string_view to_string(Restriction r) {
  switch (r) {
    case Restriction::kRankOneProjective:
      return "rank-one-projective";
    case Restriction::kRankOne:
      return "rank-one";
    case Restriction::kGeneral:
      return "general";
  }
  return "";
}

Restriction parse_restriction(std::string_view s) {
  for (Restriction r : {Restriction::kRankOneProjective, Restriction::kRankOne,
                        Restriction::kGeneral}) {
    if (s == to_string(r)) return r;
  }
  throw Error(ErrorCode::kUnknownId, "unknown restriction " + std::string(s));
}

const MeasureRecord& SearchRecord::at(NoiseModel m) const {
  for (const auto& r : measures) {
    if (r.measure == m) return r;
  }
  throw Error(ErrorCode::kUnknownId, "measure not searched: " + std::string(short_name(m)));
}

MeasurementSet sample_set(const SearchConfig& cfg, long i) {
  const std::uint64_t u = std::uint64_t(i);
  std::seed_seq seq{std::uint32_t(cfg.seed), std::uint32_t(cfg.seed >> 32), std::uint32_t(u),
                    std::uint32_t(u >> 32)};
  std::mt19937_64 rng(seq);
  const auto counts = counts_of(cfg);
  std::vector<Povm> povms;
  for (int x = 0; x < cfg.k; ++x) {
    switch (cfg.restriction) {
      case Restriction::kRankOneProjective:
        povms.push_back(x == 0 ? Povm::computational_basis(cfg.d) : random_basis(cfg.d, rng));
        break;
      case Restriction::kRankOne:
        povms.push_back(random_rank_one_povm(cfg.d, counts[x], rng));
        break;
      case Restriction::kGeneral:
        povms.push_back(random_povm(cfg.d, counts[x], rng));
        break;
    }
  }
  return MeasurementSet(std::move(povms));
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : int(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("INCOMPAT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

SearchRecord estimate_chi(const SearchConfig& cfg) {
  check_config(cfg);
  SearchRecord rec;
  for (NoiseModel m : cfg.measures) {
    MeasureRecord r;
    r.measure = m;
    if (m == NoiseModel::kRandom) {
      r.skipped = true;
      r.best_eta = 0.5;
    }
    rec.measures.push_back(std::move(r));
  }
  const int nm = int(cfg.measures.size());
  const int threads = worker_count(cfg.threads);

  auto reduce = [&](long index, const MeasurementSet& s, const std::vector<double>& etas) {
    bool failed = false;
    for (int m = 0; m < nm; ++m) {
      auto& r = rec.measures[m];
      if (r.skipped) continue;
      if (std::isnan(etas[m])) {
        failed = true;
        continue;
      }
      if (!r.best_set || etas[m] < r.best_eta) {
        r.best_eta = etas[m];
        r.best_set = s;
        r.best_index = index;
      }
    }
    if (failed) ++rec.failures;
  };

  rec.resumed = load_checkpoint(cfg, &rec);
  if (!rec.resumed) {
    const long ne = long(cfg.extra_sets.size());
    std::vector<std::vector<double>> etas(ne);
    parallel_for(0, ne, threads, [&](long i) { etas[i] = evaluate(cfg.extra_sets[i], cfg); });
    for (long i = 0; i < ne; ++i) reduce(-1 - i, cfg.extra_sets[i], etas[i]);
  }

  while (rec.samples_done < cfg.samples) {
    const long begin = rec.samples_done;
    const long end = std::min(cfg.samples, begin + cfg.checkpoint_every);
    std::vector<std::optional<MeasurementSet>> sets(end - begin);
    std::vector<std::vector<double>> etas(end - begin);
    parallel_for(begin, end, threads, [&](long i) {
      sets[i - begin] = sample_set(cfg, i);
      etas[i - begin] = evaluate(*sets[i - begin], cfg);
    });
    for (long i = begin; i < end; ++i) {
      reduce(i, *sets[i - begin], etas[i - begin]);
      if (cfg.keep_log) rec.log.push_back(etas[i - begin]);
    }
    rec.samples_done = end;
    if (!cfg.checkpoint_path.empty()) write_checkpoint(cfg, rec);
  }
  return rec;
}

Json search_config_to_json(const SearchConfig& cfg) {
  Json measures = Json::array();
  for (NoiseModel m : cfg.measures) measures.push_back(std::string(short_name(m)));
  return {{"d", cfg.d},
          {"k", cfg.k},
          {"outcome_counts", counts_of(cfg)},
          {"measures", measures},
          {"samples", cfg.samples},
          {"seed", cfg.seed},
          {"restriction", std::string(to_string(cfg.restriction))},
          {"threads", cfg.threads},
          {"checkpoint_path", cfg.checkpoint_path},
          {"checkpoint_every", cfg.checkpoint_every},
          {"extra_sets", cfg.extra_sets.size()},
          {"keep_log", cfg.keep_log},
          {"tol", cfg.solver.tol}};
}

Json search_record_to_json(const SearchRecord& r, bool with_sets) {
  Json measures = Json::object();
  for (const auto& m : r.measures) {
    Json e = {{"best_eta", std::stod(format_number(m.best_eta, 12))},
              {"best_index", m.best_index},
              {"skipped", m.skipped}};
    if (with_sets && m.best_set) e["best_set"] = measurement_set_to_json(*m.best_set);
    measures[std::string(short_name(m.measure))] = std::move(e);
  }
  Json j = {{"samples_done", r.samples_done},
            {"failures", r.failures},
            {"resumed", r.resumed},
            {"measures", std::move(measures)}};
  if (!r.log.empty()) j["log"] = r.log;
  return j;
}

CMatrix devil_theta_unitary(double theta) {
  if (theta < kPi / 4 - 1e-12 || theta > kPi / 2 + 1e-12) {
    throw Error(ErrorCode::kDomainError, "theta must lie in [pi/4, pi/2]");
  }
  const double r = 1.0 / std::sqrt(2.0);
  const double c = std::cos(theta), s = std::sin(theta);
  CMatrix u(3, 3);
  u << r, s * r, c * r, r, -s * r, -c * r, 0, -c, s;
  return u;
}

CMatrix devil_v_unitary() {
  using namespace std::complex_literals;
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  CMatrix v(3, 3);
  v << r2 / r3, (r3 + 3.0i) / (6 * r2), (r3 - 3.0i) / (6 * r2),
       0, (r3 - 1.0i) / (2 * r2), (r3 + 1.0i) / (2 * r2),
       1 / r3, (-r3 - 3.0i) / 6.0, (-r3 + 3.0i) / 6.0;
  return v;
}

CMatrix qutrit_mub_unitary() {
  const Complex w = std::polar(1.0, 2 * kPi / 3);
  CMatrix u(3, 3);
  u << 1, 1, 1, 1, w * w, w, 1, w, w * w;
  return u / std::sqrt(3.0);
}

CMatrix devil_t_unitary(double t) {
  if (t < -1e-12 || t > 1 + 1e-12) throw Error(ErrorCode::kDomainError, "t must lie in [0, 1]");
  static const HermitianMatrix h = principal_log(devil_v_unitary());
  // V^dagger takes the qMUB basis to the MUB one.
  return expi(h, -t) * qubit_mub3_unitary();
}

MeasurementSet devil_path_set(double s) {
  if (s < -1e-12 || s > 2 + 1e-12) throw Error(ErrorCode::kDomainError, "s must lie in [0, 2]");
  const CMatrix u = s <= 1 ? devil_theta_unitary(kPi / 4 * (1 + std::clamp(s, 0.0, 1.0)))
                           : devil_t_unitary(std::min(s, 2.0) - 1);
  return MeasurementSet({Povm::computational_basis(3), Povm::from_basis(u)});
}

std::vector<PathPoint> devil_path(int resolution) {
  if (resolution < 2) throw Error(ErrorCode::kDomainError, "resolution must be at least 2");
  std::vector<PathPoint> out;
  for (int i = 0; i < 2 * resolution - 1; ++i) {
    const double s = 2.0 * i / (2 * resolution - 2);
    PathPoint p{s, s <= 1 ? 1 : 2, s <= 1 ? kPi / 4 * (1 + s) : s - 1, devil_path_set(s)};
    out.push_back(std::move(p));
  }
  return out;
}

std::string_view to_string(Figure f) {
  switch (f) {
    case Figure::kRunex:
      return "fig_runex";
    case Figure::kDevil:
      return "fig_devil";
    case Figure::kChi:
      return "fig_chi";
  }
  return "";
}

Figure parse_figure(std::string_view s) {
  for (Figure f : {Figure::kRunex, Figure::kDevil, Figure::kChi}) {
    const std::string_view name = to_string(f);
    if (s == name) return f;
    // fig-runex spelling too
    std::string dashed(name);
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    if (s == dashed) return f;
  }
  throw Error(ErrorCode::kUnknownId, "unknown figure " + std::string(s));
}

Table figure_curves(Figure f, int resolution, const RobustnessOptions& opts) {
  if (resolution < 2) throw Error(ErrorCode::kDomainError, "resolution must be at least 2");
  using NM = NoiseModel;
  Table t;
  switch (f) {
    case Figure::kRunex: {
      t.columns = {"theta", "eta_d", "eta_r", "eta_p", "eta_jm", "eta_g",
                   "closed_d", "closed_jm", "closed_g"};
      for (int i = 0; i < resolution; ++i) {
        const double th = kPi / 4 * i / (resolution - 1);
        const MeasurementSet s = qubit_theta_pair(th);
        std::vector<double> row{th};
        for (NM m : kAllNoiseModels) row.push_back(solve_robustness(s, m, opts).eta);
        const double cs = std::cos(th) + std::sin(th);
        row.push_back(1 / cs);
        row.push_back(2 / (1 + cs));
        row.push_back((std::sqrt(2.0) + 1) / (std::sqrt(2.0) + cs));
        t.rows.push_back(std::move(row));
      }
      break;
    }
    case Figure::kDevil: {
      t.columns = {"s", "leg", "param", "eta_d", "eta_p", "eta_jm", "eta_g"};
      for (const auto& p : devil_path(resolution)) {
        std::vector<double> row{p.s, double(p.leg), p.param};
        for (NM m : {NM::kDepolarising, NM::kProbabilistic, NM::kJointlyMeasurable,
                     NM::kGeneralised}) {
          row.push_back(solve_robustness(p.set, m, opts).eta);
        }
        t.rows.push_back(std::move(row));
      }
      break;
    }
    case Figure::kChi: {
      t.columns = {"d", "mub_d", "best_p", "qmub_d", "universal_d"};
      const double nan = std::numeric_limits<double>::quiet_NaN();
      for (int d = 2; d <= resolution + 1; ++d) {
        const double qmub = 0.5 * (1 + std::sqrt(2.0) / (d + std::sqrt(2.0)));
        double best_p = nan;
        if (d == 2) {
          best_p = mub_closed_form(2, NM::kProbabilistic);
        } else if (d % 2 == 0) {
          best_p = qmub;
        } else if (d <= 7) {
          best_p = solve_robustness(deviation_block_pair(d), NM::kProbabilistic, opts).eta;
        }
        t.rows.push_back({double(d), mub_closed_form(d, NM::kDepolarising), best_p, qmub,
                          universal_lower_bound(NM::kDepolarising, d, {d, d})});
      }
      break;
    }
  }
  return t;
}

}  // namespace incompat
