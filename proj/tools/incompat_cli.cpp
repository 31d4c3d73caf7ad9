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

// incompat: compute / bounds / search / reproduce / figure.
//
// Exit codes: 0 ok, 1 other error, 2 parse error, 3 solver failure,
// 4 reproduction mismatch.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "incompat/bounds.hpp"
#include "incompat/error.hpp"
#include "incompat/io.hpp"
#include "incompat/repro.hpp"
#include "incompat/robustness.hpp"
#include "incompat/search.hpp"

namespace {

using namespace incompat;

constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;
constexpr int kExitMismatch = 4;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<NoiseModel> parse_measures(const std::string& s) {
  if (s == "all") return {kAllNoiseModels.begin(), kAllNoiseModels.end()};
  std::vector<NoiseModel> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_noise_model(item));
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  }
  if (out.empty()) throw InputError("no measure given");
  return out;
}

MeasurementSet load_input(const std::string& spec) {
  try {
    return named_set(spec);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

// Writes to --out if given, else stdout.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorCode::kParseError, "cannot write " + out);
  f << text;
}

std::string table_text(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

int run_compute(const std::string& pair, const std::string& measure, double tol,
                const std::string& format, const std::string& out, bool parent, bool dual) {
  const MeasurementSet s = load_input(pair);
  const auto measures = parse_measures(measure);
  RobustnessOptions opts;
  opts.tol = tol;
  std::vector<RobustnessResult> results;
  for (NoiseModel m : measures) results.push_back(solve_robustness(s, m, opts));
  if (format == "csv") {
    std::ostringstream os;
    os << "measure,eta,certified_bound,gap,max_residual,iterations,status\n";
    for (const auto& r : results) {
      os << short_name(r.measure) << "," << format_number(r.eta) << ","
         << format_number(r.certified_bound) << "," << format_number(r.gap) << ","
         << format_number(r.residuals.max()) << "," << r.iterations << ","
         << sdp::to_string(r.status) << "\n";
    }
    emit(out, os.str());
  } else {
    const ResultJsonOptions jo{parent, dual};
    Json j;
    if (results.size() == 1) {
      j = result_to_json(results[0], jo);
    } else {
      j = Json::array();
      for (const auto& r : results) j.push_back(result_to_json(r, jo));
    }
    emit(out, j.dump(2) + "\n");
  }
  return 0;
}

int run_bounds(const std::string& pair, const std::string& format, const std::string& out) {
  const MeasurementSet s = load_input(pair);
  const BoundReport rep = bound_report(s);
  if (format == "csv") {
    std::ostringstream os;
    os << "measure,side,value,tag\n";
    for (const auto& mb : rep.measures) {
      for (const auto& e : mb.lower) {
        os << short_name(mb.measure) << ",lower," << format_number(e.value) << "," << e.tag << "\n";
      }
      for (const auto& e : mb.upper) {
        os << short_name(mb.measure) << ",upper," << format_number(e.value) << "," << e.tag << "\n";
      }
    }
    emit(out, os.str());
  } else {
    emit(out, bound_report_to_json(rep).dump(2) + "\n");
  }
  return 0;
}

struct SearchArgs {
  int d = 2;
  int k = 2;
  std::vector<int> outcomes;
  std::string measure = "d,p,jm,g";
  long samples = 1000;
  std::uint64_t seed = 0;
  std::string restriction = "rank-one-projective";
  int threads = 0;
  std::string checkpoint;
  long checkpoint_every = 256;
  std::vector<std::string> include;
  bool sets = false;
};

int run_search(const SearchArgs& a, double tol, const std::string& format, const std::string& out) {
  SearchConfig cfg;
  cfg.d = a.d;
  cfg.k = a.k;
  cfg.outcome_counts = a.outcomes;
  cfg.measures = parse_measures(a.measure);
  cfg.samples = a.samples;
  cfg.seed = a.seed;
  try {
    cfg.restriction = parse_restriction(a.restriction);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  cfg.threads = a.threads;
  cfg.checkpoint_path = a.checkpoint;
  cfg.checkpoint_every = a.checkpoint_every;
  cfg.solver.tol = tol;
  for (const auto& spec : a.include) cfg.extra_sets.push_back(load_input(spec));
  const SearchRecord rec = estimate_chi(cfg);
  if (format == "csv") {
    std::ostringstream os;
    os << "measure,best_eta,best_index,skipped\n";
    for (const auto& m : rec.measures) {
      os << short_name(m.measure) << "," << format_number(m.best_eta) << "," << m.best_index
         << "," << (m.skipped ? 1 : 0) << "\n";
    }
    emit(out, os.str());
  } else {
    Json j = {{"config", search_config_to_json(cfg)},
              {"record", search_record_to_json(rec, a.sets)}};
    emit(out, j.dump(2) + "\n");
  }
  return 0;
}

int run_reproduce(const std::vector<std::string>& targets, const std::string& out, double tol) {
  RobustnessOptions opts;
  opts.tol = tol;
  std::vector<std::string> ids = targets;
  if (ids.empty() || (ids.size() == 1 && ids[0] == "all")) ids = repro_targets();
  bool all_pass = true;
  for (const auto& id : ids) {
    ReproResult r;
    try {
      r = reproduce(id, opts);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kUnknownId) throw InputError(e.what());
      throw;
    }
    if (!out.empty()) write_repro_outputs(r, out);
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.target << " (" << r.checks.size()
              << " checks)\n";
    if (!r.pass) {
      all_pass = false;
      for (const auto& c : r.checks) {
        if (c.pass) continue;
        std::cout << "  mismatch: " << c.name << ": " << format_number(c.actual) << " "
                  << c.relation << " " << format_number(c.expected) << " (tol "
                  << format_number(c.tol, 3) << ", diff "
                  << format_number(c.actual - c.expected, 3) << ")\n";
      }
    }
  }
  return all_pass ? 0 : kExitMismatch;
}

int run_figure(const std::string& name, int resolution, double tol, const std::string& format,
               const std::string& out) {
  Figure f;
  try {
    f = parse_figure(name);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  RobustnessOptions opts;
  opts.tol = tol;
  const Table t = figure_curves(f, resolution, opts);
  emit(out, format == "csv" ? table_text(t) : table_to_json(t).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness-based incompatibility measures of quantum measurements"};
  app.require_subcommand(1);

  std::string measure = "all";
  double tol = 1e-9;
  std::uint64_t seed = 0;
  long samples = 1000;
  std::string out;
  std::string format = "json";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "Solver tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "Output file (directory for reproduce)");
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  std::string pair;
  bool with_parent = false, with_dual = false;
  auto* compute = app.add_subcommand("compute", "Solve the robustness programs for a set");
  compute->add_option("--pair,input", pair, "Named construction or file:<path>")->required();
  compute->add_option("--measure", measure, "d, r, p, jm, g, a comma list, or all");
  compute->add_flag("--parent", with_parent, "Include the parent POVM");
  compute->add_flag("--dual", with_dual, "Include the dual certificate");
  add_common(compute);

  auto* bounds = app.add_subcommand("bounds", "Analytic bounds for a set");
  bounds->add_option("--pair,input", pair, "Named construction or file:<path>")->required();
  add_common(bounds);

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Random search for low robustness");
  search->add_option("--d", sa.d, "Dimension")->check(CLI::PositiveNumber);
  search->add_option("--k", sa.k, "Number of measurements");
  search->add_option("--outcomes", sa.outcomes, "Outcome count per measurement");
  search->add_option("--measure", sa.measure, "Measures to search");
  search->add_option("--samples", samples, "Sample count");
  search->add_option("--seed", seed, "Seed");
  search->add_option("--restriction", sa.restriction,
                     "rank-one-projective, rank-one or general");
  search->add_option("--threads", sa.threads, "Worker threads (INCOMPAT_THREADS caps)");
  search->add_option("--checkpoint", sa.checkpoint, "Checkpoint file (resumes if present)");
  search->add_option("--checkpoint-every", sa.checkpoint_every, "Samples per checkpoint");
  search->add_option("--include", sa.include, "Named constructions evaluated first");
  search->add_flag("--sets", sa.sets, "Print the best sets");
  add_common(search);

  std::vector<std::string> targets;
  auto* repro = app.add_subcommand("reproduce", "Recompute published values");
  repro->add_option("target", targets, "Target ids or all");
  add_common(repro);

  std::string figure;
  int resolution = 25;
  auto* fig = app.add_subcommand("figure", "Figure data");
  fig->add_option("name", figure, "fig_runex, fig_devil or fig_chi")->required();
  fig->add_option("--resolution", resolution, "Grid resolution")->check(CLI::Range(2, 1000));
  add_common(fig);
  fig->get_option("--format")->default_str("csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*compute) return run_compute(pair, measure, tol, format, out, with_parent, with_dual);
    if (*bounds) return run_bounds(pair, format, out);
    if (*search) {
      sa.samples = samples;
      sa.seed = seed;
      return run_search(sa, tol, format, out);
    }
    if (*repro) return run_reproduce(targets, out, tol);
    if (*fig) {
      if (fig->count("--format") == 0) format = "csv";
      return run_figure(figure, resolution, tol, format, out);
    }
  } catch (const InputError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    if (e.code() == ErrorCode::kSolverFailure) return kExitSolver;
    if (e.code() == ErrorCode::kParseError || e.code() == ErrorCode::kUnknownId) return kExitParse;
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
