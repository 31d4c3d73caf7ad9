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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>

#include "incompat/error.hpp"
#include "incompat/repro.hpp"
#include "test_util.hpp"

namespace incompat {
namespace {

namespace fs = std::filesystem;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kDomainError;
}

TEST(Io, MeasurementSetRoundTripIsExact) {
  std::mt19937_64 rng(51);
  const MeasurementSet s({random_povm(3, 4, rng), random_basis(3, rng)});
  const fs::path p = fs::temp_directory_path() / "incompat_io_roundtrip.json";
  write_measurement_set(p.string(), s);
  const MeasurementSet back = read_measurement_set(p.string());
  EXPECT_EQ(testing::set_distance(s, back), 0.0);
  fs::remove(p);
}

TEST(Io, FlatAndRealEntries) {
  const Json flat = Json::parse("[0.5, 0.5, 0.5, 0.5]");
  const HermitianMatrix m = hermitian_from_json(flat, 2);
  EXPECT_EQ(m(0, 1), Complex(0.5, 0));
  const Json mixed = Json::parse("[[1, [0, -0.5]], [[0, 0.5], 0]]");
  const HermitianMatrix y = hermitian_from_json(mixed, 2);
  EXPECT_EQ(y(1, 0), Complex(0, 0.5));
  const MeasurementSet s = measurement_set_from_json(Json::parse(R"({
    "dim": 2,
    "measurements": [[[1, 0, 0, 0], [0, 0, 0, 1]],
                     [[[0.5, 0.5], [0.5, 0.5]], [[0.5, -0.5], [-0.5, 0.5]]]]
  })"));
  EXPECT_LT(testing::set_distance(s, mub_pair(2)), 1e-15);
}

TEST(Io, ParseErrors) {
  EXPECT_EQ(code_of([] { hermitian_from_json(Json::parse("[1, 2, 3]"), 2); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { hermitian_from_json(Json::parse("[[1, \"x\"], [0, 1]]"), 2); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { hermitian_from_json(Json::parse("[[1, 1], [0, 1]]"), 2); }),
            ErrorCode::kNonHermitian);
  EXPECT_EQ(code_of([] { measurement_set_from_json(Json::parse("{\"dim\": 2}")); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { read_measurement_set("/nonexistent/x.json"); }),
            ErrorCode::kParseError);
}

TEST(Io, FormatNumber) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0 / 3, 5), "0.33333");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(2e-12), "2e-12");
}

TEST(Io, CsvAndTableJson) {
  Table t{{"x", "y"}, {{1, 0.25}, {2, std::numeric_limits<double>::quiet_NaN()}}};
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "x,y\n1,0.25\n2,\n");
  const Json j = table_to_json(t);
  EXPECT_EQ(j.at("columns").size(), 2u);
  EXPECT_TRUE(j.at("rows")[1]["y"].is_null());
}

TEST(Io, NamedSetGrammar) {
  EXPECT_LT(testing::set_distance(named_set("mub:3"), mub_pair(3)), 1e-15);
  EXPECT_LT(testing::set_distance(named_set("theta:0.3"), qubit_theta_pair(0.3)), 1e-15);
  EXPECT_LT(testing::set_distance(named_set("qMUB:4"), embedded_qubit_mub(4)), 1e-15);
  EXPECT_LT(testing::set_distance(named_set("dev:3"), named_pair("dev3")), 1e-15);
  EXPECT_EQ(named_set("primemubs:3:4").size(), 4);
  EXPECT_LT(testing::set_distance(named_set("dev3"), named_pair("dev3")), 1e-15);
  EXPECT_EQ(code_of([] { named_set("mub:x"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { named_set("theta:"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { named_set("bogus:1:2:3"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { named_set("bogus"); }), ErrorCode::kUnknownId);
}

TEST(Io, ResultJsonFields) {
  const RobustnessResult r = solve_robustness(mub_pair(2), NoiseModel::kJointlyMeasurable);
  const Json plain = result_to_json(r);
  for (const char* k : {"measure", "eta", "certified_bound", "gap", "jointly_measurable",
                        "status", "iterations", "residuals"}) {
    EXPECT_TRUE(plain.contains(k)) << k;
  }
  EXPECT_FALSE(plain.contains("parent"));
  EXPECT_EQ(plain.at("measure"), "jm");
  EXPECT_NEAR(plain.at("eta").get<double>(), 2 * (std::sqrt(2.0) - 1), 1e-6);
  const Json full = result_to_json(r, {true, true});
  EXPECT_TRUE(full.contains("parent"));
  EXPECT_TRUE(full.contains("dual"));
  EXPECT_EQ(full.at("parent").at("elements").size(), 4u);
}

TEST(Io, ReproOutputs) {
  const fs::path dir = fs::temp_directory_path() / "incompat_io_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const ReproResult r = reproduce("table-embed");
  EXPECT_TRUE(r.pass);
  write_repro_outputs(r, dir.string());
  EXPECT_TRUE(fs::exists(dir / "table-embed.json"));
  EXPECT_TRUE(read_json_file((dir / "table-embed.json").string()).at("pass").get<bool>());
  EXPECT_EQ(code_of([] { reproduce("nope"); }), ErrorCode::kUnknownId);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace incompat
