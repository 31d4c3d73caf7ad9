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

// JSON and CSV serialization.
//
// Measurement sets:
//   {"dim": d, "measurements": [[element, ...], ...]}
// where an element is a d x d array of [re, im] pairs. Readers also accept
// a flat row-major list of d*d pairs and plain real entries.

#ifndef INCOMPAT_IO_HPP_
#define INCOMPAT_IO_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "incompat/bounds.hpp"
#include "incompat/povm.hpp"
#include "incompat/robustness.hpp"

namespace incompat {

using Json = nlohmann::json;

// Shortest decimal form with `digits` significant digits.
std::string format_number(double v, int digits = 12);

Json hermitian_to_json(const HermitianMatrix& m);
// kParseError on malformed input, kNonHermitian beyond 1e-9.
HermitianMatrix hermitian_from_json(const Json& j, int dim);

// Written with 17 significant digits, so reading back is exact.
Json measurement_set_to_json(const MeasurementSet& s);
MeasurementSet measurement_set_from_json(const Json& j);
MeasurementSet read_measurement_set(const std::string& path);
void write_measurement_set(const std::string& path, const MeasurementSet& s);

Json parent_to_json(const ParentPovm& p);

struct ResultJsonOptions {
  bool parent = false;
  bool dual = false;
};
// {measure, eta, gap, certified_bound, residuals, status, iterations,
//  jointly_measurable, parent?, dual?}
Json result_to_json(const RobustnessResult& r, const ResultJsonOptions& opts = {});

Json quantities_to_json(const Quantities& q);
Json bound_report_to_json(const BoundReport& r);

// Numeric table with named columns; empty cells are NaN.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& os, const Table& t, int digits = 12);
void write_csv(const std::string& path, const Table& t, int digits = 12);
Json table_to_json(const Table& t);

// Named constructions: mub:<d>, theta:<radians>, qMUB:<d>, dev:<odd d>,
// primemubs:<d>:<k>, file:<path>, and the ids accepted by named_pair.
// kParseError for malformed specs, kUnknownId for unknown names.
MeasurementSet named_set(std::string_view spec);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace incompat

#endif  // INCOMPAT_IO_HPP_
