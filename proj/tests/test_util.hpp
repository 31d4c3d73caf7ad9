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

#ifndef INCOMPAT_TESTS_TEST_UTIL_HPP_
#define INCOMPAT_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>

#include "incompat/povm.hpp"

namespace incompat::testing {

inline double set_distance(const MeasurementSet& a, const MeasurementSet& b) {
  double m = 0;
  for (int x = 0; x < a.size(); ++x) {
    for (int k = 0; k < a[x].outcomes(); ++k) m = std::max(m, (a[x][k] - b[x][k]).max_abs());
  }
  return m;
}

inline HermitianMatrix real_hermitian(std::initializer_list<std::initializer_list<double>> rows) {
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

// Random pair of the given shape: Haar bases when n == d, rank-one POVMs
// otherwise, mixed with general POVMs on odd indices.
inline MeasurementSet random_pair(int d, int n, int index, std::mt19937_64& rng) {
  auto one = [&](int x) {
    if (n == d && (index + x) % 3 != 2) return random_basis(d, rng);
    if ((index + x) % 2 == 0 && n >= d) return random_rank_one_povm(d, n, rng);
    return random_povm(d, n, rng);
  };
  return MeasurementSet({one(0), one(1)});
}

}  // namespace incompat::testing

#endif  // INCOMPAT_TESTS_TEST_UTIL_HPP_
