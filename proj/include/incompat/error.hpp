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

#ifndef INCOMPAT_ERROR_HPP_
#define INCOMPAT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace incompat {

enum class ErrorCode {
  kNonHermitian,
  kNotUnitary,
  kBranchAmbiguity,
  kDomainError,
  kNotPrime,
  kUnknownId,
  kShapeMismatch,
  kNonUnital,
  kDimensionMismatch,
  kZeroTraceElement,
  kNotRankOne,
  kNotBlockStructured,
  kPreconditionFailed,
  kNotRankOneQubit,
  kNotNormalized,
  kTooLarge,
  kSolverFailure,
  kParseError,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the library; the code tells callers what went
// wrong without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace incompat

#endif  // INCOMPAT_ERROR_HPP_
