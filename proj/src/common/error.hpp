// Copyright 2026 The pcgil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PCGIL_COMMON_ERROR_HPP_
#define PCGIL_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pcgil {

// Values are mirrored by pcgil_status in the C API header.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kContractViolation = 2,
  kNonFinite = 3,
  kBudgetExceeded = 4,
  kIo = 5,
  kFormat = 6,
  kInsufficientData = 7,
  kGenerationFailed = 8,
  kInternal = 9,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kContractViolation: return "contract_violation";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kBudgetExceeded: return "budget_exceeded";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kGenerationFailed: return "generation_failed";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace pcgil

#endif  // PCGIL_COMMON_ERROR_HPP_
