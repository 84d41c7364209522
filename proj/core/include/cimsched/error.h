// Copyright 2026 The cimsched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CIMSCHED_ERROR_H_
#define CIMSCHED_ERROR_H_

#include <stdexcept>
#include <string>

namespace cimsched {

enum class ErrorCode {
  kSyntax,
  kDuplicateName,
  kUnknownOp,
  kUnknownAttribute,
  kInvalidAttribute,
  kDanglingInput,
  kCycle,
  kShapeMismatch,
  kNonPositiveDim,
  kFoldFailed,
  kInfeasible,
  kInvalidDuplication,
  kUnsupportedOp,
  kInvalidSchedule,
  kIo,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers and tests
/// which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cimsched

#endif  // CIMSCHED_ERROR_H_
