// Copyright 2026 The timebin-qpt Authors
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

#include "tbq/errors.hpp"

#include <utility>

namespace tbq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::ZeroParameter: return "ZeroParameter";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularDesign: return "SingularDesign";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::IncompleteInputSet: return "IncompleteInputSet";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::MalformedTable: return "MalformedTable";
    case ErrorKind::InvalidEncoding: return "InvalidEncoding";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

NonConvergenceError::NonConvergenceError(const std::string& message, Eigen::MatrixXcd best_iterate,
                                         double best_objective, long iterations)
    : Error(ErrorKind::NonConvergence, message),
      best_(std::move(best_iterate)),
      objective_(best_objective),
      iterations_(iterations) {}

IllConditionedError::IllConditionedError(const std::string& message, double condition_number)
    : Error(ErrorKind::IllConditioned,
            message + " (condition number " + std::to_string(condition_number) + ")"),
      condition_number_(condition_number) {}

ParseError::ParseError(const std::string& message, std::size_t line)
    : Error(ErrorKind::ParseError,
            line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

}  // namespace tbq
