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

#ifndef TBQ_ERRORS_HPP
#define TBQ_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace tbq {

enum class ErrorKind {
  InvalidArgument,
  NotHermitian,
  ZeroParameter,
  DimensionMismatch,
  SingularDesign,
  NonConvergence,
  IncompleteInputSet,
  IllConditioned,
  BasisMismatch,
  OutOfRange,
  MalformedTable,
  InvalidEncoding,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for everything thrown by the library. The kind is the
/// machine-readable part; what() carries the human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown when an iterative maximum-likelihood fit exhausts its iteration
/// budget. The best iterate found so far is kept so callers can still use it.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, Eigen::MatrixXcd best_iterate,
                      double best_objective, long iterations);

  const Eigen::MatrixXcd& best_iterate() const noexcept { return best_; }
  double best_objective() const noexcept { return objective_; }
  long iterations() const noexcept { return iterations_; }

 private:
  Eigen::MatrixXcd best_;
  double objective_;
  long iterations_;
};

class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& message, double condition_number);

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line);

  /// 1-based line number; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tbq

#endif  // TBQ_ERRORS_HPP
