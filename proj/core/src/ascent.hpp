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

#ifndef TBQ_ASCENT_HPP
#define TBQ_ASCENT_HPP

// Limited-memory quasi-Newton ascent with Armijo backtracking. Used by every
// maximum-likelihood fit over Cholesky parameters.

#include <functional>
#include <vector>

#include "tbq/qcore.hpp"

namespace tbq::detail {

struct AscentOptions {
  long max_iterations = 100000;
  double rel_tolerance = 1e-10;  // on the objective change
  double step_tolerance = 1e-8;  // on the parameter step
  int memory = 12;
};

struct AscentResult {
  RealVector x;
  double value = 0.0;
  std::vector<double> history;  // objective after each accepted iterate
  long iterations = 0;
  bool converged = false;
};

/// Objective returns f(x) and writes its gradient into grad (already sized).
/// A non-finite value marks x as infeasible; the line search backs off.
using Objective = std::function<double(const RealVector& x, RealVector& grad)>;

AscentResult maximize(const Objective& objective, RealVector x0, const AscentOptions& options = {});

}  // namespace tbq::detail

#endif  // TBQ_ASCENT_HPP
