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

#include "ascent.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace tbq::detail {

namespace {

struct CurvaturePair {
  RealVector s;
  RealVector y;  // gradient change of the negated objective
  double rho;
};

// Two-loop recursion; returns an ascent direction H * g.
RealVector lbfgs_direction(const std::deque<CurvaturePair>& pairs, const RealVector& g) {
  RealVector q = g;
  std::vector<double> alpha(pairs.size());
  for (std::size_t i = pairs.size(); i-- > 0;) {
    alpha[i] = pairs[i].rho * pairs[i].s.dot(q);
    q -= alpha[i] * pairs[i].y;
  }
  if (!pairs.empty()) {
    const auto& last = pairs.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double beta = pairs[i].rho * pairs[i].y.dot(q);
    q += (alpha[i] - beta) * pairs[i].s;
  }
  return q;
}

}  // namespace

AscentResult maximize(const Objective& objective, RealVector x0, const AscentOptions& options) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxBacktracks = 60;
  constexpr int kQuietIterationsToStop = 3;

  AscentResult result;
  result.x = std::move(x0);
  RealVector grad(result.x.size());
  result.value = objective(result.x, grad);
  result.history.push_back(result.value);

  std::deque<CurvaturePair> pairs;
  RealVector trial_grad(result.x.size());
  int quiet = 0;

  while (result.iterations < options.max_iterations) {
    RealVector direction = lbfgs_direction(pairs, grad);
    double slope = grad.dot(direction);
    if (!(slope > 0.0) || !direction.allFinite()) {
      pairs.clear();
      direction = grad;
      slope = grad.squaredNorm();
    }
    if (!(slope > 0.0)) {
      result.converged = true;  // stationary point
      break;
    }

    double step = pairs.empty() ? std::min(1.0, 1.0 / std::sqrt(slope)) : 1.0;
    bool accepted = false;
    RealVector trial;
    double trial_value = 0.0;
    for (int k = 0; k < kMaxBacktracks; ++k) {
      trial = result.x + step * direction;
      trial_value = objective(trial, trial_grad);
      if (std::isfinite(trial_value) && trial_value >= result.value + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!pairs.empty()) {
        pairs.clear();  // retry once along the plain gradient
        continue;
      }
      result.converged = true;  // no further ascent possible at machine precision
      break;
    }

    ++result.iterations;
    const RealVector s = trial - result.x;
    const RealVector y = grad - trial_grad;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      pairs.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(pairs.size()) > options.memory) pairs.pop_front();
    }

    const double change = trial_value - result.value;
    result.x = std::move(trial);
    result.value = trial_value;
    grad.swap(trial_grad);
    result.history.push_back(result.value);

    const bool small_change = change <= options.rel_tolerance * std::max(1.0, std::abs(result.value));
    const bool small_step = s.norm() <= options.step_tolerance * std::max(1.0, result.x.norm());
    quiet = (small_change || small_step) ? quiet + 1 : 0;
    if (quiet >= kQuietIterationsToStop) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace tbq::detail
