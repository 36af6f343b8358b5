// Copyright 2026 The Bayes-Swarm Authors
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

#ifndef BSWARM_OPTIMIZE_HPP
#define BSWARM_OPTIMIZE_HPP

#include <functional>

#include <Eigen/Core>

namespace bswarm::opt {

struct Bounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  [[nodiscard]] Eigen::VectorXd clamp(const Eigen::VectorXd& x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
  }
};

struct Options {
  int max_iterations = 200;
  /// Stop once an accepted step is shorter than this (Euclidean, parameter units).
  double step_tolerance = 1e-4;
  /// Stop once the relative objective change of an accepted step falls below
  /// this; 0 disables the test.
  double value_tolerance = 0.0;
  /// Central-difference step, relative to max(1, |x_i|).
  double fd_step = 1e-6;
  /// Length cap on the very first step; 0 means uncapped.
  double initial_step = 0.0;
};

struct Result {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Objective returning f(x); fills \p grad with df/dx when it is non-null.
using ValueGradient = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

/// Objective evaluated at each column of \p points.
using BatchValue = std::function<void(const Eigen::MatrixXd& points, Eigen::VectorXd& values)>;

/// Projected BFGS ascent inside a box, Armijo backtracking along the
/// projected path. Never returns a point worse than the clamped start.
Result maximize(const ValueGradient& f, const Eigen::VectorXd& x0, const Bounds& bounds,
                const Options& options = {});

/// Same method with central finite-difference gradients (one-sided at the box
/// faces). All probes of one gradient are evaluated in a single batch.
Result maximize_fd(const BatchValue& f, const Eigen::VectorXd& x0, const Bounds& bounds,
                   const Options& options = {});

/// Finite-difference gradient used by maximize_fd.
Eigen::VectorXd fd_gradient(const BatchValue& f, const Eigen::VectorXd& x, double fx,
                            const Bounds& bounds, double fd_step);

}  // namespace bswarm::opt

#endif  // BSWARM_OPTIMIZE_HPP
