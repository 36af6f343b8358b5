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

#include "bswarm/optimize.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace bswarm::opt {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;

// Internally minimizes phi = -f.
template <class ValueFn, class GradFn>
Result run(ValueFn&& value, GradFn&& grad, const Eigen::VectorXd& x0, const Bounds& bounds,
           const Options& opt) {
  const Eigen::Index n = x0.size();
  Result res;
  Eigen::VectorXd x = bounds.clamp(x0);
  double phi = -value(x);
  ++res.evaluations;
  if (!std::isfinite(phi)) {
    res.x = x;
    res.value = -phi;
    return res;
  }
  Eigen::VectorXd g = -grad(x, -phi);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;

  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    // Coordinates pinned at a face with the descent direction pointing out.
    Eigen::Array<bool, Eigen::Dynamic, 1> active(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      active[i] = (x[i] <= bounds.lower[i] && g[i] > 0.0) ||
                  (x[i] >= bounds.upper[i] && g[i] < 0.0);
    }
    auto mask = [&](Eigen::VectorXd v) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (active[i]) v[i] = 0.0;
      }
      return v;
    };
    Eigen::VectorXd gf = mask(g);
    if (gf.norm() == 0.0 || !gf.allFinite()) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd d = mask(-(h * gf));
    if (!(g.dot(d) < 0.0)) {
      h.setIdentity();
      scaled = false;
      d = -gf;
    }
    // Without curvature information the raw gradient length says little
    // about a good step; try initial_step and let backtracking shrink it.
    if (!scaled && opt.initial_step > 0.0 && d.norm() > 0.0) {
      d *= opt.initial_step / d.norm();
    }

    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd xn;
    double phin = 0.0;
    for (int k = 0; k < kMaxBacktracks; ++k, t *= 0.5) {
      xn = bounds.clamp(x + t * d);
      const Eigen::VectorXd s = xn - x;
      if (s.norm() == 0.0) {
        break;
      }
      phin = -value(xn);
      ++res.evaluations;
      if (std::isfinite(phin) && phin <= phi + kArmijo * g.dot(s)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.converged = true;
      break;
    }
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd gn = -grad(xn, -phin);
    const Eigen::VectorXd y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      if (!scaled) {
        h = Eigen::MatrixXd::Identity(n, n) * (sy / y.squaredNorm());
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
      h = v * h * v.transpose() + rho * s * s.transpose();
    }
    const double dphi = std::abs(phin - phi);
    const bool small_step = s.norm() < opt.step_tolerance;
    const bool small_change =
        opt.value_tolerance > 0.0 && dphi <= opt.value_tolerance * std::max(std::abs(phi), 1e-300);
    x = xn;
    phi = phin;
    g = gn;
    if (small_step || small_change) {
      res.converged = true;
      ++res.iterations;
      break;
    }
  }
  res.x = x;
  res.value = -phi;
  return res;
}

}  // namespace

Result maximize(const ValueGradient& f, const Eigen::VectorXd& x0, const Bounds& bounds,
                const Options& options) {
  auto value = [&](const Eigen::VectorXd& x) { return f(x, nullptr); };
  auto grad = [&](const Eigen::VectorXd& x, double) {
    Eigen::VectorXd g(x.size());
    f(x, &g);
    return g;
  };
  return run(value, grad, x0, bounds, options);
}

Eigen::VectorXd fd_gradient(const BatchValue& f, const Eigen::VectorXd& x, double fx,
                            const Bounds& bounds, double fd_step) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd probes(n, 2 * n);
  Eigen::VectorXd lo_step(n);
  Eigen::VectorXd hi_step(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = fd_step * std::max(1.0, std::abs(x[i]));
    const double up = std::min(x[i] + h, bounds.upper[i]);
    const double dn = std::max(x[i] - h, bounds.lower[i]);
    hi_step[i] = up - x[i];
    lo_step[i] = x[i] - dn;
    probes.col(2 * i) = x;
    probes.col(2 * i)[i] = up;
    probes.col(2 * i + 1) = x;
    probes.col(2 * i + 1)[i] = dn;
  }
  Eigen::VectorXd vals;
  f(probes, vals);
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double span = hi_step[i] + lo_step[i];
    if (span <= 0.0) {
      g[i] = 0.0;
    } else if (hi_step[i] > 0.0 && lo_step[i] > 0.0) {
      g[i] = (vals[2 * i] - vals[2 * i + 1]) / span;
    } else if (hi_step[i] > 0.0) {
      g[i] = (vals[2 * i] - fx) / hi_step[i];
    } else {
      g[i] = (fx - vals[2 * i + 1]) / lo_step[i];
    }
  }
  return g;
}

Result maximize_fd(const BatchValue& f, const Eigen::VectorXd& x0, const Bounds& bounds,
                   const Options& options) {
  int probe_evals = 0;
  auto value = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd v;
    f(Eigen::MatrixXd(x), v);
    return v[0];
  };
  auto grad = [&](const Eigen::VectorXd& x, double fx) {
    probe_evals += static_cast<int>(2 * x.size());
    return fd_gradient(f, x, fx, bounds, options.fd_step);
  };
  Result r = run(value, grad, x0, bounds, options);
  r.evaluations += probe_evals;
  return r;
}

}  // namespace bswarm::opt
