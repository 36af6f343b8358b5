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

#include <cmath>

#include <gtest/gtest.h>

#include "bswarm/optimize.hpp"

namespace {

using namespace bswarm;

opt::Bounds box(int n, double lo, double hi) {
  return {Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi)};
}

TEST(Optimize, ConcaveQuadraticWithGradient) {
  const Eigen::Vector2d c(0.3, -0.7);
  auto f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    const Eigen::VectorXd d = x - c;
    if (g) *g = -2.0 * Eigen::Vector2d(1.0, 10.0).cwiseProduct(d);
    return -(d[0] * d[0] + 10.0 * d[1] * d[1]);
  };
  const auto r = opt::maximize(f, Eigen::Vector2d(2, 2), box(2, -5, 5));
  EXPECT_LT((r.x - c).norm(), 1e-4);
  EXPECT_TRUE(r.converged);
}

TEST(Optimize, ActiveBoundIsRespected) {
  auto f = [](const Eigen::MatrixXd& pts, Eigen::VectorXd& out) {
    out.resize(pts.cols());
    for (Eigen::Index j = 0; j < pts.cols(); ++j) out[j] = -std::pow(pts(0, j) - 3.0, 2) - std::pow(pts(1, j), 2);
  };
  const auto r = opt::maximize_fd(f, Eigen::Vector2d(0.5, 0.5), box(2, -1, 1));
  EXPECT_NEAR(r.x[0], 1.0, 1e-9);
  EXPECT_NEAR(r.x[1], 0.0, 1e-4);
  EXPECT_TRUE((r.x.array() <= 1.0).all());
}

TEST(Optimize, RosenbrockFromFiniteDifferences) {
  auto f = [](const Eigen::MatrixXd& pts, Eigen::VectorXd& out) {
    out.resize(pts.cols());
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      const double a = pts(0, j);
      const double b = pts(1, j);
      out[j] = -(std::pow(1 - a, 2) + 100 * std::pow(b - a * a, 2));
    }
  };
  opt::Options o;
  o.max_iterations = 2000;
  o.step_tolerance = 1e-10;
  const auto r = opt::maximize_fd(f, Eigen::Vector2d(-1.2, 1.0), box(2, -3, 3), o);
  EXPECT_LT((r.x - Eigen::Vector2d(1, 1)).norm(), 1e-3);
}

TEST(Optimize, StartOutsideBoxIsProjected) {
  auto f = [](const Eigen::MatrixXd& pts, Eigen::VectorXd& out) {
    out = -pts.row(0).transpose().array().square();
  };
  const auto r = opt::maximize_fd(f, Eigen::VectorXd::Constant(1, 9.0), box(1, -2, 2));
  EXPECT_NEAR(r.x[0], 0.0, 1e-4);
}

TEST(Optimize, FdGradientMatchesAnalytic) {
  auto f = [](const Eigen::MatrixXd& pts, Eigen::VectorXd& out) {
    out.resize(pts.cols());
    for (Eigen::Index j = 0; j < pts.cols(); ++j) out[j] = std::sin(pts(0, j)) * std::exp(pts(1, j));
  };
  const Eigen::Vector2d x(0.4, -0.3);
  Eigen::VectorXd fx;
  f(x, fx);
  const auto g = opt::fd_gradient(f, x, fx[0], box(2, -1, 1), 1e-6);
  EXPECT_NEAR(g[0], std::cos(0.4) * std::exp(-0.3), 1e-7);
  EXPECT_NEAR(g[1], std::sin(0.4) * std::exp(-0.3), 1e-7);
}

TEST(Optimize, FdGradientAtBoundUsesOneSidedStep) {
  auto f = [](const Eigen::MatrixXd& pts, Eigen::VectorXd& out) {
    out = pts.row(0).transpose().array().square();
  };
  Eigen::VectorXd fx;
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 1.0);
  f(x, fx);
  const auto g = opt::fd_gradient(f, x, fx[0], box(1, -1, 1), 1e-6);
  EXPECT_NEAR(g[0], 2.0, 1e-4);
}

}  // namespace
