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

#include "bswarm/metrics.hpp"

namespace {

using namespace bswarm;

TEST(Metrics, RelativeCompletionTime) {
  EXPECT_NEAR(relative_completion_time(36.0, 29.8), 0.2081, 1e-4);
  EXPECT_EQ(relative_completion_time(10.0, 10.0), 0.0);
  EXPECT_THROW(relative_completion_time(1.0, 0.0), std::domain_error);
}

TEST(Metrics, ExactPredictorHasZeroError) {
  const auto p = case1_preset();
  const auto& f = p.field;
  EXPECT_EQ(mapping_rmse([&](const Vec2& x) { return f.evaluate(x); }, f, f.arena()), 0.0);
}

TEST(Metrics, ConstantOffsetGivesOffset) {
  const auto p = case1_preset();
  const auto& f = p.field;
  EXPECT_NEAR(mapping_rmse([&](const Vec2& x) { return f.evaluate(x) + 0.25; }, f, f.arena(), 40), 0.25,
              1e-14);
}

TEST(Metrics, GpRmseMatchesTwoLoopReference) {
  const auto p = case2_preset();
  const auto& f = p.field;
  Dataset d;
  for (int i = 0; i < 40; ++i) {
    const Vec2 x(0.7 * i, 15.0 + 10.0 * std::sin(i));
    d.add({x, f.evaluate(x), i * 1.0, 1});
  }
  const gp::GpModel m(d, gp::GpHyperParams{3.0, 0.5, 0.01});
  const int n = 100;
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 x(30.0 * i / (n - 1), 30.0 * j / (n - 1));
      const double e = m.mean(x) - f.evaluate(x);
      s += e * e;
    }
  }
  EXPECT_NEAR(mapping_rmse(m, f, f.arena()), std::sqrt(s / (n * n)), 1e-12);
}

TEST(Metrics, ZeroPredictorGivesFieldRms) {
  const auto p = case1_preset();
  const auto& f = p.field;
  const gp::GpModel prior(gp::GpHyperParams{});
  double s = 0.0;
  for (const auto& x : f.arena().grid(50)) s += f.evaluate(x) * f.evaluate(x);
  EXPECT_NEAR(mapping_rmse(prior, f, f.arena(), 50), std::sqrt(s / 2500.0), 1e-12);
}

}  // namespace
