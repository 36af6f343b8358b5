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

#include "bswarm/swarm.hpp"

namespace {

using namespace bswarm;

CasePreset unit_square(const Vec2& source) {
  GaussianMixtureField f({{source, 1.0, 0.2}}, Arena{Vec2(0, 0), Vec2(1, 1)}, 0.0);
  CaseConfig c;
  c.t_max = 10.0;
  c.speed = 0.1;
  c.epsilon = 0.05;
  c.start = Vec2(0, 0);
  c.t_idealized = source.norm() / c.speed;
  return {f, c};
}

TEST(Sweep, SingleRobotLaneGeometry) {
  const auto plans = plan_exhaustive_sweep(Arena{Vec2(0, 0), Vec2(1, 1)}, Vec2(0, 0), 0.05, 1);
  ASSERT_EQ(plans.size(), 1u);
  const auto& path = plans[0].path;
  ASSERT_EQ(path.size(), 21u);
  EXPECT_EQ(path[0], Vec2(0, 0));
  EXPECT_NEAR(path[1].x(), 0.05, 1e-15);
  EXPECT_EQ(path[1].y(), 0.0);
  EXPECT_EQ(path[2].y(), 1.0);
  EXPECT_NEAR(path[3].x(), 0.15, 1e-15);
  EXPECT_NEAR(path[20].x(), 0.95, 1e-12);
}

TEST(Sweep, FindsSourceAtLaneEntry) {
  const auto p = unit_square(Vec2(0.25, 0.5));
  const auto r = run_exhaustive_baseline(p.field, p.config, 1);
  // 0.05 in, two full lanes with 0.1 shifts, then 0.45 up the third lane.
  EXPECT_TRUE(r.found());
  EXPECT_NEAR(r.t_achieved, 27.0, 1e-9);
  EXPECT_TRUE(std::isnan(r.mapping_rmse));
}

TEST(Sweep, IgnoresMissionTimeLimit) {
  const auto p = unit_square(Vec2(0.95, 0.2));
  const auto r = run_exhaustive_baseline(p.field, p.config, 1);
  EXPECT_TRUE(r.found());
  EXPECT_GT(r.t_achieved, p.config.t_max);
}

TEST(Sweep, LastLaneIsCappedInsideRegion) {
  const auto plans = plan_exhaustive_sweep(Arena{Vec2(0, 0), Vec2(0.25, 1)}, Vec2(0, 0), 0.05, 1);
  const auto& path = plans[0].path;
  EXPECT_NEAR(path.back().x(), 0.2, 1e-12);
}

TEST(Sweep, StripsPartitionArena) {
  const Arena a{Vec2(0, 0), Vec2(3, 3)};
  for (int m : {1, 2, 3, 4, 5, 7, 10, 20}) {
    const auto plans = plan_exhaustive_sweep(a, Vec2(0.05, 0.05), 0.05, m);
    ASSERT_EQ(plans.size(), static_cast<std::size_t>(m));
    double area = 0.0;
    for (const auto& p : plans) {
      area += p.region.width() * p.region.height();
      for (std::size_t i = 1; i < p.path.size(); ++i) EXPECT_TRUE(p.region.contains(p.path[i]));
    }
    EXPECT_NEAR(area, 9.0, 1e-9) << m;
  }
}

TEST(Sweep, NearestQuadrantGetsExtraRobots) {
  const Arena a{Vec2(0, 0), Vec2(2, 2)};
  const auto plans = plan_exhaustive_sweep(a, Vec2(0, 0), 0.05, 5);
  int in_near = 0;
  for (const auto& p : plans) {
    if (p.region.hi.x() <= 1.0 + 1e-12 && p.region.hi.y() <= 1.0 + 1e-12) ++in_near;
  }
  EXPECT_EQ(in_near, 2);
}

TEST(Sweep, FasterWithMoreRobotsOnPreset) {
  const auto p = case1_preset();
  const auto one = run_exhaustive_baseline(p.field, p.config, 1);
  const auto five = run_exhaustive_baseline(p.field, p.config, 5);
  EXPECT_TRUE(one.found());
  EXPECT_TRUE(five.found());
  EXPECT_LE(five.t_achieved, one.t_achieved);
}

TEST(Sweep, RejectsBadArguments) {
  EXPECT_THROW(plan_exhaustive_sweep(Arena{}, Vec2(0, 0), 0.05, 0), std::invalid_argument);
  EXPECT_THROW(plan_exhaustive_sweep(Arena{}, Vec2(0, 0), 0.0, 1), std::invalid_argument);
}

}  // namespace
