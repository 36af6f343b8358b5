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
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "bswarm/swarm.hpp"

namespace {

using namespace bswarm;

CasePreset small_case(double t_max = 30.0) {
  GaussianMixtureField f({{Vec2(1.2, 1.4), 1.0, 0.5}}, Arena{Vec2(0, 0), Vec2(2, 2)}, 0.01);
  CaseConfig c;
  c.name = "small";
  c.t_max = t_max;
  c.speed = 0.1;
  c.horizon = 5.0;
  c.lipschitz = 20.0;
  c.epsilon = 0.05;
  c.start = Vec2(0.1, 0.1);
  c.delta_theta = 90.0;
  c.t_idealized = (f.source() - c.start).norm() / c.speed;
  return {f, c};
}

SwarmConfig swarm_of(int m, std::uint64_t seed, Variant v = Variant::full) {
  SwarmConfig s;
  s.robots = m;
  s.seed = seed;
  s.variant = v;
  s.rmse_grid = 30;
  return s;
}

TEST(Swarm, StartInsideVicinityFinishesImmediately) {
  auto p = small_case();
  p.config.start = p.field.source() + Vec2(0.01, 0.0);
  const auto r = run_experiment(p.field, p.config, swarm_of(3, 1));
  EXPECT_TRUE(r.found());
  EXPECT_EQ(r.t_achieved, 0.0);
  EXPECT_DOUBLE_EQ(r.tau, -1.0);
  EXPECT_EQ(r.finder, 1);
  EXPECT_TRUE(std::isnan(r.mapping_rmse));
}

TEST(Swarm, TimeoutReportsMissionLimit) {
  const auto p = small_case(6.0);
  const auto r = run_experiment(p.field, p.config, swarm_of(2, 1));
  EXPECT_EQ(r.termination, Termination::timeout);
  EXPECT_EQ(r.t_achieved, 6.0);
  EXPECT_EQ(r.finder, 0);
  EXPECT_GT(r.observations, 0u);
  EXPECT_TRUE(std::isfinite(r.mapping_rmse));
}

TEST(Swarm, EventLogIsDeterministic) {
  const auto p = small_case(25.0);
  const auto a = run_experiment(p.field, p.config, swarm_of(3, 9));
  const auto b = run_experiment(p.field, p.config, swarm_of(3, 9));
  EXPECT_EQ(a.event_log(), b.event_log());
  const auto c = run_experiment(p.field, p.config, swarm_of(3, 10));
  EXPECT_NE(a.event_log(), c.event_log());
}

TEST(Swarm, PlanTimingsRecorded) {
  const auto p = small_case(25.0);
  const auto r = run_experiment(p.field, p.config, swarm_of(3, 9));
  ASSERT_FALSE(r.plans.empty());
  double sum = 0.0;
  int n = 0;
  for (const auto& plan : r.plans) {
    EXPECT_GE(plan.cpu_seconds, 0.0);
    // One planning thread cannot burn more CPU than elapsed time (1 ms clock slack).
    EXPECT_LE(plan.cpu_seconds, plan.wall_seconds + 1e-3);
    if (plan.k > 1) {
      sum += plan.cpu_seconds;
      ++n;
    }
  }
  ASSERT_GT(n, 0);
  EXPECT_DOUBLE_EQ(r.mean_plan_seconds(), sum / n);
}

TEST(Swarm, FirstWaypointsFanOut) {
  const auto p = small_case(1.0);
  const auto r = run_experiment(p.field, p.config, swarm_of(3, 0));
  std::set<std::pair<double, double>> seen;
  for (const auto& rec : r.plans) {
    if (rec.k != 1) continue;
    EXPECT_EQ(rec.t, 0.0);
    EXPECT_NEAR((rec.waypoint - p.config.start).norm(), p.config.step_bound(), 1e-12);
    seen.insert({rec.waypoint.x(), rec.waypoint.y()});
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(Swarm, RobotsNeverExceedSpeed) {
  const auto p = small_case(40.0);
  const auto r = run_experiment(p.field, p.config, swarm_of(4, 3));
  std::map<int, TrajectoryRow> last;
  for (const auto& row : r.trajectory) {
    if (const auto it = last.find(row.robot); it != last.end()) {
      const double dt = row.t - it->second.t;
      ASSERT_GE(dt, 0.0);
      EXPECT_LE((row.position - it->second.position).norm(), p.config.speed * dt + 1e-9);
    }
    last[row.robot] = row;
    EXPECT_TRUE(p.field.arena().contains(row.position));
  }
}

TEST(Swarm, PlannedStepsStayInDisk) {
  const auto p = small_case(40.0);
  const auto r = run_experiment(p.field, p.config, swarm_of(3, 4));
  for (const auto& rec : r.plans) {
    EXPECT_LE((rec.waypoint - rec.from).norm(), p.config.step_bound() + 1e-9);
  }
}

TEST(Swarm, SyncVariantPlansOnHorizonGrid) {
  const auto p = small_case(40.0);
  const auto r = run_experiment(p.field, p.config, swarm_of(3, 5, Variant::sync));
  for (const auto& rec : r.plans) {
    if (rec.clipped) continue;
    const double q = rec.t / p.config.horizon;
    EXPECT_NEAR(q, std::round(q), 1e-9) << "robot " << rec.robot << " t " << rec.t;
    EXPECT_NEAR((rec.waypoint - rec.from).norm(), p.config.step_bound(), 1e-6);
  }
}

TEST(Swarm, KnowledgeGrowsAndRespectsCausality) {
  const auto p = small_case(40.0);
  SimOptions opt;
  std::map<int, Dataset> previous;
  int checks = 0;
  opt.on_plan = [&](const RobotState& r, std::span<const RobotState>, double t) {
    const Dataset& now = r.knowledge.observations;
    if (const auto it = previous.find(r.id); it != previous.end()) {
      Dataset merged = now;
      EXPECT_EQ(merged.merge(it->second), 0u) << "robot " << r.id << " forgot data";
    }
    for (const auto& o : now) {
      EXPECT_LE(o.time, t);
      if (o.observer != r.id) {
        ASSERT_TRUE(r.knowledge.peer_plan_time.count(o.observer));
        EXPECT_LE(o.time, r.knowledge.peer_plan_time.at(o.observer));
      }
    }
    previous[r.id] = now;
    ++checks;
  };
  (void)run_experiment(p.field, p.config, swarm_of(3, 6), opt);
  EXPECT_GT(checks, 5);
}

TEST(Swarm, PerRobotRmseReported) {
  const auto p = small_case(15.0);
  const auto r = run_experiment(p.field, p.config, swarm_of(3, 2));
  ASSERT_EQ(r.robot_rmse.size(), 3u);
  for (double v : r.robot_rmse) EXPECT_TRUE(std::isfinite(v));
}

TEST(Swarm, SnapshotsCaptured) {
  const auto p = small_case(12.0);
  auto s = swarm_of(2, 2);
  s.snapshot_times = {5.0, 10.0};
  s.snapshot_grid = 7;
  s.final_grid = 5;
  const auto r = run_experiment(p.field, p.config, s);
  ASSERT_EQ(r.snapshots.size(), 3u);
  EXPECT_EQ(r.snapshots[0].t, 5.0);
  EXPECT_EQ(r.snapshots[0].mean.rows(), 7);
  EXPECT_EQ(r.snapshots[2].n, 5);
}

TEST(Swarm, InvalidSetupRejected) {
  const auto p = small_case();
  EXPECT_THROW(run_experiment(p.field, p.config, swarm_of(0, 1)), std::invalid_argument);
  auto bad = p.config;
  bad.start = Vec2(-1, 0);
  EXPECT_THROW(run_experiment(p.field, bad, swarm_of(2, 1)), ConfigError);
}

TEST(Deliver, MergesObservationsAndKeepsNewestPlan) {
  Knowledge k;
  k.observations.add({Vec2(0, 0), 1.0, 1.0, 1});
  Broadcast a;
  a.sender = 2;
  a.sent_at = 5.0;
  a.planned_waypoint = Vec2(1, 1);
  a.observations.add({Vec2(0, 1), 2.0, 2.0, 2});
  Broadcast b = a;
  b.sent_at = 3.0;
  b.planned_waypoint = Vec2(9, 9);
  b.observations = Dataset{};
  b.observations.add({Vec2(0, 2), 3.0, 1.0, 2});
  const std::vector<Broadcast> inbox{a, b};
  const auto out = deliver_and_snapshot(k, inbox);
  EXPECT_EQ(out.observations.size(), 3u);
  EXPECT_EQ(out.peers.at(2).waypoint, Vec2(1, 1));
  EXPECT_EQ(out.peer_plan_time.at(2), 5.0);
  EXPECT_EQ(k.observations.size(), 1u);
}

TEST(Deliver, DuplicateObservationsCountOnce) {
  Knowledge k;
  Broadcast a;
  a.sender = 3;
  a.observations.add({Vec2(0, 1), 2.0, 2.0, 3});
  const std::vector<Broadcast> inbox{a, a};
  EXPECT_EQ(deliver_and_snapshot(k, inbox).observations.size(), 1u);
}

TEST(Deliver, EmptyInboxIsIdentity) {
  Knowledge k;
  k.observations.add({Vec2(0, 0), 1.0, 1.0, 1});
  const auto out = deliver_and_snapshot(k, {});
  EXPECT_EQ(out.observations.size(), 1u);
  EXPECT_TRUE(out.peers.empty());
}

}  // namespace
