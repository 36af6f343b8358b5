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

#ifndef BSWARM_SWARM_HPP
#define BSWARM_SWARM_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bswarm/acquisition.hpp"
#include "bswarm/dataset.hpp"
#include "bswarm/field.hpp"
#include "bswarm/gp.hpp"
#include "bswarm/planner.hpp"

namespace bswarm {

enum class Termination { source_found, timeout };
std::string to_string(Termination t);

/// What a robot shares after reaching a waypoint.
struct Broadcast {
  int sender = 0;
  double sent_at = 0.0;  ///< s
  Vec2 planned_waypoint{0.0, 0.0};
  /// Where the sender will sample on its way to planned_waypoint.
  std::vector<Vec2> planned_path_samples;
  /// Observations from the sender's last leg, stride-capped.
  Dataset observations;
};

/// A robot's view of the swarm.
struct Knowledge {
  Dataset observations;
  /// Latest plan per peer id.
  std::map<int, PeerPlan> peers;
  std::map<int, double> peer_plan_time;
};

/// Merges broadcasts into \p knowledge. Observations are deduplicated by
/// (observer, time); a newer plan from a sender replaces the older one.
Knowledge deliver_and_snapshot(const Knowledge& knowledge, std::span<const Broadcast> inbox);

struct RobotState {
  int id = 0;
  Vec2 pose{0.0, 0.0};
  int k = 0;  ///< waypoints planned so far
  Vec2 current_target{0.0, 0.0};
  Dataset local_data;  ///< own observations
  Knowledge knowledge;
  std::vector<Broadcast> inbox;
  double next_sample_time = 0.0;
  double last_broadcast_time = -1.0;

  // Current leg.
  Vec2 leg_start{0.0, 0.0};
  std::int64_t leg_departure_ms = 0;
  std::int64_t leg_arrival_ms = 0;
  Dataset leg_observations;

  gp::GpHyperParams hyper;
  std::optional<Vec2> x_star;
};

struct SwarmConfig {
  int robots = 5;
  Variant variant = Variant::full;
  std::uint64_t seed = 0;
  bool penalty_enabled = true;
  double planning_latency = 0.0;    ///< s spent at a waypoint before departing
  std::size_t broadcast_cap = 100;  ///< observations per broadcast
  double sample_period = 1.0;       ///< s
  /// Union-knowledge mean/std grids are captured at these times.
  std::vector<double> snapshot_times;
  int snapshot_grid = 50;
  /// Side of the final mean/std grid; 0 skips it.
  int final_grid = 0;
  int rmse_grid = 100;
  bool per_robot_rmse = true;
  bool record_trajectories = true;

  void validate() const;
};

/// Everything besides the field and case that shapes a run. The planner's
/// speed, horizon and heading range and the acquisition's M, L and step bound
/// are taken from the case.
struct SimOptions {
  PlannerConfig planner;
  AcquisitionParams acquisition;
  ModelFitPolicy fit;
  gp::GpHyperParams initial_hyper{1.0, 1.0, 0.1};
  /// Called after each plan with the planning robot and the whole swarm.
  std::function<void(const RobotState&, std::span<const RobotState>, double)> on_plan;
};

struct TrajectoryRow {
  double t = 0.0;
  int robot = 0;
  Vec2 position{0.0, 0.0};
  double value = 0.0;  ///< NaN for poses without a sample
};

struct PlanRecord {
  double t = 0.0;
  int robot = 0;
  int k = 0;
  Vec2 from{0.0, 0.0};
  Vec2 waypoint{0.0, 0.0};
  double alpha = 0.0;
  double value = 0.0;
  bool fallback = false;
  bool clipped = false;
  std::size_t knowledge_size = 0;
  std::size_t model_size = 0;  ///< records in the planning GP after the N_max cap
  double wall_seconds = 0.0;  ///< not part of the deterministic output
  /// CPU time of the planning thread; OpenMP helper threads are not counted.
  /// Not part of the deterministic output.
  double cpu_seconds = 0.0;
};

struct GridSnapshot {
  double t = 0.0;
  int n = 0;
  Arena arena;
  Eigen::MatrixXd mean;  ///< row j, column i is grid point (x_i, y_j)
  Eigen::MatrixXd stddev;
};

struct SimResult {
  Termination termination = Termination::timeout;
  double t_achieved = 0.0;
  double tau = 0.0;
  double mapping_rmse = 0.0;  ///< NaN when no model was built
  std::vector<double> robot_rmse;
  int finder = 0;  ///< robot that reached the source, 0 if none
  int robots = 0;
  std::size_t observations = 0;
  gp::GpHyperParams final_hyper;
  double check_interval = 1.0;  ///< s between source-proximity checks
  std::vector<TrajectoryRow> trajectory;
  std::vector<std::string> events;  ///< JSON lines
  std::vector<PlanRecord> plans;
  std::vector<GridSnapshot> snapshots;

  [[nodiscard]] std::string event_log() const;
  /// Mean planning-thread CPU seconds over plans after the first waypoint.
  [[nodiscard]] double mean_plan_seconds() const;
  [[nodiscard]] bool found() const { return termination == Termination::source_found; }
};

/// Runs the asynchronous swarm until some robot is within epsilon of the
/// source or t_max passes. Inconsistent setup throws before any event runs.
SimResult run_experiment(const GaussianMixtureField& field, const CaseConfig& config,
                         const SwarmConfig& swarm, const SimOptions& options = {});

/// Region swept by one baseline robot, with its lane plan.
struct SweepPlan {
  int robot = 0;
  Arena region;
  std::vector<Vec2> path;  ///< starts at the launch point
};

std::vector<SweepPlan> plan_exhaustive_sweep(const Arena& arena, const Vec2& start, double epsilon,
                                             int m);

/// Parallel boustrophedon coverage with lane spacing 2 epsilon. The sweep is
/// not cut at t_max; it runs until the source is reached or all lanes are done.
SimResult run_exhaustive_baseline(const GaussianMixtureField& field, const CaseConfig& config,
                                  int m);

}  // namespace bswarm

#endif  // BSWARM_SWARM_HPP
