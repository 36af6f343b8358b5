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

#ifndef BSWARM_PLANNER_HPP
#define BSWARM_PLANNER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bswarm/acquisition.hpp"
#include "bswarm/dataset.hpp"
#include "bswarm/geometry.hpp"
#include "bswarm/gp.hpp"

namespace bswarm {

enum class Variant {
  full,         ///< asynchronous, step length anywhere in [0, V T]
  sync,         ///< every leg exactly V T long
  explorative,  ///< alpha fixed at 0
};

std::string to_string(Variant v);
Variant parse_variant(std::string_view s);

struct PlannerConfig {
  double speed = 0.1;          ///< V, m/s
  double horizon = 5.0;        ///< T, s
  std::size_t n_max = 1000;    ///< observation cap per GP fit
  double delta_theta = 360.0;  ///< initial feasible heading range, deg
  Variant variant = Variant::full;
  std::optional<double> alpha_override;
  /// Random feasible starts besides the best-observation and x_star seeds.
  int random_starts = 4;
  int max_iterations = 200;
  double step_tolerance = 1e-4;  ///< m
  int x_star_random_starts = 3;
  /// Coarse polar scan (radii x angles) whose best points seed extra starts;
  /// catches optima in regions flattened by arena clamping.
  int scan_radii = 4;
  int scan_angles = 24;
  int scan_starts = 2;

  [[nodiscard]] double step_bound() const { return speed * horizon; }
  void validate() const;
};

/// Offset of robot r's first waypoint from the shared start (r is 1-based).
Vec2 first_waypoint(int r, int m, const PlannerConfig& cfg);

/// Keeps every q-th record, q = ceil(|data| / n_max), when |data| > n_max.
Dataset downsample(const Dataset& data, std::size_t n_max);

/// Hyperparameter-fitting policy for planning-time GP models.
struct ModelFitPolicy {
  gp::GpFitOptions options;
  /// Hyperparameters are fit on at most this many records (stride-downsampled
  /// from the planning set); 0 fits on the full planning set.
  std::size_t hyper_fit_cap = 0;
  /// Reuse \p warm unchanged instead of refitting.
  bool freeze = false;
};

/// Downsamples \p knowledge to cfg.n_max, fits hyperparameters (warm-started
/// from \p warm) and conditions the GP on the downsampled set.
std::shared_ptr<const gp::GpModel> fit_planning_model(const Dataset& knowledge,
                                                      const PlannerConfig& cfg,
                                                      const gp::GpHyperParams& warm,
                                                      const ModelFitPolicy& policy);

/// Immutable inputs of one planning decision.
struct PlanningSnapshot {
  std::shared_ptr<const gp::GpModel> gp;
  Vec2 current_pos{0.0, 0.0};
  /// Location with the highest observed value.
  std::optional<Vec2> best_observed;
  std::optional<Vec2> previous_x_star;
  std::vector<PeerPlan> peers;
  Arena arena;
  std::uint64_t seed = 0;
};

struct PlanDecision {
  Vec2 waypoint;
  Vec2 x_star;
  double alpha = 0.0;
  double value = 0.0;
  /// Every optimizer start failed; waypoint is x_star projected into the disk.
  bool fallback = false;
  /// Arena clipping shortened a sync-variant step.
  bool clipped = false;
  bool x_star_warning = false;
};

/// Picks the next waypoint by maximizing the acquisition function over the
/// reachable disk intersected with the arena.
PlanDecision plan_next_waypoint(const PlanningSnapshot& snap, const PlannerConfig& cfg,
                                const AcquisitionParams& acq, double t_now, double t_max);

}  // namespace bswarm

#endif  // BSWARM_PLANNER_HPP
