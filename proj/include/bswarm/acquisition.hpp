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

#ifndef BSWARM_ACQUISITION_HPP
#define BSWARM_ACQUISITION_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bswarm/geometry.hpp"
#include "bswarm/gp.hpp"

namespace bswarm {

struct AcquisitionParams {
  double beta = 50.0;         ///< explore-term scaling
  double max_signal = 1.0;    ///< M
  double lipschitz = 20.0;    ///< L
  double step_bound = 0.5;    ///< V*T, m
  int quadrature_nodes = 11;  ///< nodes along the candidate path (Simpson if odd)
  /// Multiply the path-averaged uncertainty by the path length.
  bool arc_length = false;
  bool penalty_enabled = true;
  /// Peer std floor, as a fraction of the GP signal std.
  double sigma_floor = 1e-6;

  void validate() const;
};

/// A peer's most recently announced plan.
struct PeerPlan {
  int robot = 0;
  Vec2 waypoint{0.0, 0.0};
  /// Where the peer will sample on its way to \p waypoint.
  std::vector<Vec2> path_points;
};

/// Straight segment s(u) = u*end + (1-u)*start, u in [0, 1].
struct CandidatePath {
  Vec2 start;
  Vec2 end;

  [[nodiscard]] Vec2 at(double u) const { return u * end + (1.0 - u) * start; }
  [[nodiscard]] double length() const { return (end - start).norm(); }
};

/// Penalty parameters cached per peer waypoint.
struct PeerPenalty {
  Vec2 waypoint;
  double mu = 0.0;
  double sigma = 0.0;
};

/// Everything needed to score candidate waypoints for one robot at one
/// planning instance. Immutable after construction.
class AcquisitionContext {
 public:
  AcquisitionContext(std::shared_ptr<const gp::GpModel> gp, Vec2 current_pos,
                     std::vector<PeerPlan> peers, double alpha, Vec2 x_star,
                     AcquisitionParams params);

  [[nodiscard]] const gp::GpModel& gp() const { return *gp_; }
  [[nodiscard]] const Vec2& current_pos() const { return current_pos_; }
  [[nodiscard]] const std::vector<PeerPlan>& peers() const { return peers_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] const Vec2& x_star() const { return x_star_; }
  [[nodiscard]] const AcquisitionParams& params() const { return params_; }
  [[nodiscard]] const gp::AugmentedPosterior& augmented() const { return *augmented_; }
  [[nodiscard]] const std::vector<PeerPenalty>& penalties() const { return penalties_; }
  /// Augmented std at current_pos, shared by every path starting there.
  [[nodiscard]] double start_sigma() const { return start_sigma_; }

 private:
  std::shared_ptr<const gp::GpModel> gp_;
  Vec2 current_pos_;
  std::vector<PeerPlan> peers_;
  double alpha_;
  Vec2 x_star_;
  AcquisitionParams params_;
  std::vector<Vec2> virtual_points_;
  std::unique_ptr<gp::AugmentedPosterior> augmented_;
  std::vector<PeerPenalty> penalties_;
  double start_sigma_ = 0.0;
};

/// Exploitation weight 1 / (1 + exp(-10 (t / t_max - 1/3))).
double alpha_schedule(double t, double t_max);

/// 1 / (1 + |x - x_star|^2).
double exploit_term(const Vec2& x, const Vec2& x_star);

struct XStarOptions {
  std::optional<Vec2> previous;
  std::uint64_t seed = 0;
  int random_starts = 3;
  int max_iterations = 200;
  double step_tolerance = 1e-4;
};

struct XStarResult {
  Vec2 x;
  double mean = 0.0;
  /// No start converged; x is the best iterate seen.
  bool warning = false;
};

/// Multi-start local maximization of the posterior mean over the arena.
XStarResult find_x_star(const gp::GpModel& gp, const Arena& arena, const Vec2& init_hint,
                        const XStarOptions& options = {});

/// Trapezoid estimate of the integral over u of the augmented posterior std along \p path.
double explore_term(const AcquisitionContext& ctx, const CandidatePath& path);

/// Probability that x lies outside the Lipschitz exclusion ball of a peer waypoint.
double local_penalty(const Vec2& x, const Vec2& peer_wp, double mu_p, double sigma_p,
                     double max_signal, double lipschitz);

/// Product of local penalties over all peer waypoints (1 with no peers or
/// with the penalty disabled).
double effective_penalty(const AcquisitionContext& ctx, const Vec2& x);

struct AcquisitionTerms {
  double omega = 0.0;
  double sigma = 0.0;
  double gamma = 1.0;
  double value = 0.0;
};

/// (alpha Omega + (1 - alpha) beta Sigma) Gamma for a path from the current
/// position to \p x. Throws std::domain_error if x is farther than step_bound.
double acquisition_value(const AcquisitionContext& ctx, const Vec2& x);
AcquisitionTerms acquisition_terms(const AcquisitionContext& ctx, const Vec2& x);

/// Batched acquisition_value; all quadrature nodes go through one solve.
std::vector<double> acquisition_values(const AcquisitionContext& ctx, std::span<const Vec2> xs);

}  // namespace bswarm

#endif  // BSWARM_ACQUISITION_HPP
