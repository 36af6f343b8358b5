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

#include "bswarm/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "bswarm/optimize.hpp"

namespace bswarm {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::full:
      return "full";
    case Variant::sync:
      return "sync";
    case Variant::explorative:
      return "explorative";
  }
  return "full";
}

Variant parse_variant(std::string_view s) {
  if (s == "full") return Variant::full;
  if (s == "sync") return Variant::sync;
  if (s == "explorative") return Variant::explorative;
  throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

void PlannerConfig::validate() const {
  if (!(speed > 0.0) || !(horizon > 0.0) || n_max < 1 || !(delta_theta > 0.0) ||
      delta_theta > 360.0 || random_starts < 0 || max_iterations < 1 ||
      scan_radii < 0 || scan_angles < 0 || scan_starts < 0) {
    throw std::invalid_argument("invalid planner configuration");
  }
  if (alpha_override && !(*alpha_override >= 0.0 && *alpha_override <= 1.0)) {
    throw std::invalid_argument("alpha_override must lie in [0, 1]");
  }
}

Vec2 first_waypoint(int r, int m, const PlannerConfig& cfg) {
  if (m < 1 || r < 1 || r > m) {
    throw std::invalid_argument("first_waypoint needs 1 <= r <= m");
  }
  const double d = cfg.speed * cfg.horizon;
  const double theta_deg = cfg.delta_theta == 360.0 ? r * cfg.delta_theta / m
                                                    : r * cfg.delta_theta / (m + 1);
  const double theta = theta_deg * kPi / 180.0;
  return {d * std::cos(theta), d * std::sin(theta)};
}

Dataset downsample(const Dataset& data, std::size_t n_max) {
  if (data.size() <= n_max) {
    return data;
  }
  const std::size_t q = (data.size() + n_max - 1) / n_max;
  std::vector<Observation> kept;
  kept.reserve(data.size() / q + 1);
  for (std::size_t i = 0; i < data.size(); i += q) {
    kept.push_back(data[i]);
  }
  return Dataset(std::move(kept));
}

std::shared_ptr<const gp::GpModel> fit_planning_model(const Dataset& knowledge,
                                                      const PlannerConfig& cfg,
                                                      const gp::GpHyperParams& warm,
                                                      const ModelFitPolicy& policy) {
  const Dataset planning = downsample(knowledge, cfg.n_max);
  gp::GpHyperParams hyper = warm;
  if (!policy.freeze && !planning.empty()) {
    const Dataset fit_set =
        policy.hyper_fit_cap > 0 ? downsample(planning, policy.hyper_fit_cap) : planning;
    hyper = gp::fit(fit_set, warm, policy.options).hyper();
  }
  return std::make_shared<const gp::GpModel>(planning, hyper);
}

PlanDecision plan_next_waypoint(const PlanningSnapshot& snap, const PlannerConfig& cfg,
                                const AcquisitionParams& acq, double t_now, double t_max) {
  cfg.validate();
  if (!snap.gp) {
    throw std::invalid_argument("planning snapshot lacks a GP model");
  }
  const Vec2 c = snap.current_pos;
  const double radius = cfg.step_bound();
  const bool sync = cfg.variant == Variant::sync;

  PlanDecision d;
  std::mt19937_64 rng(snap.seed);

  XStarOptions xo;
  xo.previous = snap.previous_x_star;
  xo.seed = rng();
  xo.random_starts = cfg.x_star_random_starts;
  const auto xs = find_x_star(*snap.gp, snap.arena, snap.best_observed.value_or(c), xo);
  d.x_star = xs.x;
  d.x_star_warning = xs.warning;

  if (cfg.variant == Variant::explorative) {
    d.alpha = 0.0;
  } else if (cfg.alpha_override) {
    d.alpha = *cfg.alpha_override;
  } else {
    d.alpha = alpha_schedule(t_now, t_max);
  }

  AcquisitionParams params = acq;
  params.step_bound = radius;
  const AcquisitionContext ctx(snap.gp, c, snap.peers, d.alpha, d.x_star, params);

  // Polar parameters (r, a) with a = theta * radius, so both are in metres.
  auto to_point = [&](double r, double a) {
    const double th = a / radius;
    return snap.arena.clamp(c + r * Vec2(std::cos(th), std::sin(th)));
  };
  auto polar_of = [&](const Vec2& p) {
    const Vec2 q = project_to_disk(p, c, radius) - c;
    const double r = q.norm();
    const double th = r > 0.0 ? std::atan2(q.y(), q.x()) : 0.0;
    return std::pair{sync ? radius : r, th * radius};
  };

  std::vector<std::pair<double, double>> starts;
  starts.push_back(polar_of(snap.best_observed.value_or(c)));
  starts.push_back(polar_of(d.x_star));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < cfg.random_starts; ++i) {
    const double r = sync ? radius : radius * std::sqrt(unit(rng));
    const double th = 2.0 * kPi * unit(rng);
    starts.emplace_back(r, th * radius);
  }

  if (cfg.scan_starts > 0 && cfg.scan_radii > 0 && cfg.scan_angles > 0) {
    std::vector<std::pair<double, double>> polar;
    std::vector<Vec2> pts;
    for (int i = 1; i <= cfg.scan_radii; ++i) {
      const double r = sync ? radius : radius * i / cfg.scan_radii;
      for (int j = 0; j < cfg.scan_angles; ++j) {
        const double th = 2.0 * kPi * (j + 0.5 * (i % 2)) / cfg.scan_angles;
        polar.emplace_back(r, th * radius);
        pts.push_back(to_point(r, th * radius));
      }
      if (sync) break;
    }
    const auto vals = acquisition_values(ctx, pts);
    std::vector<std::size_t> order(vals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(cfg.scan_starts), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return vals[a] > vals[b] || (vals[a] == vals[b] && a < b);
                      });
    for (std::size_t i = 0; i < take; ++i) starts.push_back(polar[order[i]]);
  }

  opt::Options oo;
  oo.max_iterations = cfg.max_iterations;
  oo.step_tolerance = cfg.step_tolerance;
  oo.initial_step = 0.25 * radius;

  double best_value = -std::numeric_limits<double>::infinity();
  Vec2 best_point = c;
  for (const auto& [r0, a0] : starts) {
    opt::Result res;
    if (sync) {
      auto batch = [&](const Eigen::MatrixXd& pts, Eigen::VectorXd& out) {
        std::vector<Vec2> cand;
        for (Eigen::Index j = 0; j < pts.cols(); ++j) cand.push_back(to_point(radius, pts(0, j)));
        const auto v = acquisition_values(ctx, cand);
        out = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
      };
      opt::Bounds b{Eigen::VectorXd::Constant(1, a0 - 2.0 * kPi * radius),
                    Eigen::VectorXd::Constant(1, a0 + 2.0 * kPi * radius)};
      res = opt::maximize_fd(batch, Eigen::VectorXd::Constant(1, a0), b, oo);
      if (std::isfinite(res.value) && res.value > best_value) {
        best_value = res.value;
        best_point = to_point(radius, res.x[0]);
      }
    } else {
      auto batch = [&](const Eigen::MatrixXd& pts, Eigen::VectorXd& out) {
        std::vector<Vec2> cand;
        for (Eigen::Index j = 0; j < pts.cols(); ++j) cand.push_back(to_point(pts(0, j), pts(1, j)));
        const auto v = acquisition_values(ctx, cand);
        out = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
      };
      opt::Bounds b{Eigen::Vector2d(0.0, a0 - 2.0 * kPi * radius),
                    Eigen::Vector2d(radius, a0 + 2.0 * kPi * radius)};
      res = opt::maximize_fd(batch, Eigen::Vector2d(r0, a0), b, oo);
      if (std::isfinite(res.value) && res.value > best_value) {
        best_value = res.value;
        best_point = to_point(res.x[0], res.x[1]);
      }
    }
  }

  if (!std::isfinite(best_value)) {
    d.fallback = true;
    d.waypoint = snap.arena.clamp(project_to_disk(d.x_star, c, radius));
    d.value = std::numeric_limits<double>::quiet_NaN();
    return d;
  }
  d.waypoint = best_point;
  d.value = best_value;
  d.clipped = sync && std::abs((best_point - c).norm() - radius) > 1e-6;
  return d;
}

}  // namespace bswarm
