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

#include "bswarm/acquisition.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "bswarm/kernels.hpp"
#include "bswarm/optimize.hpp"

namespace bswarm {
namespace {

constexpr double kStepSlack = 1e-9;

void check_step(const AcquisitionContext& ctx, const Vec2& x) {
  if (!x.allFinite() ||
      (x - ctx.current_pos()).norm() > ctx.params().step_bound + kStepSlack) {
    throw std::domain_error("candidate waypoint violates the step-length bound");
  }
}

// Composite Simpson on an odd node count, trapezoid otherwise. Same nodes and
// cost either way; Simpson keeps the error well under 1e-3 relative on the
// curved std profiles seen along a step.
double quadrature_weight(int j, int nodes) {
  const double h = 1.0 / (nodes - 1);
  if (nodes % 2 == 0) {
    return (j == 0 || j == nodes - 1) ? 0.5 * h : h;
  }
  if (j == 0 || j == nodes - 1) return h / 3.0;
  return (j % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
}

}  // namespace

void AcquisitionParams::validate() const {
  if (!(beta > 0.0) || !(lipschitz > 0.0) || !(step_bound > 0.0) || quadrature_nodes < 2 ||
      !std::isfinite(max_signal) || !(sigma_floor > 0.0)) {
    throw std::invalid_argument("invalid acquisition parameters");
  }
}

AcquisitionContext::AcquisitionContext(std::shared_ptr<const gp::GpModel> gp, Vec2 current_pos,
                                       std::vector<PeerPlan> peers, double alpha, Vec2 x_star,
                                       AcquisitionParams params)
    : gp_(std::move(gp)),
      current_pos_(current_pos),
      peers_(std::move(peers)),
      alpha_(alpha),
      x_star_(x_star),
      params_(params) {
  params_.validate();
  if (!gp_) {
    throw std::invalid_argument("acquisition context needs a GP model");
  }
  if (!(alpha_ >= 0.0 && alpha_ <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  for (const auto& p : peers_) {
    virtual_points_.insert(virtual_points_.end(), p.path_points.begin(), p.path_points.end());
  }
  augmented_ = std::make_unique<gp::AugmentedPosterior>(*gp_, virtual_points_);
  start_sigma_ = augmented_->stddev(current_pos_);

  const double floor = params_.sigma_floor * gp_->hyper().signal_std;
  if (!peers_.empty()) {
    std::vector<Vec2> wps;
    for (const auto& p : peers_) wps.push_back(p.waypoint);
    const Eigen::MatrixX2d q = kernels::to_matrix(wps);
    const Eigen::VectorXd mu = gp_->mean(q);
    const Eigen::VectorXd sd = gp_->stddev(q);
    for (std::size_t i = 0; i < wps.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      penalties_.push_back({wps[i], mu[k], std::max(sd[k], floor)});
    }
  }
}

double alpha_schedule(double t, double t_max) {
  if (!(t_max > 0.0)) {
    throw std::domain_error("t_max must be positive");
  }
  // t_max / 3 is rarely representable; its nearest double is the midpoint.
  if (t == t_max / 3.0) {
    return 0.5;
  }
  return 1.0 / (1.0 + std::exp(-10.0 * (3.0 * t - t_max) / (3.0 * t_max)));
}

double exploit_term(const Vec2& x, const Vec2& x_star) {
  return 1.0 / (1.0 + (x - x_star).squaredNorm());
}

XStarResult find_x_star(const gp::GpModel& gp, const Arena& arena, const Vec2& init_hint,
                        const XStarOptions& options) {
  if (arena.degenerate()) {
    throw std::invalid_argument("arena is degenerate");
  }
  const Vec2 hint = arena.clamp(init_hint);
  if (gp.empty()) {
    return {hint, 0.0, false};
  }

  std::vector<Vec2> starts{hint};
  if (options.previous) {
    starts.push_back(arena.clamp(*options.previous));
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> ux(arena.lo.x(), arena.hi.x());
  std::uniform_real_distribution<double> uy(arena.lo.y(), arena.hi.y());
  for (int i = 0; i < options.random_starts; ++i) {
    const double x = ux(rng);
    starts.emplace_back(x, uy(rng));
  }

  auto batch = [&](const Eigen::MatrixXd& pts, Eigen::VectorXd& out) {
    Eigen::MatrixX2d q = pts.transpose();
    out = gp.mean(q);
  };
  opt::Bounds bounds{arena.lo, arena.hi};
  opt::Options oo;
  oo.max_iterations = options.max_iterations;
  oo.step_tolerance = options.step_tolerance;
  oo.initial_step = 0.05 * arena.diagonal();

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  XStarResult best{hint, -std::numeric_limits<double>::infinity(), true};
  bool any_converged = false;
  for (const auto& s : starts) {
    const double v0 = gp.mean(s);
    lo = std::min(lo, v0);
    hi = std::max(hi, v0);
    const auto r = opt::maximize_fd(batch, s, bounds, oo);
    lo = std::min(lo, r.value);
    hi = std::max(hi, r.value);
    any_converged = any_converged || r.converged;
    if (r.value > best.mean) {
      best.x = r.x;
      best.mean = r.value;
    }
  }
  if (hi - lo < 1e-12) {
    return {hint, gp.mean(hint), false};
  }
  best.warning = !any_converged;
  return best;
}

double explore_term(const AcquisitionContext& ctx, const CandidatePath& path) {
  const int n = ctx.params().quadrature_nodes;
  Eigen::MatrixX2d q(n, 2);
  for (int j = 0; j < n; ++j) {
    q.row(j) = path.at(static_cast<double>(j) / (n - 1)).transpose();
  }
  const Eigen::VectorXd sd = ctx.augmented().stddev(q);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    sum += quadrature_weight(j, n) * sd[j];
  }
  return ctx.params().arc_length ? sum * path.length() : sum;
}

double local_penalty(const Vec2& x, const Vec2& peer_wp, double mu_p, double sigma_p,
                     double max_signal, double lipschitz) {
  const double z = (lipschitz * (x - peer_wp).norm() - max_signal + mu_p) /
                   std::sqrt(2.0 * sigma_p * sigma_p);
  return 0.5 * std::erfc(-z);
}

double effective_penalty(const AcquisitionContext& ctx, const Vec2& x) {
  if (!ctx.params().penalty_enabled) {
    return 1.0;
  }
  double g = 1.0;
  for (const auto& p : ctx.penalties()) {
    g *= local_penalty(x, p.waypoint, p.mu, p.sigma, ctx.params().max_signal,
                       ctx.params().lipschitz);
  }
  return g;
}

AcquisitionTerms acquisition_terms(const AcquisitionContext& ctx, const Vec2& x) {
  check_step(ctx, x);
  AcquisitionTerms t;
  t.omega = exploit_term(x, ctx.x_star());
  t.sigma = explore_term(ctx, {ctx.current_pos(), x});
  t.gamma = effective_penalty(ctx, x);
  const double a = ctx.alpha();
  t.value = (a * t.omega + (1.0 - a) * ctx.params().beta * t.sigma) * t.gamma;
  return t;
}

double acquisition_value(const AcquisitionContext& ctx, const Vec2& x) {
  return acquisition_terms(ctx, x).value;
}

std::vector<double> acquisition_values(const AcquisitionContext& ctx, std::span<const Vec2> xs) {
  const int n = ctx.params().quadrature_nodes;
  const Eigen::Index m = static_cast<Eigen::Index>(xs.size());
  // Node u = 0 is the current position for every candidate; it is cached.
  Eigen::MatrixX2d q(m * (n - 1), 2);
  for (Eigen::Index c = 0; c < m; ++c) {
    const Vec2& x = xs[static_cast<std::size_t>(c)];
    check_step(ctx, x);
    const CandidatePath path{ctx.current_pos(), x};
    for (int j = 1; j < n; ++j) {
      q.row(c * (n - 1) + (j - 1)) = path.at(static_cast<double>(j) / (n - 1)).transpose();
    }
  }
  const Eigen::VectorXd sd = m > 0 ? ctx.augmented().stddev(q) : Eigen::VectorXd();
  const double a = ctx.alpha();
  std::vector<double> out(xs.size());
  for (Eigen::Index c = 0; c < m; ++c) {
    const Vec2& x = xs[static_cast<std::size_t>(c)];
    double sigma = quadrature_weight(0, n) * ctx.start_sigma();
    for (int j = 1; j < n; ++j) {
      sigma += quadrature_weight(j, n) * sd[c * (n - 1) + (j - 1)];
    }
    if (ctx.params().arc_length) {
      sigma *= (x - ctx.current_pos()).norm();
    }
    const double omega = exploit_term(x, ctx.x_star());
    const double gamma = effective_penalty(ctx, x);
    out[static_cast<std::size_t>(c)] = (a * omega + (1.0 - a) * ctx.params().beta * sigma) * gamma;
  }
  return out;
}

}  // namespace bswarm
