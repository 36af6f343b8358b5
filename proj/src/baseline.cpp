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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bswarm/metrics.hpp"
#include "bswarm/swarm.hpp"

namespace bswarm {
namespace {

using json = nlohmann::json;

std::vector<Arena> vertical_strips(const Arena& a, int n) {
  std::vector<Arena> out;
  const double w = a.width() / n;
  for (int i = 0; i < n; ++i) {
    const double x0 = a.lo.x() + i * w;
    const double x1 = i + 1 == n ? a.hi.x() : a.lo.x() + (i + 1) * w;
    out.push_back(Arena{Vec2(x0, a.lo.y()), Vec2(x1, a.hi.y())});
  }
  return out;
}

double dist_to_box(const Arena& box, const Vec2& p) { return (box.clamp(p) - p).norm(); }

/// Lanes parallel to y, 2 eps apart, entered from the corner nearest \p from.
std::vector<Vec2> lawnmower(const Arena& region, const Vec2& from, double eps) {
  const int lanes = std::max(1, static_cast<int>(std::ceil(region.width() / (2.0 * eps) - 1e-9)));
  std::vector<double> xs;
  for (int i = 0; i < lanes; ++i) {
    xs.push_back(std::max(region.lo.x(), std::min(region.lo.x() + eps * (2 * i + 1), region.hi.x() - eps)));
  }
  const bool right_first = std::abs(from.x() - region.hi.x()) < std::abs(from.x() - region.lo.x());
  if (right_first) std::reverse(xs.begin(), xs.end());
  bool up = std::abs(from.y() - region.lo.y()) <= std::abs(from.y() - region.hi.y());
  std::vector<Vec2> path;
  for (const double x : xs) {
    const double ya = up ? region.lo.y() : region.hi.y();
    const double yb = up ? region.hi.y() : region.lo.y();
    path.emplace_back(x, ya);
    path.emplace_back(x, yb);
    up = !up;
  }
  return path;
}

/// Arc length at which the polyline first comes within eps of \p target.
double first_entry(const std::vector<Vec2>& path, const Vec2& target, double eps) {
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec2 a = path[i];
    const Vec2 d = path[i + 1] - a;
    const double len = d.norm();
    const Vec2 w = a - target;
    if (w.norm() <= eps) return cum;
    if (len > 0.0) {
      const Vec2 u = d / len;
      const double b = w.dot(u);
      const double disc = b * b - (w.squaredNorm() - eps * eps);
      if (disc >= 0.0) {
        const double s = -b - std::sqrt(disc);
        if (s >= 0.0 && s <= len) return cum + s;
      }
    }
    cum += len;
  }
  if (!path.empty() && (path.back() - target).norm() <= eps) return cum;
  return std::numeric_limits<double>::infinity();
}

double path_length(const std::vector<Vec2>& path) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) s += (path[i + 1] - path[i]).norm();
  return s;
}

}  // namespace

std::vector<SweepPlan> plan_exhaustive_sweep(const Arena& arena, const Vec2& start, double epsilon,
                                             int m) {
  if (m < 1) throw std::invalid_argument("baseline needs at least one robot");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  std::vector<Arena> regions;
  if (m < 4) {
    regions = vertical_strips(arena, m);
  } else {
    const Vec2 mid = 0.5 * (arena.lo + arena.hi);
    std::vector<Arena> quads = {
        Arena{arena.lo, mid},
        Arena{Vec2(mid.x(), arena.lo.y()), Vec2(arena.hi.x(), mid.y())},
        Arena{Vec2(arena.lo.x(), mid.y()), Vec2(mid.x(), arena.hi.y())},
        Arena{mid, arena.hi},
    };
    std::stable_sort(quads.begin(), quads.end(), [&](const Arena& a, const Arena& b) {
      return dist_to_box(a, start) < dist_to_box(b, start);
    });
    for (int q = 0; q < 4; ++q) {
      const int count = m / 4 + (q < m % 4 ? 1 : 0);
      for (const auto& s : vertical_strips(quads[static_cast<std::size_t>(q)], count)) {
        regions.push_back(s);
      }
    }
  }
  std::vector<SweepPlan> plans;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    SweepPlan p;
    p.robot = static_cast<int>(i) + 1;
    p.region = regions[i];
    p.path.push_back(start);
    for (const auto& v : lawnmower(regions[i], start, epsilon)) p.path.push_back(v);
    plans.push_back(std::move(p));
  }
  return plans;
}

SimResult run_exhaustive_baseline(const GaussianMixtureField& field, const CaseConfig& config,
                                  int m) {
  validate_case(CasePreset{field, config});
  const auto plans = plan_exhaustive_sweep(field.arena(), config.start, config.epsilon, m);

  SimResult res;
  res.robots = m;
  res.check_interval = 0.0;
  res.mapping_rmse = std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  double longest = 0.0;
  for (const auto& p : plans) {
    const double s = first_entry(p.path, field.source(), config.epsilon);
    const double t = std::ceil(s / config.speed * 1000.0 - 1e-6) / 1000.0;
    if (t < best) {
      best = t;
      res.finder = p.robot;
    }
    longest = std::max(longest, path_length(p.path) / config.speed);
    res.events.push_back(json{{"event", "sweep"},
                              {"robot", p.robot},
                              {"region", {p.region.lo.x(), p.region.lo.y(), p.region.hi.x(),
                                          p.region.hi.y()}},
                              {"vertices", p.path.size()},
                              {"length", path_length(p.path)}}
                             .dump());
  }
  if (std::isfinite(best)) {
    res.termination = Termination::source_found;
    res.t_achieved = best;
  } else {
    res.termination = Termination::timeout;
    res.t_achieved = longest;
    res.finder = 0;
  }
  res.tau = relative_completion_time(res.t_achieved, config.t_idealized);

  for (const auto& p : plans) {
    double cum = 0.0;
    for (std::size_t i = 0; i < p.path.size(); ++i) {
      if (i > 0) cum += (p.path[i] - p.path[i - 1]).norm();
      const double t = cum / config.speed;
      if (t > res.t_achieved) {
        const Vec2 d = p.path[i] - p.path[i - 1];
        const double back = (t - res.t_achieved) * config.speed;
        res.trajectory.push_back(
            {res.t_achieved, p.robot, p.path[i] - d.normalized() * back,
             std::numeric_limits<double>::quiet_NaN()});
        break;
      }
      res.trajectory.push_back({t, p.robot, p.path[i], std::numeric_limits<double>::quiet_NaN()});
    }
  }
  res.events.push_back(json{{"event", "terminate"},
                            {"t", res.t_achieved},
                            {"cause", to_string(res.termination)},
                            {"robot", res.finder}}
                           .dump());
  return res;
}

}  // namespace bswarm
