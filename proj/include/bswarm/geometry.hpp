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

#ifndef BSWARM_GEOMETRY_HPP
#define BSWARM_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace bswarm {

/// Planar position or displacement, metres.
using Vec2 = Eigen::Vector2d;

/// Axis-aligned rectangular search area.
struct Arena {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};

  [[nodiscard]] double width() const { return hi.x() - lo.x(); }
  [[nodiscard]] double height() const { return hi.y() - lo.y(); }
  [[nodiscard]] double diagonal() const { return (hi - lo).norm(); }
  [[nodiscard]] bool degenerate() const { return !(width() > 0.0 && height() > 0.0); }

  [[nodiscard]] bool contains(const Vec2& p, double tol = 1e-12) const {
    return p.x() >= lo.x() - tol && p.x() <= hi.x() + tol &&
           p.y() >= lo.y() - tol && p.y() <= hi.y() + tol;
  }

  [[nodiscard]] Vec2 clamp(const Vec2& p) const {
    return {std::clamp(p.x(), lo.x(), hi.x()), std::clamp(p.y(), lo.y(), hi.y())};
  }

  /// Uniform n-by-n lattice including the boundary, row-major in y then x.
  [[nodiscard]] std::vector<Vec2> grid(int n) const {
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    const double dx = n > 1 ? width() / (n - 1) : 0.0;
    const double dy = n > 1 ? height() / (n - 1) : 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        pts.emplace_back(lo.x() + i * dx, lo.y() + j * dy);
      }
    }
    return pts;
  }
};

/// Projection of \p p onto the closed disk of radius \p radius about \p center.
inline Vec2 project_to_disk(const Vec2& p, const Vec2& center, double radius) {
  const Vec2 d = p - center;
  const double n = d.norm();
  if (n <= radius) {
    return p;
  }
  return center + d * (radius / n);
}

}  // namespace bswarm

#endif  // BSWARM_GEOMETRY_HPP
