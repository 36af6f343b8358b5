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

#include "bswarm/kernels.hpp"

#include <cmath>

#include "bswarm/field.hpp"

namespace bswarm::kernels {

Eigen::MatrixXd covariance(const Eigen::MatrixX2d& x, double length_scale, double signal_var) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd k(n, n);
  const double inv = 1.0 / (2.0 * length_scale * length_scale);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double dx = x(i, 0) - x(j, 0);
      const double dy = x(i, 1) - x(j, 1);
      const double v = signal_var * std::exp(-(dx * dx + dy * dy) * inv);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd covariance_serial(const Eigen::MatrixX2d& x, double length_scale,
                                  double signal_var) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd k(n, n);
  const double inv = 1.0 / (2.0 * length_scale * length_scale);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double dx = x(i, 0) - x(j, 0);
      const double dy = x(i, 1) - x(j, 1);
      const double v = signal_var * std::exp(-(dx * dx + dy * dy) * inv);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd cross_covariance(const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b,
                                 double length_scale, double signal_var) {
  Eigen::MatrixXd k(a.rows(), b.rows());
  const double inv = 1.0 / (2.0 * length_scale * length_scale);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double dx = a(i, 0) - b(j, 0);
      const double dy = a(i, 1) - b(j, 1);
      k(i, j) = signal_var * std::exp(-(dx * dx + dy * dy) * inv);
    }
  }
  return k;
}

Eigen::MatrixXd cross_covariance_serial(const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b,
                                        double length_scale, double signal_var) {
  Eigen::MatrixXd k(a.rows(), b.rows());
  const double inv = 1.0 / (2.0 * length_scale * length_scale);
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double dx = a(i, 0) - b(j, 0);
      const double dy = a(i, 1) - b(j, 1);
      k(i, j) = signal_var * std::exp(-(dx * dx + dy * dy) * inv);
    }
  }
  return k;
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixX2d& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double dx = x(i, 0) - x(j, 0);
      const double dy = x(i, 1) - x(j, 1);
      d(i, j) = dx * dx + dy * dy;
      d(j, i) = d(i, j);
    }
  }
  return d;
}

Eigen::MatrixXd squared_distances_serial(const Eigen::MatrixX2d& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double dx = x(i, 0) - x(j, 0);
      const double dy = x(i, 1) - x(j, 1);
      d(i, j) = dx * dx + dy * dy;
      d(j, i) = d(i, j);
    }
  }
  return d;
}

std::vector<double> field_values(const GaussianMixtureField& field, std::span<const Vec2> pts) {
  std::vector<double> out(pts.size());
  const auto n = static_cast<std::ptrdiff_t>(pts.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = field.evaluate_unchecked(pts[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<double> field_values_serial(const GaussianMixtureField& field,
                                        std::span<const Vec2> pts) {
  std::vector<double> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out[i] = field.evaluate_unchecked(pts[i]);
  }
  return out;
}

double compensated_sum(std::span<const double> v) {
  double sum = 0.0;
  double c = 0.0;
  for (const double x : v) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

Eigen::MatrixX2d to_matrix(std::span<const Vec2> pts) {
  Eigen::MatrixX2d m(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  }
  return m;
}

}  // namespace bswarm::kernels
