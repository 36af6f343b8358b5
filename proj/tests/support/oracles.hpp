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

#ifndef BSWARM_TESTS_ORACLES_HPP
#define BSWARM_TESTS_ORACLES_HPP

// Reference implementations used only by tests. They share no code with the
// library: kernels are written out by hand and linear algebra goes through an
// explicit dense inverse.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bswarm/geometry.hpp"

namespace oracle {

using bswarm::Vec2;

struct Point {
  double x;
  double y;
};

inline double kernel(const Point& a, const Point& b, double ell, double sf) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return sf * sf * std::exp(-0.5 * (dx * dx + dy * dy) / (ell * ell));
}

/// GP posterior by explicit inversion of K + sn^2 I.
class NaiveGp {
 public:
  NaiveGp(std::vector<Point> x, std::vector<double> y, double ell, double sf, double sn)
      : x_(std::move(x)), y_(std::move(y)), ell_(ell), sf_(sf), sn_(sn) {
    const auto n = static_cast<Eigen::Index>(x_.size());
    Eigen::MatrixXd lambda(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        lambda(i, j) = kernel(x_[static_cast<std::size_t>(i)], x_[static_cast<std::size_t>(j)], ell_, sf_);
      }
      lambda(i, i) += sn_ * sn_;
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(lambda);
    inv_ = lu.inverse();
    det_ = lu.determinant();
    yv_ = Eigen::Map<const Eigen::VectorXd>(y_.data(), n);
  }

  [[nodiscard]] Eigen::VectorXd kvec(const Point& q) const {
    Eigen::VectorXd k(static_cast<Eigen::Index>(x_.size()));
    for (std::size_t i = 0; i < x_.size(); ++i) k[static_cast<Eigen::Index>(i)] = kernel(x_[i], q, ell_, sf_);
    return k;
  }

  [[nodiscard]] double mean(const Point& q) const {
    if (x_.empty()) return 0.0;
    return kvec(q).dot(inv_ * yv_);
  }

  [[nodiscard]] double variance(const Point& q) const {
    if (x_.empty()) return sf_ * sf_;
    const Eigen::VectorXd k = kvec(q);
    return sf_ * sf_ - k.dot(inv_ * k);
  }

  [[nodiscard]] double stddev(const Point& q) const { return std::sqrt(std::max(0.0, variance(q))); }

  [[nodiscard]] double log_likelihood() const {
    const double n = static_cast<double>(x_.size());
    return -0.5 * yv_.dot(inv_ * yv_) - 0.5 * std::log(det_) -
           0.5 * n * std::log(2.0 * std::numbers::pi);
  }

 private:
  std::vector<Point> x_;
  std::vector<double> y_;
  double ell_;
  double sf_;
  double sn_;
  Eigen::MatrixXd inv_;
  double det_ = 1.0;
  Eigen::VectorXd yv_;
};

/// Posterior std with the design extended by \p virt (values irrelevant).
inline double augmented_std(std::vector<Point> x, const std::vector<Point>& virt, const Point& q,
                            double ell, double sf, double sn) {
  x.insert(x.end(), virt.begin(), virt.end());
  return NaiveGp(x, std::vector<double>(x.size(), 0.0), ell, sf, sn).stddev(q);
}

/// Trapezoid rule with \p nodes equally spaced nodes on [0, 1].
template <class F>
double trapezoid(F&& f, int nodes) {
  const double h = 1.0 / (nodes - 1);
  double s = 0.5 * (f(0.0) + f(1.0));
  for (int i = 1; i < nodes - 1; ++i) s += f(i * h);
  return s * h;
}

inline double penalty(double dist, double mu, double sigma, double m, double l) {
  return 0.5 * std::erfc(-(l * dist - m + mu) / (std::sqrt(2.0) * sigma));
}

inline Point pt(const Vec2& v) { return {v.x(), v.y()}; }

}  // namespace oracle

#endif  // BSWARM_TESTS_ORACLES_HPP
