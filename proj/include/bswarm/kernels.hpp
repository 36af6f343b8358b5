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

#ifndef BSWARM_KERNELS_HPP
#define BSWARM_KERNELS_HPP

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "bswarm/geometry.hpp"

namespace bswarm {
class GaussianMixtureField;
}

/// Data-parallel inner loops. Each OpenMP kernel has a plain serial twin
/// computing the same elements in the same way; results are bit-identical
/// for any thread count because no kernel reduces across elements.
namespace bswarm::kernels {

/// Squared-exponential covariance sigma_f^2 exp(-|a-b|^2 / (2 l^2)).
inline double se_kernel(const Vec2& a, const Vec2& b, double length_scale, double signal_var) {
  return signal_var * std::exp(-(a - b).squaredNorm() / (2.0 * length_scale * length_scale));
}

/// K(X, X); exactly symmetric.
Eigen::MatrixXd covariance(const Eigen::MatrixX2d& x, double length_scale, double signal_var);
Eigen::MatrixXd covariance_serial(const Eigen::MatrixX2d& x, double length_scale, double signal_var);

/// K(A, B) with one row per point of A.
Eigen::MatrixXd cross_covariance(const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b,
                                 double length_scale, double signal_var);
Eigen::MatrixXd cross_covariance_serial(const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b,
                                        double length_scale, double signal_var);

/// Pairwise squared distances |x_i - x_j|^2.
Eigen::MatrixXd squared_distances(const Eigen::MatrixX2d& x);
Eigen::MatrixXd squared_distances_serial(const Eigen::MatrixX2d& x);

/// Noiseless field values at each point.
std::vector<double> field_values(const GaussianMixtureField& field, std::span<const Vec2> pts);
std::vector<double> field_values_serial(const GaussianMixtureField& field,
                                        std::span<const Vec2> pts);

/// Compensated (Neumaier) sum in index order.
double compensated_sum(std::span<const double> v);

Eigen::MatrixX2d to_matrix(std::span<const Vec2> pts);

}  // namespace bswarm::kernels

#endif  // BSWARM_KERNELS_HPP
