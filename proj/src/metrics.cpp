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

#include "bswarm/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bswarm/kernels.hpp"

namespace bswarm {
namespace {

double rmse_from_errors(std::vector<double>& sq) {
  if (sq.empty()) {
    return 0.0;
  }
  return std::sqrt(kernels::compensated_sum(sq) / static_cast<double>(sq.size()));
}

}  // namespace

double relative_completion_time(double t_achieved, double t_idealized) {
  if (!(t_idealized > 0.0)) {
    throw std::domain_error("t_idealized must be positive");
  }
  return (t_achieved - t_idealized) / t_idealized;
}

double mapping_rmse(const Predictor& predict, const GaussianMixtureField& field, const Arena& arena,
                    int n) {
  if (arena.degenerate()) {
    throw std::domain_error("mapping_rmse needs a non-degenerate arena");
  }
  const auto pts = arena.grid(n);
  const auto truth = kernels::field_values(field, pts);
  std::vector<double> sq(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double e = predict(pts[i]) - truth[i];
    sq[i] = e * e;
  }
  return rmse_from_errors(sq);
}

double mapping_rmse(const gp::GpModel& model, const GaussianMixtureField& field, const Arena& arena,
                    int n) {
  if (arena.degenerate()) {
    throw std::domain_error("mapping_rmse needs a non-degenerate arena");
  }
  const auto pts = arena.grid(n);
  const auto truth = kernels::field_values(field, pts);
  const Eigen::VectorXd mu = model.mean(kernels::to_matrix(pts));
  std::vector<double> sq(pts.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pts.size()); ++i) {
    const double e = mu[i] - truth[static_cast<std::size_t>(i)];
    sq[static_cast<std::size_t>(i)] = e * e;
  }
  return rmse_from_errors(sq);
}

}  // namespace bswarm
