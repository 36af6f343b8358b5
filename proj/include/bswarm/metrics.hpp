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

#ifndef BSWARM_METRICS_HPP
#define BSWARM_METRICS_HPP

#include <functional>

#include "bswarm/field.hpp"
#include "bswarm/geometry.hpp"
#include "bswarm/gp.hpp"

namespace bswarm {

/// (t_achieved - t_idealized) / t_idealized. Throws std::domain_error when
/// t_idealized <= 0.
double relative_completion_time(double t_achieved, double t_idealized);

using Predictor = std::function<double(const Vec2&)>;

/// Root-mean-square difference between \p predict and the noiseless field on
/// an n-by-n boundary-inclusive grid over \p arena.
double mapping_rmse(const Predictor& predict, const GaussianMixtureField& field, const Arena& arena,
                    int n = 100);
double mapping_rmse(const gp::GpModel& model, const GaussianMixtureField& field, const Arena& arena,
                    int n = 100);

struct MetricReport {
  double tau = 0.0;
  double rmse = 0.0;
  double t_achieved = 0.0;
  double t_idealized = 0.0;
  int grid_n = 100;
  Arena grid_arena;
};

}  // namespace bswarm

#endif  // BSWARM_METRICS_HPP
