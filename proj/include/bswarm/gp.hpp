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

#ifndef BSWARM_GP_HPP
#define BSWARM_GP_HPP

#include <span>
#include <stdexcept>

#include <Eigen/Core>

#include "bswarm/dataset.hpp"
#include "bswarm/geometry.hpp"

namespace bswarm::gp {

/// Squared-exponential kernel parameters and homoscedastic noise level.
struct GpHyperParams {
  double length_scale = 1.0;  ///< m
  double signal_std = 1.0;    ///< signal units
  double noise_std = 0.1;     ///< signal units

  /// Throws std::invalid_argument unless all finite, length and signal > 0, noise >= 0.
  void validate() const;

  [[nodiscard]] Eigen::Vector3d to_log() const;
  static GpHyperParams from_log(const Eigen::Vector3d& p);
};

/// Covariance could not be factorized even after jitter escalation.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lower Cholesky factor of a covariance, with the diagonal jitter that was
/// needed to obtain it.
struct Factorization {
  Eigen::MatrixXd lower;
  double jitter = 0.0;
};

/// Factorizes \p lambda, retrying with diagonal jitter 1e-10, 1e-9, ..., 1e-4
/// times \p signal_var. Throws FitError when every attempt fails.
Factorization factorize(const Eigen::MatrixXd& lambda, double signal_var);

/// Zero-mean GP conditioned on a training set. Immutable; concurrent queries are safe.
class GpModel {
 public:
  /// Prior-only model.
  explicit GpModel(GpHyperParams hyper = {});
  GpModel(Eigen::MatrixX2d inputs, Eigen::VectorXd targets, GpHyperParams hyper);
  GpModel(const Dataset& data, GpHyperParams hyper);

  [[nodiscard]] const GpHyperParams& hyper() const { return hyper_; }
  [[nodiscard]] Eigen::Index size() const { return inputs_.rows(); }
  [[nodiscard]] bool empty() const { return size() == 0; }
  [[nodiscard]] const Eigen::MatrixX2d& inputs() const { return inputs_; }
  [[nodiscard]] const Eigen::VectorXd& targets() const { return targets_; }
  /// Lower Cholesky factor of K + (noise^2 + jitter) I.
  [[nodiscard]] const Eigen::MatrixXd& lower() const { return factor_.lower; }
  [[nodiscard]] double jitter() const { return factor_.jitter; }
  /// (K + noise^2 I)^{-1} y.
  [[nodiscard]] const Eigen::VectorXd& weights() const { return weights_; }
  [[nodiscard]] double log_likelihood() const { return log_likelihood_; }

  [[nodiscard]] double mean(const Vec2& x) const;
  [[nodiscard]] double variance(const Vec2& x) const;
  [[nodiscard]] double stddev(const Vec2& x) const;
  [[nodiscard]] Eigen::VectorXd mean(const Eigen::MatrixX2d& queries) const;
  [[nodiscard]] Eigen::VectorXd stddev(const Eigen::MatrixX2d& queries) const;

 private:
  GpHyperParams hyper_;
  Eigen::MatrixX2d inputs_;
  Eigen::VectorXd targets_;
  Factorization factor_;
  Eigen::VectorXd weights_;
  double log_likelihood_ = 0.0;
};

/// Posterior std conditioned on the training inputs plus extra "virtual"
/// input locations whose values are not yet known. The block factorization is
/// computed once; queries reuse it.
class AugmentedPosterior {
 public:
  AugmentedPosterior(const GpModel& model, std::span<const Vec2> virtual_points);

  [[nodiscard]] double stddev(const Vec2& x) const;
  /// One std per query row.
  [[nodiscard]] Eigen::VectorXd stddev(const Eigen::MatrixX2d& queries) const;
  [[nodiscard]] Eigen::Index virtual_count() const { return virtual_.rows(); }

 private:
  const GpModel* model_;
  Eigen::MatrixX2d virtual_;
  Eigen::MatrixXd cross_;  ///< L11^{-1} K(X, V)
  Eigen::MatrixXd lower22_;
};

struct GpFitOptions {
  double min_length_scale = 1e-2;
  double max_length_scale = 1e2;
  double min_signal_std = 1e-3;
  double max_signal_std = 1e2;
  /// Floor keeping the likelihood well posed.
  double min_noise_std = 1e-8;
  double max_noise_std = 1e1;
  int max_iterations = 100;
  /// Convergence when the relative log-likelihood change drops below this.
  double rel_tolerance = 1e-6;
  /// Besides the warm start, also start from a data-driven guess and from
  /// default_start.
  bool multi_start = true;
  GpHyperParams default_start{1.0, 1.0, 0.1};
};

struct FitReport {
  GpModel model;
  double initial_log_likelihood = 0.0;
  int starts = 0;
  int iterations = 0;
};

/// Log marginal likelihood of y under the zero-mean GP; optionally its
/// gradient with respect to (log l, log sigma_f, log sigma_n).
double log_likelihood(const Eigen::MatrixX2d& x, const Eigen::VectorXd& y,
                      const GpHyperParams& hyper, Eigen::Vector3d* grad_log = nullptr);

/// Maximizes the log marginal likelihood over the hyperparameters. An empty
/// dataset yields the prior model with \p init unchanged.
FitReport fit_with_report(const Dataset& data, const GpHyperParams& init,
                          const GpFitOptions& options = {});
GpModel fit(const Dataset& data, const GpHyperParams& init, const GpFitOptions& options = {});

double posterior_mean(const GpModel& model, const Vec2& x);
double posterior_std(const GpModel& model, const Vec2& x);
double posterior_std_augmented(const GpModel& model, std::span<const Vec2> virtual_points,
                               const Vec2& x);

}  // namespace bswarm::gp

#endif  // BSWARM_GP_HPP
