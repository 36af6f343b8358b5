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

#include "bswarm/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "bswarm/kernels.hpp"
#include "bswarm/optimize.hpp"

namespace bswarm::gp {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double signal_var(const GpHyperParams& h) { return h.signal_std * h.signal_std; }

Eigen::MatrixXd noisy_covariance(const Eigen::MatrixX2d& x, const GpHyperParams& h) {
  Eigen::MatrixXd k = kernels::covariance(x, h.length_scale, signal_var(h));
  k.diagonal().array() += h.noise_std * h.noise_std;
  return k;
}

Eigen::MatrixX2d row(const Vec2& p) {
  Eigen::MatrixX2d m(1, 2);
  m.row(0) = p.transpose();
  return m;
}

}  // namespace

void GpHyperParams::validate() const {
  if (!std::isfinite(length_scale) || !std::isfinite(signal_std) || !std::isfinite(noise_std) ||
      !(length_scale > 0.0) || !(signal_std > 0.0) || !(noise_std >= 0.0)) {
    throw std::invalid_argument("invalid GP hyperparameters");
  }
}

Eigen::Vector3d GpHyperParams::to_log() const {
  return {std::log(length_scale), std::log(signal_std), std::log(noise_std)};
}

GpHyperParams GpHyperParams::from_log(const Eigen::Vector3d& p) {
  return {std::exp(p[0]), std::exp(p[1]), std::exp(p[2])};
}

Factorization factorize(const Eigen::MatrixXd& lambda, double signal_var) {
  Factorization f;
  if (lambda.rows() == 0) {
    f.lower.resize(0, 0);
    return f;
  }
  double jitter = 0.0;
  for (int attempt = 0; attempt <= 7; ++attempt) {
    if (attempt > 0) {
      jitter = signal_var * std::pow(10.0, -11 + attempt);
    }
    Eigen::LLT<Eigen::MatrixXd> llt;
    if (jitter == 0.0) {
      llt.compute(lambda);
    } else {
      Eigen::MatrixXd m = lambda;
      m.diagonal().array() += jitter;
      llt.compute(m);
    }
    if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().allFinite() &&
        (llt.matrixLLT().diagonal().array() > 0.0).all()) {
      f.lower = llt.matrixL();
      f.jitter = jitter;
      return f;
    }
  }
  throw FitError("covariance is not positive definite after jitter escalation");
}

GpModel::GpModel(GpHyperParams hyper) : hyper_(hyper), inputs_(0, 2), targets_(0), weights_(0) {
  hyper_.validate();
  factor_.lower.resize(0, 0);
}

GpModel::GpModel(Eigen::MatrixX2d inputs, Eigen::VectorXd targets, GpHyperParams hyper)
    : hyper_(hyper), inputs_(std::move(inputs)), targets_(std::move(targets)) {
  hyper_.validate();
  if (inputs_.rows() != targets_.size()) {
    throw std::invalid_argument("GP inputs and targets differ in length");
  }
  if (!inputs_.allFinite() || !targets_.allFinite()) {
    throw std::invalid_argument("GP training data must be finite");
  }
  factor_ = factorize(noisy_covariance(inputs_, hyper_), signal_var(hyper_));
  const auto l = std::as_const(factor_.lower).triangularView<Eigen::Lower>();
  const Eigen::VectorXd v = l.solve(targets_);
  weights_ = l.transpose().solve(v);
  const Eigen::Index n = inputs_.rows();
  log_likelihood_ = -0.5 * v.squaredNorm() - 0.5 * static_cast<double>(n) * kLog2Pi -
                    factor_.lower.diagonal().array().log().sum();
}

GpModel::GpModel(const Dataset& data, GpHyperParams hyper)
    : GpModel(data.locations(), data.values(), hyper) {}

double GpModel::mean(const Vec2& x) const {
  if (empty()) {
    return 0.0;
  }
  return mean(row(x))[0];
}

double GpModel::variance(const Vec2& x) const {
  const double s = stddev(x);
  return s * s;
}

double GpModel::stddev(const Vec2& x) const { return stddev(row(x))[0]; }

Eigen::VectorXd GpModel::mean(const Eigen::MatrixX2d& queries) const {
  if (empty()) {
    return Eigen::VectorXd::Zero(queries.rows());
  }
  const Eigen::MatrixXd k =
      kernels::cross_covariance(inputs_, queries, hyper_.length_scale, signal_var(hyper_));
  return k.transpose() * weights_;
}

Eigen::VectorXd GpModel::stddev(const Eigen::MatrixX2d& queries) const {
  const double prior = signal_var(hyper_);
  if (empty()) {
    return Eigen::VectorXd::Constant(queries.rows(), hyper_.signal_std);
  }
  Eigen::MatrixXd k = kernels::cross_covariance(inputs_, queries, hyper_.length_scale, prior);
  factor_.lower.triangularView<Eigen::Lower>().solveInPlace(k);
  Eigen::VectorXd out(queries.rows());
  for (Eigen::Index j = 0; j < queries.rows(); ++j) {
    out[j] = std::sqrt(std::max(0.0, prior - k.col(j).squaredNorm()));
  }
  return out;
}

AugmentedPosterior::AugmentedPosterior(const GpModel& model, std::span<const Vec2> virtual_points)
    : model_(&model), virtual_(kernels::to_matrix(virtual_points)) {
  const auto& h = model.hyper();
  const double sv = signal_var(h);
  const Eigen::Index nv = virtual_.rows();
  if (nv == 0) {
    return;
  }
  if (!virtual_.allFinite()) {
    throw std::invalid_argument("virtual points must be finite");
  }
  Eigen::MatrixXd schur = kernels::covariance(virtual_, h.length_scale, sv);
  schur.diagonal().array() += h.noise_std * h.noise_std + model.jitter();
  if (!model.empty()) {
    cross_ = kernels::cross_covariance(model.inputs(), virtual_, h.length_scale, sv);
    model.lower().triangularView<Eigen::Lower>().solveInPlace(cross_);
    schur.noalias() -= cross_.transpose() * cross_;
  }
  lower22_ = factorize(schur, sv).lower;
}

double AugmentedPosterior::stddev(const Vec2& x) const { return stddev(row(x))[0]; }

Eigen::VectorXd AugmentedPosterior::stddev(const Eigen::MatrixX2d& queries) const {
  const auto& h = model_->hyper();
  const double sv = signal_var(h);
  const Eigen::Index nq = queries.rows();
  Eigen::VectorXd explained = Eigen::VectorXd::Zero(nq);
  Eigen::MatrixXd v1;
  if (!model_->empty()) {
    v1 = kernels::cross_covariance(model_->inputs(), queries, h.length_scale, sv);
    model_->lower().triangularView<Eigen::Lower>().solveInPlace(v1);
    explained += v1.colwise().squaredNorm().transpose();
  }
  if (virtual_.rows() > 0) {
    Eigen::MatrixXd v2 = kernels::cross_covariance(virtual_, queries, h.length_scale, sv);
    if (!model_->empty()) {
      v2.noalias() -= cross_.transpose() * v1;
    }
    lower22_.triangularView<Eigen::Lower>().solveInPlace(v2);
    explained += v2.colwise().squaredNorm().transpose();
  }
  Eigen::VectorXd out(nq);
  for (Eigen::Index j = 0; j < nq; ++j) {
    out[j] = std::sqrt(std::max(0.0, sv - explained[j]));
  }
  return out;
}

double log_likelihood(const Eigen::MatrixX2d& x, const Eigen::VectorXd& y,
                      const GpHyperParams& hyper, Eigen::Vector3d* grad_log) {
  hyper.validate();
  const Eigen::Index n = x.rows();
  if (n == 0) {
    if (grad_log) grad_log->setZero();
    return 0.0;
  }
  const double sv = signal_var(hyper);
  const Eigen::MatrixXd k = kernels::covariance(x, hyper.length_scale, sv);
  Eigen::MatrixXd lambda = k;
  lambda.diagonal().array() += hyper.noise_std * hyper.noise_std;
  const Factorization f = factorize(lambda, sv);
  const auto l = f.lower.triangularView<Eigen::Lower>();
  const Eigen::VectorXd v = l.solve(y);
  const double ll = -0.5 * v.squaredNorm() - 0.5 * static_cast<double>(n) * kLog2Pi -
                    f.lower.diagonal().array().log().sum();
  if (grad_log) {
    const Eigen::VectorXd alpha = l.transpose().solve(v);
    Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
    l.solveInPlace(inv);
    l.transpose().solveInPlace(inv);
    // W = alpha alpha^T - Lambda^{-1}; dLL/dtheta = 0.5 tr(W dLambda/dtheta).
    const Eigen::MatrixXd w = alpha * alpha.transpose() - inv;
    const Eigen::MatrixXd d2 = kernels::squared_distances(x);
    const double l2 = hyper.length_scale * hyper.length_scale;
    (*grad_log)[0] = 0.5 * (w.array() * k.array() * d2.array()).sum() / l2;
    (*grad_log)[1] = (w.array() * k.array()).sum();
    (*grad_log)[2] = hyper.noise_std * hyper.noise_std * w.trace();
  }
  return ll;
}

FitReport fit_with_report(const Dataset& data, const GpHyperParams& init,
                          const GpFitOptions& options) {
  init.validate();
  if (data.empty()) {
    return {GpModel(init), 0.0, 0, 0};
  }
  const Eigen::MatrixX2d x = data.locations();
  const Eigen::VectorXd y = data.values();

  opt::Bounds bounds;
  bounds.lower = Eigen::Vector3d(std::log(options.min_length_scale),
                                 std::log(options.min_signal_std),
                                 std::log(options.min_noise_std));
  bounds.upper = Eigen::Vector3d(std::log(options.max_length_scale),
                                 std::log(options.max_signal_std),
                                 std::log(options.max_noise_std));

  auto objective = [&](const Eigen::VectorXd& p, Eigen::VectorXd* grad) {
    try {
      Eigen::Vector3d g;
      const double ll = log_likelihood(x, y, GpHyperParams::from_log(p), grad ? &g : nullptr);
      if (grad) *grad = g;
      return ll;
    } catch (const FitError&) {
      if (grad) grad->setZero(3);
      return -std::numeric_limits<double>::infinity();
    }
  };

  auto safe_log = [](const GpHyperParams& h, double noise_floor) {
    GpHyperParams c = h;
    c.noise_std = std::max(c.noise_std, noise_floor);
    return c.to_log();
  };

  std::vector<Eigen::Vector3d> starts;
  const Eigen::Vector3d warm = bounds.clamp(safe_log(init, options.min_noise_std));
  starts.push_back(warm);
  if (options.multi_start) {
    const Eigen::Vector2d extent = x.colwise().maxCoeff() - x.colwise().minCoeff();
    const double diag = extent.norm();
    const double rms = std::sqrt(y.squaredNorm() / static_cast<double>(y.size()));
    GpHyperParams heuristic;
    heuristic.length_scale = diag > 0.0 ? 0.25 * diag : options.default_start.length_scale;
    heuristic.signal_std = rms > 0.0 ? rms : options.default_start.signal_std;
    heuristic.noise_std = 0.05 * heuristic.signal_std;
    starts.push_back(bounds.clamp(safe_log(heuristic, options.min_noise_std)));
    starts.push_back(bounds.clamp(safe_log(options.default_start, options.min_noise_std)));
  }

  opt::Options oo;
  oo.max_iterations = options.max_iterations;
  oo.value_tolerance = options.rel_tolerance;
  oo.step_tolerance = 1e-8;
  oo.initial_step = 1.0;

  // The caller's init is evaluated as given, so the result never scores below it.
  double init_ll = -std::numeric_limits<double>::infinity();
  try {
    init_ll = log_likelihood(x, y, init);
  } catch (const FitError&) {
  }

  Eigen::Vector3d best = warm;
  double best_ll = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  for (const auto& s : starts) {
    const auto r = opt::maximize(objective, s, bounds, oo);
    iterations += r.iterations;
    if (r.value > best_ll) {
      best_ll = r.value;
      best = r.x;
    }
  }
  GpHyperParams chosen = GpHyperParams::from_log(best);
  if (!(best_ll >= init_ll) && std::isfinite(init_ll)) {
    chosen = init;
  }
  if (!std::isfinite(best_ll) && !std::isfinite(init_ll)) {
    throw FitError("log-likelihood is not finite at any start");
  }
  return {GpModel(x, y, chosen), init_ll, static_cast<int>(starts.size()), iterations};
}

GpModel fit(const Dataset& data, const GpHyperParams& init, const GpFitOptions& options) {
  return fit_with_report(data, init, options).model;
}

double posterior_mean(const GpModel& model, const Vec2& x) { return model.mean(x); }

double posterior_std(const GpModel& model, const Vec2& x) { return model.stddev(x); }

double posterior_std_augmented(const GpModel& model, std::span<const Vec2> virtual_points,
                               const Vec2& x) {
  return AugmentedPosterior(model, virtual_points).stddev(x);
}

}  // namespace bswarm::gp
