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

#include "bswarm/swarm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>

#include <time.h>

#include <nlohmann/json.hpp>

#include "bswarm/kernels.hpp"
#include "bswarm/metrics.hpp"
#include "bswarm/random.hpp"

namespace bswarm {
namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class EventType : int { sample = 0, arrival = 1, snapshot = 2 };

struct Event {
  std::int64_t ms = 0;
  EventType type = EventType::sample;
  int robot = 0;
  int index = 0;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    return std::tuple(a.ms, static_cast<int>(a.type), a.robot, a.index) >
           std::tuple(b.ms, static_cast<int>(b.type), b.robot, b.index);
  }
};

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

std::int64_t to_ms(double s) { return std::llround(s * 1000.0); }
double to_s(std::int64_t ms) { return static_cast<double>(ms) / 1000.0; }

json point(const Vec2& p) { return json::array({p.x(), p.y()}); }

GridSnapshot grid_snapshot(const gp::GpModel& model, const Arena& arena, int n, double t) {
  GridSnapshot s;
  s.t = t;
  s.n = n;
  s.arena = arena;
  const auto pts = arena.grid(n);
  const Eigen::MatrixX2d q = kernels::to_matrix(pts);
  const Eigen::VectorXd mu = model.mean(q);
  const Eigen::VectorXd sd = model.stddev(q);
  s.mean = Eigen::Map<const Eigen::MatrixXd>(mu.data(), n, n).transpose();
  s.stddev = Eigen::Map<const Eigen::MatrixXd>(sd.data(), n, n).transpose();
  return s;
}

class Engine {
 public:
  Engine(const GaussianMixtureField& field, const CaseConfig& config, const SwarmConfig& swarm,
         const SimOptions& options)
      : field_(field), config_(config), swarm_(swarm), options_(options) {
    validate_case(CasePreset{field, config});
    swarm_.validate();
    planner_ = options.planner;
    planner_.speed = config.speed;
    planner_.horizon = config.horizon;
    planner_.delta_theta = config.delta_theta;
    planner_.variant = swarm.variant;
    planner_.validate();
    acq_ = options.acquisition;
    acq_.max_signal = config.max_signal;
    acq_.lipschitz = config.lipschitz;
    acq_.step_bound = config.step_bound();
    acq_.penalty_enabled = swarm.penalty_enabled;
    acq_.validate();
    options.initial_hyper.validate();

    period_ms_ = to_ms(swarm.sample_period);
    latency_ms_ = to_ms(swarm.planning_latency);
    tmax_ms_ = to_ms(config.t_max);
    if (period_ms_ < 1 || latency_ms_ < 0) {
      throw std::invalid_argument("sample_period must be >= 1 ms and latency >= 0");
    }
  }

  SimResult run() {
    result_.robots = swarm_.robots;
    result_.check_interval = swarm_.sample_period;
    const int m = swarm_.robots;
    robots_.resize(static_cast<std::size_t>(m));
    rngs_.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      auto& r = robots_[static_cast<std::size_t>(i)];
      r.id = i + 1;
      r.pose = config_.start;
      r.leg_start = config_.start;
      r.current_target = config_.start;
      r.hyper = options_.initial_hyper;
      r.next_sample_time = swarm_.sample_period;
      rngs_.emplace_back(derive_seed({swarm_.seed, static_cast<std::uint64_t>(r.id), 0x6f6273ULL}));
      trajectory(r.id, 0, r.pose, kNaN);
    }

    for (auto& r : robots_) {
      if (check(r, 0)) return finish();
    }

    for (auto& r : robots_) {
      const Vec2 wp =
          field_.arena().clamp(config_.start + first_waypoint(r.id, m, planner_));
      r.k = 1;
      PlanRecord rec;
      rec.t = 0.0;
      rec.robot = r.id;
      rec.k = r.k;
      rec.from = r.pose;
      rec.waypoint = wp;
      rec.alpha = kNaN;
      rec.value = kNaN;
      result_.plans.push_back(rec);
      log({{"event", "plan"}, {"t", 0.0}, {"robot", r.id}, {"k", r.k}, {"waypoint", point(wp)},
           {"first", true}});
      depart(r, 0, wp);
      broadcast(r, 0);
      queue_.push({period_ms_, EventType::sample, r.id, 0});
    }
    int idx = 0;
    for (const double t : swarm_.snapshot_times) {
      queue_.push({to_ms(t), EventType::snapshot, 0, idx++});
    }

    while (!queue_.empty()) {
      const Event e = queue_.top();
      queue_.pop();
      if (e.ms > tmax_ms_) break;
      switch (e.type) {
        case EventType::sample:
          if (on_sample(robot(e.robot), e.ms)) return finish();
          break;
        case EventType::arrival:
          if (on_arrival(robot(e.robot), e.ms)) return finish();
          break;
        case EventType::snapshot:
          on_snapshot(e.ms);
          break;
      }
    }
    now_ms_ = tmax_ms_;
    return finish();
  }

 private:
  RobotState& robot(int id) { return robots_[static_cast<std::size_t>(id - 1)]; }

  void log(json j) { result_.events.push_back(j.dump()); }

  void trajectory(int id, std::int64_t ms, const Vec2& p, double value) {
    if (swarm_.record_trajectories) {
      result_.trajectory.push_back({to_s(ms), id, p, value});
    }
  }

  Vec2 position_at(const RobotState& r, std::int64_t ms) const {
    if (ms <= r.leg_departure_ms) return r.leg_start;
    const Vec2 d = r.current_target - r.leg_start;
    const double len = d.norm();
    const double travel = config_.speed * to_s(ms - r.leg_departure_ms);
    if (travel >= len) return r.current_target;
    return r.leg_start + d * (travel / len);
  }

  bool check(const RobotState& r, std::int64_t ms) {
    if ((r.pose - field_.source()).norm() <= config_.epsilon) {
      found_ = true;
      finder_ = r.id;
      now_ms_ = ms;
      return true;
    }
    return false;
  }

  bool on_sample(RobotState& r, std::int64_t ms) {
    r.pose = position_at(r, ms);
    Observation obs;
    obs.location = r.pose;
    obs.value = field_.observe(r.pose, rngs_[static_cast<std::size_t>(r.id - 1)]);
    obs.time = to_s(ms);
    obs.observer = r.id;
    r.local_data.add(obs);
    r.knowledge.observations.add(obs);
    r.leg_observations.add(obs);
    trajectory(r.id, ms, r.pose, obs.value);
    r.next_sample_time = to_s(ms + period_ms_);
    if (check(r, ms)) return true;
    queue_.push({ms + period_ms_, EventType::sample, r.id, 0});
    return false;
  }

  bool on_arrival(RobotState& r, std::int64_t ms) {
    r.pose = r.current_target;
    trajectory(r.id, ms, r.pose, kNaN);
    log({{"event", "arrive"}, {"t", to_s(ms)}, {"robot", r.id}, {"k", r.k},
         {"position", point(r.pose)}});
    if (check(r, ms)) return true;
    r.knowledge = deliver_and_snapshot(r.knowledge, r.inbox);
    r.inbox.clear();
    plan(r, ms);
    return false;
  }

  void plan(RobotState& r, std::int64_t ms) {
    const auto wall0 = std::chrono::steady_clock::now();
    const double cpu0 = thread_cpu_seconds();
    auto model = fit_planning_model(r.knowledge.observations, planner_, r.hyper, options_.fit);
    r.hyper = model->hyper();

    PlanningSnapshot snap;
    snap.gp = model;
    snap.current_pos = r.pose;
    if (const auto best = r.knowledge.observations.best()) snap.best_observed = best->location;
    snap.previous_x_star = r.x_star;
    for (const auto& [id, p] : r.knowledge.peers) snap.peers.push_back(p);
    snap.arena = field_.arena();
    snap.seed = derive_seed({swarm_.seed, static_cast<std::uint64_t>(r.id),
                             static_cast<std::uint64_t>(r.k + 1), 0x706c616eULL});
    const PlanDecision d = plan_next_waypoint(snap, planner_, acq_, to_s(ms), config_.t_max);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    const double cpu = thread_cpu_seconds() - cpu0;

    r.x_star = d.x_star;
    r.k += 1;
    PlanRecord rec;
    rec.t = to_s(ms);
    rec.robot = r.id;
    rec.k = r.k;
    rec.from = r.pose;
    rec.waypoint = d.waypoint;
    rec.alpha = d.alpha;
    rec.value = d.value;
    rec.fallback = d.fallback;
    rec.clipped = d.clipped;
    rec.knowledge_size = r.knowledge.observations.size();
    rec.model_size = static_cast<std::size_t>(model->size());
    rec.wall_seconds = wall;
    rec.cpu_seconds = cpu;
    result_.plans.push_back(rec);
    log({{"event", "plan"},
         {"t", rec.t},
         {"robot", r.id},
         {"k", r.k},
         {"waypoint", point(d.waypoint)},
         {"alpha", d.alpha},
         {"value", d.value},
         {"x_star", point(d.x_star)},
         {"fallback", d.fallback},
         {"clipped", d.clipped},
         {"knowledge", rec.knowledge_size},
         {"model", rec.model_size},
         {"hyper", {r.hyper.length_scale, r.hyper.signal_std, r.hyper.noise_std}}});

    depart(r, ms, d.waypoint);
    broadcast(r, ms);
    if (options_.on_plan) options_.on_plan(r, robots_, to_s(ms));
  }

  void depart(RobotState& r, std::int64_t ms, const Vec2& target) {
    r.leg_start = r.pose;
    r.current_target = target;
    r.leg_departure_ms = ms + latency_ms_;
    const double len = (target - r.pose).norm();
    const auto travel = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::ceil(len / config_.speed * 1000.0 - 1e-6)));
    const std::int64_t next_sample = (r.leg_departure_ms / period_ms_ + 1) * period_ms_;
    r.leg_arrival_ms = std::max(r.leg_departure_ms + travel, next_sample);
    queue_.push({r.leg_arrival_ms, EventType::arrival, r.id, r.k});
  }

  void broadcast(RobotState& r, std::int64_t ms) {
    Broadcast b;
    b.sender = r.id;
    b.sent_at = to_s(ms);
    b.planned_waypoint = r.current_target;
    for (std::int64_t s = (r.leg_departure_ms / period_ms_ + 1) * period_ms_; s <= r.leg_arrival_ms;
         s += period_ms_) {
      b.planned_path_samples.push_back(position_at(r, s));
    }
    b.observations = downsample(r.leg_observations, swarm_.broadcast_cap);
    r.leg_observations = Dataset{};
    r.last_broadcast_time = b.sent_at;
    log({{"event", "broadcast"},
         {"t", b.sent_at},
         {"robot", r.id},
         {"waypoint", point(b.planned_waypoint)},
         {"path_samples", b.planned_path_samples.size()},
         {"observations", b.observations.size()}});
    for (auto& peer : robots_) {
      if (peer.id != r.id) peer.inbox.push_back(b);
    }
  }

  Dataset union_data() const {
    Dataset all;
    for (const auto& r : robots_) all.merge(r.local_data);
    return all;
  }

  void on_snapshot(std::int64_t ms) {
    const Dataset all = downsample(union_data(), planner_.n_max);
    const gp::GpModel model(all, robots_.front().hyper);
    result_.snapshots.push_back(grid_snapshot(model, field_.arena(), swarm_.snapshot_grid, to_s(ms)));
  }

  SimResult finish() {
    result_.termination = found_ ? Termination::source_found : Termination::timeout;
    result_.t_achieved = found_ ? to_s(now_ms_) : config_.t_max;
    result_.finder = finder_;
    result_.tau = relative_completion_time(result_.t_achieved, config_.t_idealized);
    log({{"event", "terminate"},
         {"t", result_.t_achieved},
         {"cause", to_string(result_.termination)},
         {"robot", finder_}});

    const Dataset all = union_data();
    result_.observations = all.size();
    result_.mapping_rmse = kNaN;
    if (!all.empty()) {
      const auto model =
          fit_planning_model(all, planner_, robots_.front().hyper, options_.fit);
      result_.final_hyper = model->hyper();
      result_.mapping_rmse = mapping_rmse(*model, field_, field_.arena(), swarm_.rmse_grid);
      if (swarm_.final_grid > 0) {
        result_.snapshots.push_back(
            grid_snapshot(*model, field_.arena(), swarm_.final_grid, result_.t_achieved));
      }
    }
    if (swarm_.per_robot_rmse) {
      for (const auto& r : robots_) {
        if (r.knowledge.observations.empty()) {
          result_.robot_rmse.push_back(kNaN);
          continue;
        }
        const gp::GpModel model(downsample(r.knowledge.observations, planner_.n_max), r.hyper);
        result_.robot_rmse.push_back(mapping_rmse(model, field_, field_.arena(), swarm_.rmse_grid));
      }
    }
    return std::move(result_);
  }

  const GaussianMixtureField& field_;
  const CaseConfig& config_;
  SwarmConfig swarm_;
  const SimOptions& options_;
  PlannerConfig planner_;
  AcquisitionParams acq_;
  std::int64_t period_ms_ = 1000;
  std::int64_t latency_ms_ = 0;
  std::int64_t tmax_ms_ = 0;
  std::int64_t now_ms_ = 0;
  bool found_ = false;
  int finder_ = 0;
  std::vector<RobotState> robots_;
  std::vector<std::mt19937_64> rngs_;
  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  SimResult result_;
};

}  // namespace

std::string to_string(Termination t) {
  return t == Termination::source_found ? "source_found" : "timeout";
}

Knowledge deliver_and_snapshot(const Knowledge& knowledge, std::span<const Broadcast> inbox) {
  Knowledge out = knowledge;
  for (const auto& b : inbox) {
    out.observations.merge(b.observations);
    const auto it = out.peer_plan_time.find(b.sender);
    if (it != out.peer_plan_time.end() && it->second > b.sent_at) continue;
    out.peer_plan_time[b.sender] = b.sent_at;
    out.peers[b.sender] = PeerPlan{b.sender, b.planned_waypoint, b.planned_path_samples};
  }
  return out;
}

void SwarmConfig::validate() const {
  if (robots < 1) throw std::invalid_argument("robots must be >= 1");
  if (!(sample_period > 0.0)) throw std::invalid_argument("sample_period must be > 0");
  if (!(planning_latency >= 0.0)) throw std::invalid_argument("planning_latency must be >= 0");
  if (broadcast_cap < 1) throw std::invalid_argument("broadcast_cap must be >= 1");
  if (snapshot_grid < 2 || rmse_grid < 2 || final_grid < 0 || final_grid == 1) {
    throw std::invalid_argument("grid sizes must be >= 2");
  }
}

std::string SimResult::event_log() const {
  std::string out;
  for (const auto& e : events) {
    out += e;
    out += '\n';
  }
  return out;
}

double SimResult::mean_plan_seconds() const {
  double sum = 0.0;
  int n = 0;
  for (const auto& p : plans) {
    if (p.k > 1) {
      sum += p.cpu_seconds;
      ++n;
    }
  }
  return n > 0 ? sum / n : 0.0;
}

SimResult run_experiment(const GaussianMixtureField& field, const CaseConfig& config,
                         const SwarmConfig& swarm, const SimOptions& options) {
  Engine engine(field, config, swarm, options);
  return engine.run();
}

}  // namespace bswarm
