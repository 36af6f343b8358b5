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

#include "bswarm/field.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace bswarm {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

GaussianMixtureField::GaussianMixtureField(std::vector<MixtureComponent> components, Arena arena,
                                           double noise_std)
    : components_(std::move(components)), arena_(arena), noise_std_(noise_std) {
  if (arena_.degenerate()) {
    throw ConfigError("field arena is degenerate");
  }
  if (!(noise_std_ >= 0.0) || !std::isfinite(noise_std_)) {
    throw ConfigError("field noise_std must be finite and >= 0");
  }
  if (components_.empty()) {
    throw ConfigError("field needs at least one component");
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& c = components_[i];
    if (!arena_.contains(c.center, 0.0)) {
      throw ConfigError("component " + std::to_string(i) + " center lies outside the arena");
    }
    if (!(c.spread > 0.0) || !std::isfinite(c.amplitude)) {
      throw ConfigError("component " + std::to_string(i) + " needs spread > 0 and finite amplitude");
    }
  }

  // Every mode of the mixture is reachable by climbing from some component
  // center; the global source must be strictly the best of them.
  std::vector<std::pair<Vec2, double>> modes;
  for (const auto& c : components_) {
    const Vec2 m = climb(c.center);
    modes.emplace_back(m, evaluate_unchecked(m));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < modes.size(); ++i) {
    if (modes[i].second > modes[best].second) {
      best = i;
    }
  }
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const bool same_mode = (modes[i].first - modes[best].first).norm() < 1e-6;
    if (!same_mode && modes[i].second >= modes[best].second - 1e-9) {
      throw ConfigError("field has no unique global source");
    }
  }
  source_ = modes[best].first;
  peak_value_ = modes[best].second;
}

double GaussianMixtureField::evaluate_unchecked(const Vec2& x) const noexcept {
  double sum = 0.0;
  for (const auto& c : components_) {
    sum += c.amplitude * std::exp(-(x - c.center).squaredNorm() / (2.0 * c.spread * c.spread));
  }
  return sum;
}

Vec2 GaussianMixtureField::gradient(const Vec2& x) const noexcept {
  Vec2 g = Vec2::Zero();
  for (const auto& c : components_) {
    const double s2 = c.spread * c.spread;
    const double v = c.amplitude * std::exp(-(x - c.center).squaredNorm() / (2.0 * s2));
    g += v * (c.center - x) / s2;
  }
  return g;
}

double GaussianMixtureField::evaluate(const Vec2& x) const {
  if (!x.allFinite() || !arena_.contains(x)) {
    throw std::domain_error("field query outside the arena");
  }
  return evaluate_unchecked(x);
}

double GaussianMixtureField::observe(const Vec2& x, std::mt19937_64& rng) const {
  const double f = evaluate(x);
  std::normal_distribution<double> noise(0.0, 1.0);
  return f + noise_std_ * noise(rng);
}

GaussianMixtureField GaussianMixtureField::with_noise(double noise_std) const {
  return GaussianMixtureField(components_, arena_, noise_std);
}

// Fixed-point iteration x <- sum(w_i c_i) / sum(w_i), w_i = A_i g_i(x) / s_i^2,
// whose fixed points are exactly the stationary points of the mixture.
Vec2 GaussianMixtureField::climb(Vec2 x) const {
  for (int it = 0; it < 10000; ++it) {
    Vec2 num = Vec2::Zero();
    double den = 0.0;
    for (const auto& c : components_) {
      const double s2 = c.spread * c.spread;
      const double w = c.amplitude * std::exp(-(x - c.center).squaredNorm() / (2.0 * s2)) / s2;
      num += w * c.center;
      den += w;
    }
    if (!(den > 0.0)) {
      break;
    }
    const Vec2 next = arena_.clamp(num / den);
    const double step = (next - x).norm();
    x = next;
    if (step < 1e-13) {
      break;
    }
  }
  return x;
}

namespace {

GaussianMixtureField make_field(const Arena& arena, const Vec2& start, double source_distance,
                                double source_bearing_deg, double source_spread,
                                std::vector<MixtureComponent> others, double noise_std) {
  const double b = source_bearing_deg * kDegToRad;
  const Vec2 target = start + source_distance * Vec2(std::cos(b), std::sin(b));
  std::vector<MixtureComponent> comps;
  comps.push_back({target, 1.0, source_spread});
  for (auto& c : others) {
    comps.push_back(c);
  }
  // Neighbouring tails shift and lift the summit; nudge the source bump until
  // the summed field peaks at the target with height 1.
  for (int it = 0; it < 100; ++it) {
    const GaussianMixtureField f(comps, arena, 0.0);
    const Vec2 shift = target - f.source();
    comps.front().center += shift;
    comps.front().amplitude /= f.peak_value();
    if (shift.norm() < 1e-13 && std::abs(f.peak_value() - 1.0) < 1e-15) {
      break;
    }
  }
  comps.front().amplitude *= 1.0 - 1e-14;
  return GaussianMixtureField(std::move(comps), arena, noise_std);
}

}  // namespace

CasePreset case1_preset() {
  CaseConfig cfg;
  cfg.name = "case1";
  cfg.t_max = 100.0;
  cfg.t_idealized = 29.8;
  cfg.horizon = 5.0;
  cfg.speed = 0.1;
  cfg.max_signal = 1.0;
  cfg.lipschitz = 20.0;
  cfg.epsilon = 0.05;
  cfg.start = Vec2(0.05, 0.05);
  cfg.delta_theta = 90.0;

  const Arena arena{Vec2(0.0, 0.0), Vec2(3.0, 3.0)};
  auto field = make_field(arena, cfg.start, cfg.speed * cfg.t_idealized, 42.0, 1.1,
                          {{Vec2(0.6, 2.5), 0.45, 0.4}}, 0.01);
  return {std::move(field), cfg};
}

CasePreset case2_preset() {
  CaseConfig cfg;
  cfg.name = "case2";
  cfg.t_max = 1000.0;
  cfg.t_idealized = 140.6;
  cfg.horizon = 20.0;
  cfg.speed = 0.2;
  cfg.max_signal = 1.0;
  cfg.lipschitz = 200.0;
  cfg.epsilon = 0.2;
  cfg.start = Vec2(1.0, 1.0);
  cfg.delta_theta = 90.0;

  const Arena arena{Vec2(0.0, 0.0), Vec2(30.0, 30.0)};
  auto field = make_field(arena, cfg.start, cfg.speed * cfg.t_idealized, 40.0, 4.0,
                          {
                              {Vec2(6.0, 24.0), 0.8, 3.5},
                              {Vec2(12.0, 8.0), 0.6, 3.0},
                              {Vec2(26.0, 5.0), 0.7, 3.2},
                              {Vec2(12.0, 17.0), 0.5, 3.5},
                              {Vec2(6.0, 13.0), 0.4, 2.8},
                              {Vec2(27.0, 28.0), 0.55, 3.0},
                              {Vec2(15.0, 27.0), 0.45, 3.2},
                              {Vec2(5.0, 5.0), 0.3, 2.5},
                              {Vec2(19.0, 9.0), 0.6, 2.8},
                          },
                          0.01);
  return {std::move(field), cfg};
}

CasePreset load_case(const std::string& name_or_path) {
  if (name_or_path == "case1") {
    return case1_preset();
  }
  if (name_or_path == "case2") {
    return case2_preset();
  }
  if (!std::filesystem::exists(name_or_path)) {
    throw ConfigError("case file '" + name_or_path + "' does not exist");
  }
  return load_case_file(name_or_path);
}

CasePreset case_from_key_values(const KeyValueFile& kv) {
  const auto arena_v = kv.get_doubles("arena");
  if (arena_v.size() != 4) {
    throw ConfigError("key 'arena' expects 'x_lo y_lo x_hi y_hi'");
  }
  const Arena arena{Vec2(arena_v[0], arena_v[1]), Vec2(arena_v[2], arena_v[3])};

  std::vector<MixtureComponent> comps;
  for (const auto& line : kv.get_all("component")) {
    const auto v = parse_number_list(line, "component");
    if (v.size() != 4) {
      throw ConfigError("key 'component' expects 'center_x center_y amplitude spread'");
    }
    comps.push_back({Vec2(v[0], v[1]), v[2], v[3]});
  }
  GaussianMixtureField field(std::move(comps), arena, kv.get_double("noise_std", 0.01));

  CaseConfig cfg;
  cfg.name = kv.get("name").value_or("custom");
  cfg.t_max = kv.get_double("t_max");
  cfg.horizon = kv.get_double("horizon");
  cfg.speed = kv.get_double("speed");
  cfg.max_signal = kv.get_double("max_signal", 1.0);
  cfg.lipschitz = kv.get_double("lipschitz");
  cfg.epsilon = kv.get_double("epsilon");
  const auto start = kv.get_doubles("start");
  if (start.size() != 2) {
    throw ConfigError("key 'start' expects 'x y'");
  }
  cfg.start = Vec2(start[0], start[1]);
  cfg.delta_theta = kv.get_double("delta_theta", 360.0);
  cfg.t_idealized = kv.has("t_idealized") ? kv.get_double("t_idealized")
                                          : (field.source() - cfg.start).norm() / cfg.speed;
  CasePreset preset{std::move(field), cfg};
  validate_case(preset);
  return preset;
}

KeyValueFile to_key_values(const CasePreset& preset) {
  const auto& f = preset.field;
  const auto& c = preset.config;
  KeyValueFile kv;
  kv.append("name", c.name);
  kv.append("arena", format_double(f.arena().lo.x()) + " " + format_double(f.arena().lo.y()) + " " +
                         format_double(f.arena().hi.x()) + " " + format_double(f.arena().hi.y()));
  kv.append("noise_std", format_double(f.noise_std()));
  for (const auto& comp : f.components()) {
    kv.append("component", format_double(comp.center.x()) + " " + format_double(comp.center.y()) +
                               " " + format_double(comp.amplitude) + " " +
                               format_double(comp.spread));
  }
  kv.append("t_max", format_double(c.t_max));
  kv.append("t_idealized", format_double(c.t_idealized));
  kv.append("horizon", format_double(c.horizon));
  kv.append("speed", format_double(c.speed));
  kv.append("max_signal", format_double(c.max_signal));
  kv.append("lipschitz", format_double(c.lipschitz));
  kv.append("epsilon", format_double(c.epsilon));
  kv.append("start", format_double(c.start.x()) + " " + format_double(c.start.y()));
  kv.append("delta_theta", format_double(c.delta_theta));
  return kv;
}

CasePreset load_case_file(const std::filesystem::path& path) {
  return case_from_key_values(KeyValueFile::load(path));
}

void write_case_file(const CasePreset& preset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write case file '" + path.string() + "'");
  }
  out << "# Gaussian-mixture signal environment and mission parameters\n";
  out << to_key_values(preset).serialize();
}

void validate_case(const CasePreset& preset) {
  const auto& c = preset.config;
  const auto& arena = preset.field.arena();
  if (!arena.contains(c.start, 0.0)) {
    throw ConfigError("start lies outside the arena");
  }
  if (!(c.t_max > 0.0)) throw ConfigError("t_max must be > 0");
  if (!(c.t_idealized > 0.0)) throw ConfigError("t_idealized must be > 0");
  if (!(c.horizon > 0.0)) throw ConfigError("horizon must be > 0");
  if (!(c.speed > 0.0)) throw ConfigError("speed must be > 0");
  if (!(c.lipschitz > 0.0)) throw ConfigError("lipschitz must be > 0");
  if (!(c.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(c.delta_theta > 0.0 && c.delta_theta <= 360.0)) {
    throw ConfigError("delta_theta must lie in (0, 360]");
  }
  if (preset.field.peak_value() > c.max_signal + 1e-12) {
    throw ConfigError("max_signal is below the field's peak value");
  }
}

double empirical_lipschitz(const GaussianMixtureField& field, int n) {
  const auto& a = field.arena();
  const double dx = a.width() / (n - 1);
  const double dy = a.height() / (n - 1);
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      v[static_cast<std::size_t>(j) * n + i] =
          field.evaluate_unchecked(Vec2(a.lo.x() + i * dx, a.lo.y() + j * dy));
    }
  }
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double f = v[static_cast<std::size_t>(j) * n + i];
      if (i + 1 < n) {
        best = std::max(best, std::abs(v[static_cast<std::size_t>(j) * n + i + 1] - f) / dx);
      }
      if (j + 1 < n) {
        best = std::max(best, std::abs(v[static_cast<std::size_t>(j + 1) * n + i] - f) / dy);
      }
    }
  }
  return best;
}

}  // namespace bswarm
