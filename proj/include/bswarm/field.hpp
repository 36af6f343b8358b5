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

#ifndef BSWARM_FIELD_HPP
#define BSWARM_FIELD_HPP

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "bswarm/config_file.hpp"
#include "bswarm/geometry.hpp"

namespace bswarm {

struct MixtureComponent {
  Vec2 center;
  double amplitude = 1.0;  ///< peak height, signal units
  double spread = 1.0;     ///< Gaussian length scale, m
};

/// Mission parameters attached to a signal environment.
struct CaseConfig {
  std::string name = "custom";
  double t_max = 100.0;        ///< mission time limit, s
  double t_idealized = 1.0;    ///< straight-line start-to-source travel time, s
  double horizon = 5.0;        ///< planning horizon T, s
  double speed = 0.1;          ///< robot speed V, m/s
  double max_signal = 1.0;     ///< M
  double lipschitz = 20.0;     ///< L, signal units per m
  double epsilon = 0.05;       ///< success radius around the source, m
  Vec2 start{0.0, 0.0};        ///< shared launch point
  double delta_theta = 360.0;  ///< initial feasible heading range, deg

  [[nodiscard]] double step_bound() const { return speed * horizon; }
};

/// Sum of isotropic Gaussian bumps over a rectangular arena, plus additive
/// Gaussian observation noise. Immutable after construction.
class GaussianMixtureField {
 public:
  GaussianMixtureField(std::vector<MixtureComponent> components, Arena arena, double noise_std);

  /// Noiseless signal. Throws std::domain_error outside the arena.
  [[nodiscard]] double evaluate(const Vec2& x) const;
  [[nodiscard]] double evaluate_unchecked(const Vec2& x) const noexcept;
  [[nodiscard]] Vec2 gradient(const Vec2& x) const noexcept;

  /// evaluate(x) plus N(0, noise_std^2), drawn from \p rng.
  [[nodiscard]] double observe(const Vec2& x, std::mt19937_64& rng) const;

  [[nodiscard]] const std::vector<MixtureComponent>& components() const { return components_; }
  [[nodiscard]] const Arena& arena() const { return arena_; }
  [[nodiscard]] double noise_std() const { return noise_std_; }

  /// Location of the global maximum of the summed field.
  [[nodiscard]] const Vec2& source() const { return source_; }
  [[nodiscard]] double peak_value() const { return peak_value_; }

  [[nodiscard]] GaussianMixtureField with_noise(double noise_std) const;

 private:
  Vec2 climb(Vec2 x) const;

  std::vector<MixtureComponent> components_;
  Arena arena_;
  double noise_std_;
  Vec2 source_{0.0, 0.0};
  double peak_value_ = 0.0;
};

struct CasePreset {
  GaussianMixtureField field;
  CaseConfig config;
};

/// Small 3 m arena with a bimodal signal.
CasePreset case1_preset();
/// Large 30 m arena with a ten-component multimodal signal.
CasePreset case2_preset();
/// "case1", "case2", or a path to a case file.
CasePreset load_case(const std::string& name_or_path);

CasePreset case_from_key_values(const KeyValueFile& kv);
KeyValueFile to_key_values(const CasePreset& preset);
CasePreset load_case_file(const std::filesystem::path& path);
void write_case_file(const CasePreset& preset, const std::filesystem::path& path);

/// Throws ConfigError if the mission parameters are inconsistent with the field.
void validate_case(const CasePreset& preset);

/// Largest finite-difference slope between neighbouring nodes of an n-by-n grid.
double empirical_lipschitz(const GaussianMixtureField& field, int n);

}  // namespace bswarm

#endif  // BSWARM_FIELD_HPP
