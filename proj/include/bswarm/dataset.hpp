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

#ifndef BSWARM_DATASET_HPP
#define BSWARM_DATASET_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "bswarm/geometry.hpp"

namespace bswarm {

struct Observation {
  Vec2 location;
  double value = 0.0;  ///< measured signal
  double time = 0.0;   ///< s
  int observer = 0;    ///< robot id, 1-based; 0 for synthetic data

  /// Records are identified by who took them and when.
  [[nodiscard]] bool same_key(const Observation& o) const {
    return time == o.time && observer == o.observer;
  }
};

/// Observation records kept sorted by (observer, time); insertion is stable.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Observation> records);

  void add(const Observation& obs);

  /// Merges \p other, skipping records whose (time, observer) key is already
  /// present. Returns the number of records added.
  std::size_t merge(const Dataset& other);

  [[nodiscard]] std::size_t size() const { return records_.size(); }
  [[nodiscard]] bool empty() const { return records_.empty(); }
  [[nodiscard]] const Observation& operator[](std::size_t i) const { return records_[i]; }
  [[nodiscard]] auto begin() const { return records_.begin(); }
  [[nodiscard]] auto end() const { return records_.end(); }
  [[nodiscard]] const std::vector<Observation>& records() const { return records_; }

  [[nodiscard]] Eigen::MatrixX2d locations() const;
  [[nodiscard]] Eigen::VectorXd values() const;

  /// Record with the highest value (first in record order on ties).
  [[nodiscard]] std::optional<Observation> best() const;

  /// CSV with header `time,observer,x,y,value`.
  void write_csv(std::ostream& out) const;
  static Dataset read_csv(std::istream& in);

 private:
  std::vector<Observation> records_;
};

}  // namespace bswarm

#endif  // BSWARM_DATASET_HPP
