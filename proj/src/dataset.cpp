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

#include "bswarm/dataset.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "bswarm/config_file.hpp"

namespace bswarm {
namespace {

// Records are grouped by observer, then ordered in time, so a stride over the
// set thins every robot's track evenly instead of aliasing with the swarm size.
bool key_less(const Observation& a, const Observation& b) {
  return a.observer < b.observer || (a.observer == b.observer && a.time < b.time);
}

}  // namespace

Dataset::Dataset(std::vector<Observation> records) : records_(std::move(records)) {
  std::stable_sort(records_.begin(), records_.end(), key_less);
}

void Dataset::add(const Observation& obs) {
  const auto it = std::upper_bound(records_.begin(), records_.end(), obs, key_less);
  records_.insert(it, obs);
}

std::size_t Dataset::merge(const Dataset& other) {
  if (other.empty()) {
    return 0;
  }
  std::vector<Observation> out;
  out.reserve(records_.size() + other.size());
  std::size_t added = 0;
  auto a = records_.begin();
  auto b = other.records_.begin();
  while (a != records_.end() || b != other.records_.end()) {
    if (b == other.records_.end() || (a != records_.end() && !key_less(*b, *a))) {
      out.push_back(*a++);
      continue;
    }
    // Equal keys sit next to each other in both inputs.
    const bool dup = (!out.empty() && out.back().same_key(*b)) ||
                     (a != records_.end() && a->same_key(*b));
    if (!dup) {
      out.push_back(*b);
      ++added;
    }
    ++b;
  }
  records_ = std::move(out);
  return added;
}

Eigen::MatrixX2d Dataset::locations() const {
  Eigen::MatrixX2d x(static_cast<Eigen::Index>(records_.size()), 2);
  for (std::size_t i = 0; i < records_.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = records_[i].location.transpose();
  }
  return x;
}

Eigen::VectorXd Dataset::values() const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(records_.size()));
  for (std::size_t i = 0; i < records_.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] = records_[i].value;
  }
  return y;
}

std::optional<Observation> Dataset::best() const {
  if (records_.empty()) {
    return std::nullopt;
  }
  const auto it = std::max_element(records_.begin(), records_.end(),
                                   [](const Observation& a, const Observation& b) {
                                     return a.value < b.value;
                                   });
  return *it;
}

void Dataset::write_csv(std::ostream& out) const {
  out << "time,observer,x,y,value\n";
  for (const auto& r : records_) {
    out << format_double(r.time) << ',' << r.observer << ',' << format_double(r.location.x())
        << ',' << format_double(r.location.y()) << ',' << format_double(r.value) << '\n';
  }
}

Dataset Dataset::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    return {};
  }
  if (line.rfind("time,observer,x,y,value", 0) != 0) {
    throw ConfigError("dataset CSV must start with header 'time,observer,x,y,value'");
  }
  std::vector<Observation> recs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    const auto v = parse_number_list(line, "dataset row " + std::to_string(line_no));
    if (v.size() != 5) {
      throw ConfigError("dataset row " + std::to_string(line_no) + " needs 5 columns");
    }
    recs.push_back({Vec2(v[2], v[3]), v[4], v[0], static_cast<int>(v[1])});
  }
  return Dataset(std::move(recs));
}

}  // namespace bswarm
