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

#ifndef BSWARM_CONFIG_FILE_HPP
#define BSWARM_CONFIG_FILE_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bswarm {

/// Raised for malformed or inconsistent configuration. The message names the
/// offending key or path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered list of `key = value` entries.
///
/// Lines starting with `#` are comments. A key may repeat (for instance one
/// `component` line per mixture component); scalar lookups take the last
/// occurrence. `include = other.cfg` splices another file in place, resolved
/// relative to the including file.
class KeyValueFile {
 public:
  using Entry = std::pair<std::string, std::string>;

  KeyValueFile() = default;

  static KeyValueFile load(const std::filesystem::path& path);
  static KeyValueFile parse(std::string_view text, const std::filesystem::path& base_dir = {});

  [[nodiscard]] bool has(std::string_view key) const;
  [[nodiscard]] std::optional<std::string> get(std::string_view key) const;
  [[nodiscard]] std::vector<std::string> get_all(std::string_view key) const;

  [[nodiscard]] double get_double(std::string_view key) const;
  [[nodiscard]] double get_double(std::string_view key, double fallback) const;
  [[nodiscard]] long long get_int(std::string_view key, long long fallback) const;
  [[nodiscard]] bool get_bool(std::string_view key, bool fallback) const;
  /// Whitespace- or comma-separated numbers.
  [[nodiscard]] std::vector<double> get_doubles(std::string_view key) const;

  void append(std::string key, std::string value);
  void set(std::string key, std::string value);

  [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }
  [[nodiscard]] std::string serialize() const;

 private:
  static void parse_into(KeyValueFile& out, std::string_view text,
                         const std::filesystem::path& base_dir, int depth);

  std::vector<Entry> entries_;
};

/// Parses a list of numbers separated by whitespace and/or commas.
std::vector<double> parse_number_list(std::string_view text, std::string_view what);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace bswarm

#endif  // BSWARM_CONFIG_FILE_HPP
