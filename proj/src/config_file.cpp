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

#include "bswarm/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace bswarm {
namespace {

constexpr int kMaxIncludeDepth = 16;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  KeyValueFile out;
  parse_into(out, read_file(path), path.parent_path(), 0);
  return out;
}

KeyValueFile KeyValueFile::parse(std::string_view text, const std::filesystem::path& base_dir) {
  KeyValueFile out;
  parse_into(out, text, base_dir, 0);
  return out;
}

void KeyValueFile::parse_into(KeyValueFile& out, std::string_view text,
                              const std::filesystem::path& base_dir, int depth) {
  if (depth > kMaxIncludeDepth) {
    throw ConfigError("include nesting too deep (cycle?) under '" + base_dir.string() + "'");
  }
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                        std::string(line) + "'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    if (key == "include") {
      const std::filesystem::path inc = base_dir / value;
      parse_into(out, read_file(inc), inc.parent_path(), depth + 1);
      continue;
    }
    out.entries_.emplace_back(std::move(key), std::move(value));
  }
}

bool KeyValueFile::has(std::string_view key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.first == key; });
}

std::optional<std::string> KeyValueFile::get(std::string_view key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == key) {
      return it->second;
    }
  }
  return std::nullopt;
}

std::vector<std::string> KeyValueFile::get_all(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) {
    if (k == key) {
      out.push_back(v);
    }
  }
  return out;
}

double KeyValueFile::get_double(std::string_view key) const {
  const auto v = get(key);
  if (!v) {
    throw ConfigError("missing required key '" + std::string(key) + "'");
  }
  const auto nums = parse_number_list(*v, key);
  if (nums.size() != 1) {
    throw ConfigError("key '" + std::string(key) + "' expects one number, got '" + *v + "'");
  }
  return nums.front();
}

double KeyValueFile::get_double(std::string_view key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValueFile::get_int(std::string_view key, long long fallback) const {
  if (!has(key)) {
    return fallback;
  }
  const double v = get_double(key);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    throw ConfigError("key '" + std::string(key) + "' expects an integer");
  }
  return static_cast<long long>(v);
}

bool KeyValueFile::get_bool(std::string_view key, bool fallback) const {
  const auto v = get(key);
  if (!v) {
    return fallback;
  }
  if (*v == "true" || *v == "1" || *v == "on" || *v == "yes") {
    return true;
  }
  if (*v == "false" || *v == "0" || *v == "off" || *v == "no") {
    return false;
  }
  throw ConfigError("key '" + std::string(key) + "' expects a boolean, got '" + *v + "'");
}

std::vector<double> KeyValueFile::get_doubles(std::string_view key) const {
  const auto v = get(key);
  if (!v) {
    throw ConfigError("missing required key '" + std::string(key) + "'");
  }
  return parse_number_list(*v, key);
}

void KeyValueFile::append(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueFile::set(std::string key, std::string value) {
  std::erase_if(entries_, [&](const Entry& e) { return e.first == key; });
  entries_.emplace_back(std::move(key), std::move(value));
}

std::string KeyValueFile::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

std::vector<double> parse_number_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) {
      ++i;
    }
    if (i >= text.size()) {
      break;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',') {
      ++j;
    }
    const std::string token(text.substr(i, j - i));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ConfigError("key '" + std::string(what) + "': '" + token + "' is not a number");
    }
    out.push_back(v);
    i = j;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace bswarm
