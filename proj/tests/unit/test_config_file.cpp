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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "bswarm/config_file.hpp"

namespace {

using bswarm::ConfigError;
using bswarm::KeyValueFile;

TEST(KeyValueFile, ParsesCommentsAndWhitespace) {
  const auto kv = KeyValueFile::parse("# header\n  robots = 5  # trailing\n\nname=case1\n");
  EXPECT_EQ(kv.get("robots").value(), "5");
  EXPECT_EQ(kv.get("name").value(), "case1");
  EXPECT_EQ(kv.entries().size(), 2u);
}

TEST(KeyValueFile, LastValueWinsButAllAreKept) {
  const auto kv = KeyValueFile::parse("component = 1 2 3 4\ncomponent = 5 6 7 8\n");
  EXPECT_EQ(kv.get("component").value(), "5 6 7 8");
  EXPECT_EQ(kv.get_all("component").size(), 2u);
}

TEST(KeyValueFile, TypedAccessors) {
  const auto kv = KeyValueFile::parse("a = 2.5\nb = 7\nc = yes\nd = 1, 2 3\n");
  EXPECT_EQ(kv.get_double("a"), 2.5);
  EXPECT_EQ(kv.get_int("b", 0), 7);
  EXPECT_TRUE(kv.get_bool("c", false));
  EXPECT_EQ(kv.get_doubles("d"), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(kv.get_double("missing", 4.0), 4.0);
}

TEST(KeyValueFile, ErrorsNameTheKey) {
  const auto kv = KeyValueFile::parse("a = nope\nb = 2.5\nc = maybe\n");
  try {
    (void)kv.get_double("a");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
  EXPECT_THROW((void)kv.get_int("b", 0), ConfigError);
  EXPECT_THROW((void)kv.get_bool("c", false), ConfigError);
  EXPECT_THROW((void)kv.get_double("zzz"), ConfigError);
}

TEST(KeyValueFile, RejectsLinesWithoutEquals) {
  EXPECT_THROW(KeyValueFile::parse("robots 5\n"), ConfigError);
}

TEST(KeyValueFile, IncludesRelativeToFile) {
  const auto dir = std::filesystem::temp_directory_path() / "bswarm_kv_include";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "base.conf") << "robots = 3\nseeds = 0-2\n";
  std::ofstream(dir / "top.conf") << "include = base.conf\nrobots = 8\n";
  const auto kv = KeyValueFile::load(dir / "top.conf");
  EXPECT_EQ(kv.get_int("robots", 0), 8);
  EXPECT_EQ(kv.get("seeds").value(), "0-2");
  std::filesystem::remove_all(dir);
}

TEST(KeyValueFile, IncludeCycleIsReported) {
  const auto dir = std::filesystem::temp_directory_path() / "bswarm_kv_cycle";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.conf") << "include = a.conf\n";
  EXPECT_THROW(KeyValueFile::load(dir / "a.conf"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(KeyValueFile, MissingFileIsNamed) {
  try {
    (void)KeyValueFile::load("/nonexistent/dir/x.conf");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/x.conf"), std::string::npos);
  }
}

TEST(KeyValueFile, SerializeRoundTrips) {
  KeyValueFile kv;
  kv.append("a", "1");
  kv.append("b", "x y");
  kv.set("a", "2");
  const auto back = KeyValueFile::parse(kv.serialize());
  EXPECT_EQ(back.entries(), kv.entries());
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(bswarm::format_double(0.1), "0.1");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(bswarm::format_double(v)), v);
}

}  // namespace
