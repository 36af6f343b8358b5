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

#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "bswarm/config_file.hpp"
#include "bswarm/dataset.hpp"

namespace {

using namespace bswarm;

TEST(Dataset, KeepsObserverTimeOrder) {
  Dataset d;
  d.add({Vec2(0, 0), 1.0, 2.0, 1});
  d.add({Vec2(1, 0), 2.0, 1.0, 2});
  d.add({Vec2(2, 0), 3.0, 1.0, 1});
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0].value, 3.0);
  EXPECT_EQ(d[1].value, 1.0);
  EXPECT_EQ(d[2].value, 2.0);
}

TEST(Dataset, StrideThinsEveryObserver) {
  Dataset d;
  for (int t = 1; t <= 50; ++t) {
    for (int r = 1; r <= 20; ++r) d.add({Vec2(r, t), 0.0, t * 1.0, r});
  }
  // Every 5th record: all 20 observers survive with 10 records each.
  std::map<int, int> per;
  for (std::size_t i = 0; i < d.size(); i += 5) ++per[d[i].observer];
  EXPECT_EQ(per.size(), 20u);
  for (const auto& [r, n] : per) EXPECT_EQ(n, 10) << r;
}

TEST(Dataset, MergeSkipsDuplicateKeys) {
  Dataset a;
  a.add({Vec2(0, 0), 1.0, 1.0, 1});
  a.add({Vec2(0, 1), 2.0, 2.0, 1});
  Dataset b;
  b.add({Vec2(9, 9), 9.0, 1.0, 1});  // same key as a[0]
  b.add({Vec2(0, 2), 3.0, 1.0, 2});
  b.add({Vec2(0, 3), 4.0, 3.0, 2});
  EXPECT_EQ(a.merge(b), 2u);
  EXPECT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].value, 1.0);
  EXPECT_EQ(a.merge(b), 0u);
  EXPECT_EQ(a.size(), 4u);
}

TEST(Dataset, MergeIsUnionRegardlessOfOrder) {
  Dataset a;
  Dataset b;
  for (int i = 0; i < 10; ++i) {
    (i % 2 ? a : b).add({Vec2(i, 0), i * 1.0, i * 0.5, 1 + i % 3});
  }
  Dataset ab = a;
  ab.merge(b);
  Dataset ba = b;
  ba.merge(a);
  ASSERT_EQ(ab.size(), ba.size());
  for (std::size_t i = 0; i < ab.size(); ++i) EXPECT_TRUE(ab[i].same_key(ba[i]));
}

TEST(Dataset, BestPicksHighestValue) {
  Dataset d;
  EXPECT_FALSE(d.best().has_value());
  d.add({Vec2(0, 0), 1.0, 1.0, 1});
  d.add({Vec2(1, 1), 5.0, 2.0, 1});
  d.add({Vec2(2, 2), 5.0, 3.0, 1});
  EXPECT_EQ(d.best()->location, Vec2(1, 1));
}

TEST(Dataset, CsvRoundTrip) {
  Dataset d;
  d.add({Vec2(0.1, 0.2), 0.123456789, 1.0, 1});
  d.add({Vec2(1.0 / 3.0, 2.5), -0.5, 2.0, 3});
  std::stringstream ss;
  d.write_csv(ss);
  const auto back = Dataset::read_csv(ss);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back[i].location, d[i].location);
    EXPECT_EQ(back[i].value, d[i].value);
    EXPECT_EQ(back[i].time, d[i].time);
    EXPECT_EQ(back[i].observer, d[i].observer);
  }
}

TEST(Dataset, CsvRejectsBadInput) {
  std::stringstream bad_header("t,x,y\n1,2,3\n");
  EXPECT_THROW(Dataset::read_csv(bad_header), ConfigError);
  std::stringstream short_row("time,observer,x,y,value\n1,2,3\n");
  EXPECT_THROW(Dataset::read_csv(short_row), ConfigError);
}

TEST(Dataset, MatrixViews) {
  Dataset d;
  d.add({Vec2(1, 2), 3.0, 0.0, 1});
  d.add({Vec2(4, 5), 6.0, 1.0, 1});
  EXPECT_EQ(d.locations().row(1).transpose(), Vec2(4, 5));
  EXPECT_EQ(d.values()[0], 3.0);
}

}  // namespace
