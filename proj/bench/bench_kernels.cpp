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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "bswarm/field.hpp"
#include "bswarm/kernels.hpp"

namespace {

using namespace bswarm;

Eigen::MatrixX2d random_points(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  Eigen::MatrixX2d x(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) << u(rng), u(rng);
  return x;
}

void BM_CovarianceSerial(benchmark::State& state) {
  const auto x = random_points(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::covariance_serial(x, 3.0, 0.09));
}

void BM_CovarianceParallel(benchmark::State& state) {
  const auto x = random_points(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::covariance(x, 3.0, 0.09));
}

void BM_CrossCovarianceSerial(benchmark::State& state) {
  const auto a = random_points(state.range(0), 2);
  const auto b = random_points(110, 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cross_covariance_serial(a, b, 3.0, 0.09));
}

void BM_CrossCovarianceParallel(benchmark::State& state) {
  const auto a = random_points(state.range(0), 2);
  const auto b = random_points(110, 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cross_covariance(a, b, 3.0, 0.09));
}

std::vector<Vec2> grid_points(int n) { return case2_preset().field.arena().grid(n); }

void BM_FieldGridSerial(benchmark::State& state) {
  const auto field = case2_preset().field;
  const auto pts = grid_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::field_values_serial(field, pts));
}

void BM_FieldGridParallel(benchmark::State& state) {
  const auto field = case2_preset().field;
  const auto pts = grid_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::field_values(field, pts));
}

}  // namespace

BENCHMARK(BM_CovarianceSerial)->Arg(250)->Arg(1000);
BENCHMARK(BM_CovarianceParallel)->Arg(250)->Arg(1000);
BENCHMARK(BM_CrossCovarianceSerial)->Arg(250)->Arg(1000);
BENCHMARK(BM_CrossCovarianceParallel)->Arg(250)->Arg(1000);
BENCHMARK(BM_FieldGridSerial)->Arg(100)->Arg(500);
BENCHMARK(BM_FieldGridParallel)->Arg(100)->Arg(500);

BENCHMARK_MAIN();
