// Copyright 2026 The tsleakscan Authors.
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

#include "tsleakscan/corrcore.hpp"

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(100.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

void BM_SlidingCorrelations(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(1));
  auto target = noise(static_cast<std::size_t>(state.range(0)), 1);
  auto query = noise(h, 2);
  for (auto _ : state) {
    auto p = tsleakscan::sliding_correlations(query, target, tsleakscan::WindowLength(h), {});
    benchmark::DoNotOptimize(p.r_values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NaiveOracle(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(1));
  auto target = noise(static_cast<std::size_t>(state.range(0)), 1);
  auto query = noise(h, 2);
  for (auto _ : state) {
    auto p = tsleakscan::naive_sliding_oracle(query, target, tsleakscan::WindowLength(h), {});
    benchmark::DoNotOptimize(p.r_values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SlidingCorrelations)->ArgsProduct({{100, 1000, 10000}, {6, 24, 96}});
BENCHMARK(BM_NaiveOracle)->ArgsProduct({{100, 1000, 10000}, {6, 24, 96}});
