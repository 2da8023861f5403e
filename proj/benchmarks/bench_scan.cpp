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
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "tsleakscan/scanner.hpp"

namespace {

tsleakscan::SeriesCollection corpus(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d(100.0, 10.0);
  std::uniform_int_distribution<std::size_t> len(20, 60);
  std::vector<tsleakscan::Series> entries;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(len(rng));
    for (auto& x : v) x = d(rng);
    entries.push_back({"s" + std::to_string(i), std::move(v), {}});
  }
  return tsleakscan::SeriesCollection(std::move(entries));
}

void BM_Scan(benchmark::State& state) {
  auto c = corpus(static_cast<std::size_t>(state.range(0)));
  tsleakscan::ScanConfig cfg;
  cfg.workers = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto report = tsleakscan::scan(c, cfg);
    benchmark::DoNotOptimize(report.matches.data());
  }
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_Scan)->ArgsProduct({{181, 645}, {1, 2, 4, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
