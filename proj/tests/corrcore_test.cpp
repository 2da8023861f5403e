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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "test_support.hpp"
#include "tsleakscan/corrcore.hpp"

namespace tsleakscan {
namespace {

using testing::oracle::textbook_pearson;

std::vector<double> affine(const std::vector<double>& a, double m, double c) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = m * a[i] + c;
  return out;
}

void expect_complete(const SlidingProfile& p, std::size_t windows) {
  std::set<std::size_t> seen;
  for (auto o : p.offsets) EXPECT_TRUE(seen.insert(o).second) << o;
  for (auto s : p.skipped) EXPECT_TRUE(seen.insert(s.offset).second) << s.offset;
  ASSERT_EQ(seen.size(), windows);
  EXPECT_EQ(*seen.begin(), 1u);
  EXPECT_EQ(*seen.rbegin(), windows);
  for (double r : p.r_values) {
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(WindowLength, RejectsBelowThree) {
  EXPECT_THROW(WindowLength(2), ConfigError);
  EXPECT_THROW(WindowLength(0), ConfigError);
  EXPECT_EQ(WindowLength(3).value(), 3u);
}

TEST(Pearson, PositiveScaling) {
  std::vector<double> a{1, 2, 3}, b{2, 4, 6};
  EXPECT_DOUBLE_EQ(*pearson(a, b), 1.0);
}

TEST(Pearson, NegativeAffine) {
  std::vector<double> a{1, 2, 3}, b{3, 2, 1};
  EXPECT_DOUBLE_EQ(*pearson(a, b), -1.0);
}

TEST(Pearson, HandComputedValue) {
  // centered dot product 8 over sqrt(10 * 10)
  std::vector<double> a{1, 2, 3, 4, 5}, b{1, 3, 2, 5, 4};
  EXPECT_NEAR(*textbook_pearson(a, b), 0.8, 1e-15);
  EXPECT_NEAR(*pearson(a, b), 0.8, 1e-15);
}

TEST(Pearson, ZeroVarianceIsUndefined) {
  std::vector<double> a{1, 2, 3}, flat{4, 4, 4};
  EXPECT_FALSE(pearson(a, flat).has_value());
  EXPECT_FALSE(pearson(flat, a).has_value());
}

TEST(Pearson, ContractViolations) {
  std::vector<double> a{1, 2, 3}, b{1, 2};
  EXPECT_THROW(pearson(a, b), ContractViolation);
  std::vector<double> one{1};
  EXPECT_THROW(pearson(one, one), ContractViolation);
}

TEST(Pearson, SymmetricAndAffineInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mag(0.1, 10.0), shift(-100, 100);
  std::bernoulli_distribution negative(0.5);
  std::uniform_int_distribution<std::size_t> len(3, 50);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = testing::gaussian_series(rng, len(rng));
    auto b = testing::gaussian_series(rng, a.size());
    const double m = negative(rng) ? -mag(rng) : mag(rng);
    const double c = shift(rng);
    const double sign = m > 0 ? 1.0 : -1.0;

    EXPECT_EQ(*pearson(a, b), *pearson(b, a));
    EXPECT_NEAR(*pearson(a, affine(a, m, c)), sign, 1e-12);
    EXPECT_NEAR(*pearson(affine(a, m, c), b), sign * *pearson(a, b), 1e-12);
  }
}

TEST(SlidingCorrelations, RampMatchesEveryWindow) {
  std::vector<double> q{1, 2, 3}, t{1, 2, 3, 4, 5};
  auto p = sliding_correlations(q, t, WindowLength(3));
  EXPECT_EQ(p.offsets, (std::vector<std::size_t>{1, 2, 3}));
  ASSERT_EQ(p.r_values.size(), 3u);
  for (double r : p.r_values) EXPECT_NEAR(r, 1.0, 1e-15);
  EXPECT_TRUE(p.skipped.empty());
}

TEST(SlidingCorrelations, ConstantWindowsAreSkipped) {
  std::vector<double> q{1, 2, 1}, t{7, 7, 7, 7};
  auto p = sliding_correlations(q, t, WindowLength(3));
  EXPECT_TRUE(p.offsets.empty());
  EXPECT_EQ(p.skipped,
            (std::vector<SkippedWindow>{{1, WindowSkip::kZeroVariance},
                                        {2, WindowSkip::kZeroVariance}}));
}

TEST(SlidingCorrelations, MissingPositionsSkipOverlappingWindows) {
  std::vector<double> q{1, 2, 4}, t{3, 1, 0, 5, 2, 8};
  std::vector<std::size_t> missing{2};
  auto p = sliding_correlations(q, t, WindowLength(3), missing);
  EXPECT_EQ(p.offsets, (std::vector<std::size_t>{4}));
  EXPECT_EQ(p.skipped, (std::vector<SkippedWindow>{
                           {1, WindowSkip::kMissingOverlap},
                           {2, WindowSkip::kMissingOverlap},
                           {3, WindowSkip::kMissingOverlap}}));
  auto n = naive_sliding_oracle(q, t, WindowLength(3), missing);
  EXPECT_EQ(n.offsets, p.offsets);
  EXPECT_EQ(n.skipped, p.skipped);
}

TEST(SlidingCorrelations, ContractViolations) {
  std::vector<double> q{1, 2, 3}, short_t{1, 2}, flat{2, 2, 2};
  std::vector<double> t{1, 2, 3, 4};
  EXPECT_THROW(sliding_correlations(q, short_t, WindowLength(3)), ContractViolation);
  EXPECT_THROW(sliding_correlations(flat, t, WindowLength(3)), ContractViolation);
  EXPECT_THROW(sliding_correlations(q, t, WindowLength(4)), ContractViolation);
  EXPECT_THROW(naive_sliding_oracle(q, short_t, WindowLength(3)), ContractViolation);
}

TEST(SlidingCorrelations, FindsInternalRepeatLikeTheOracle) {
  std::mt19937_64 rng(77);
  auto series = testing::gaussian_series(rng, 30, 5000.0, 300.0);
  // plant the last six observations at positions 10..15
  std::copy(series.end() - 6, series.end(), series.begin() + 9);
  std::vector<double> query(series.end() - 6, series.end());
  auto fast = sliding_correlations(query, series, WindowLength(6));
  auto slow = naive_sliding_oracle(query, series, WindowLength(6));
  ASSERT_EQ(fast.offsets, slow.offsets);
  auto it = std::find(fast.offsets.begin(), fast.offsets.end(), 10u);
  ASSERT_NE(it, fast.offsets.end());
  EXPECT_NEAR(fast.r_values[it - fast.offsets.begin()], 1.0, 1e-12);
}

TEST(NaiveOracle, DescendingRamp) {
  std::vector<double> q{1, 2, 3}, t{3, 2, 1, 0};
  auto p = naive_sliding_oracle(q, t, WindowLength(3));
  ASSERT_EQ(p.r_values.size(), 2u);
  EXPECT_NEAR(p.r_values[0], -1.0, 1e-15);
  EXPECT_NEAR(p.r_values[1], -1.0, 1e-15);
  EXPECT_TRUE(p.skipped.empty());
}

enum class Shape { kGaussian, kOffset, kTrend, kIntegers, kBlocks };

std::vector<double> shaped(std::mt19937_64& rng, Shape shape, std::size_t n) {
  std::vector<double> v = testing::gaussian_series(rng, n);
  switch (shape) {
    case Shape::kGaussian:
      break;
    case Shape::kOffset:
      for (double& x : v) x = 1e6 + x;
      break;
    case Shape::kTrend:
      for (std::size_t i = 0; i < n; ++i) v[i] = std::exp(0.05 * i) * 100 + v[i];
      break;
    case Shape::kIntegers:
      for (double& x : v) x = std::round(x);
      break;
    case Shape::kBlocks:
      for (std::size_t i = 0; i < n; ++i) v[i] = std::round(v[i / 7 * 7] * 3);
      break;
  }
  return v;
}

// Property: the prefix-sum kernel agrees with per-window recomputation and
// with the textbook formula to 1e-9, on well- and ill-conditioned inputs.
TEST(SlidingCorrelations, AgreesWithNaiveOracle) {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> shape_pick(0, 4);
  std::uniform_int_distribution<std::size_t> h_pick(3, 12);
  double worst = 0.0;
  int trials = 0;
  while (trials < 200) {
    const std::size_t h = h_pick(rng);
    std::uniform_int_distribution<std::size_t> len(h, 400);
    const auto shape = static_cast<Shape>(shape_pick(rng));
    auto target = shaped(rng, shape, len(rng));
    auto query = shaped(rng, shape, h);
    if (is_constant(query)) continue;
    ++trials;

    auto fast = sliding_correlations(query, target, WindowLength(h));
    auto slow = naive_sliding_oracle(query, target, WindowLength(h));
    expect_complete(fast, target.size() - h + 1);
    ASSERT_EQ(fast.offsets, slow.offsets);
    ASSERT_EQ(fast.skipped, slow.skipped);
    for (std::size_t k = 0; k < fast.offsets.size(); ++k) {
      const auto window =
          std::span<const double>(target).subspan(fast.offsets[k] - 1, h);
      const double ref = *textbook_pearson(query, window);
      worst = std::max(worst, std::fabs(fast.r_values[k] - slow.r_values[k]));
      worst = std::max(worst, std::fabs(fast.r_values[k] - ref));
    }
  }
  EXPECT_LE(worst, 1e-9);
}

// Long windows on long targets, with holes, across every block boundary.
TEST(SlidingCorrelations, LongWindowsAgreeWithNaiveOracle) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> shape_pick(0, 4);
  const std::size_t hs[] = {63, 64, 65, 100, 129};
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t h = hs[trial % 5];
    const auto shape = static_cast<Shape>(shape_pick(rng));
    std::uniform_int_distribution<std::size_t> len(h, 1500);
    auto target = shaped(rng, shape, len(rng));
    auto query = shaped(rng, shape, h);
    if (is_constant(query)) continue;
    std::vector<std::size_t> missing;
    std::uniform_int_distribution<std::size_t> pos(0, target.size() - 1);
    for (int k = 0; k < trial % 3; ++k) missing.push_back(pos(rng));
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());

    auto fast = sliding_correlations(query, target, WindowLength(h), missing);
    auto slow = naive_sliding_oracle(query, target, WindowLength(h), missing);
    ASSERT_EQ(fast.offsets, slow.offsets);
    ASSERT_EQ(fast.skipped, slow.skipped);
    for (std::size_t k = 0; k < fast.offsets.size(); ++k) {
      worst = std::max(worst, std::fabs(fast.r_values[k] - slow.r_values[k]));
    }
  }
  EXPECT_LE(worst, 1e-9);
}

}  // namespace
}  // namespace tsleakscan
