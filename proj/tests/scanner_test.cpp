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
#include <numeric>
#include <set>

#include "test_support.hpp"
#include "tsleakscan/scanner.hpp"

namespace tsleakscan {
namespace {

using Key = std::tuple<std::string, std::string, std::size_t>;

std::set<Key> keys_of(const std::vector<MatchRecord>& matches) {
  std::set<Key> out;
  for (const auto& m : matches) out.insert({m.query_id, m.donor_id, m.start});
  return out;
}

ScanConfig config(std::size_t h, double cutoff, std::size_t workers = 1) {
  ScanConfig cfg;
  cfg.h = WindowLength(h);
  cfg.cutoff = cutoff;
  cfg.workers = workers;
  return cfg;
}

// Random collection where some series carry (possibly transformed) copies
// of other series' segments, so scans have something to find.
SeriesCollection planted_collection(std::mt19937_64& rng, std::size_t series,
                                    std::size_t min_len, std::size_t max_len,
                                    std::size_t h) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Series> entries;
  for (std::size_t i = 0; i < series; ++i) {
    entries.push_back({"s" + std::to_string(i + 1),
                       testing::gaussian_series(rng, len(rng), 50.0, 5.0), {}});
  }
  for (std::size_t i = 1; i < series; ++i) {
    if (coin(rng) < 0.5) continue;
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    auto& src = entries[pick(rng)].values;
    auto& dst = entries[i].values;
    std::uniform_int_distribution<std::size_t> from(0, src.size() - h);
    std::uniform_int_distribution<std::size_t> to(0, dst.size() - h);
    const std::size_t a = from(rng), b = to(rng);
    const double m = coin(rng) < 0.5 ? 1.0 : 2.5;
    for (std::size_t k = 0; k < h; ++k) dst[b + k] = m * src[a + k] + 3.0;
  }
  return SeriesCollection(std::move(entries));
}

TEST(ExtractQuery, TakesFinalSegment) {
  std::vector<double> s{10, 20, 30, 40, 50};
  auto q = extract_query(s, WindowLength(3));
  ASSERT_TRUE(q);
  EXPECT_EQ(std::vector<double>(q->values.begin(), q->values.end()),
            (std::vector<double>{30, 40, 50}));
  EXPECT_EQ(q->first, 3u);
  EXPECT_EQ(q->last, 5u);
}

TEST(ExtractQuery, FifteenPointsWithHFive) {
  std::vector<double> s(15);
  std::iota(s.begin(), s.end(), 1.0);
  auto q = extract_query(s, WindowLength(5));
  ASSERT_TRUE(q);
  EXPECT_EQ(q->first, 11u);
  EXPECT_EQ(q->last, 15u);
}

TEST(ExtractQuery, TooShortSeries) {
  std::vector<double> s{1, 2, 3, 4};
  EXPECT_FALSE(extract_query(s, WindowLength(5)));
}

TEST(Scan, UsageCollectionYieldsThreeMatches) {
  auto u = testing::make_usage_collection();
  auto report = scan(u.collection, config(5, 1.0));
  ASSERT_EQ(report.matches.size(), 3u);
  const auto& m = report.matches;
  EXPECT_EQ(std::tie(m[0].query_id, m[0].donor_id, m[0].start, m[0].end),
            std::make_tuple(std::string("x"), std::string("z"), 12u, 16u));
  EXPECT_EQ(std::tie(m[1].query_id, m[1].donor_id, m[1].start, m[1].end),
            std::make_tuple(std::string("y"), std::string("x"), 1u, 5u));
  EXPECT_EQ(std::tie(m[2].query_id, m[2].donor_id, m[2].start, m[2].end),
            std::make_tuple(std::string("z"), std::string("x"), 11u, 15u));
  for (const auto& rec : m) EXPECT_NEAR(rec.r, 1.0, 1e-12);
  EXPECT_TRUE(report.skipped_queries.empty());
}

TEST(Scan, AutoWorkersOnUsageCollection) {
  auto u = testing::make_usage_collection();
  auto serial = scan(u.collection, config(5, 1.0, 1));
  auto parallel = scan(u.collection, config(5, 1.0, 0));
  EXPECT_EQ(parallel.matches, serial.matches);
}

TEST(Scan, LinearRampMatchesAllButSelfPosition) {
  std::vector<double> ramp(10);
  std::iota(ramp.begin(), ramp.end(), 1.0);
  SeriesCollection c({{"a", ramp, {}}});
  auto report = scan(c, config(3, 1.0));

  auto oracle = testing::oracle::brute_force_scan(c, 3, 1.0 - 1e-10);
  ASSERT_EQ(report.matches.size(), 7u);
  ASSERT_EQ(oracle.size(), 7u);
  for (std::size_t k = 0; k < 7; ++k) {
    EXPECT_EQ(report.matches[k].start, k + 1);
    EXPECT_EQ(report.matches[k].end, k + 3);
    EXPECT_EQ(report.matches[k].query_id, "a");
    EXPECT_EQ(report.matches[k].donor_id, "a");
  }
}

TEST(Scan, UnrelatedSeriesYieldNothing) {
  std::mt19937_64 rng(99);
  auto c = testing::random_collection(rng, 12, 20, 80);
  EXPECT_TRUE(scan(c, config(6, 1.0)).matches.empty());
}

TEST(Scan, EmptyCollectionIsAnError) {
  EXPECT_THROW(scan(SeriesCollection{}, config(5, 1.0)), ContractViolation);
}

TEST(Scan, InvalidConfig) {
  auto u = testing::make_usage_collection();
  EXPECT_THROW(scan(u.collection, config(5, 1.5)), ConfigError);
  EXPECT_THROW(scan(u.collection, config(5, 0.0)), ConfigError);
  auto cfg = config(5, 1e-12);
  EXPECT_THROW(scan(u.collection, cfg), ConfigError);
  cfg = config(5, 0.5);
  cfg.cutoff_tolerance = -1;
  EXPECT_THROW(scan(u.collection, cfg), ConfigError);
}

TEST(Scan, SkippedQueriesAreReported) {
  std::vector<Series> entries{
      {"short", {1, 2, 3}, {}},
      {"flat_tail", {5, 1, 4, 2, 2, 2, 2, 2}, {}},
      {"holey", {1, 5, 2, 8, 3, 0, 4}, {5}},
      {"fine", {1, 5, 2, 8, 3, 9, 4}, {}},
  };
  SeriesCollection c(std::move(entries));
  auto report = scan(c, config(4, 1.0));
  EXPECT_EQ(report.skipped_queries,
            (std::vector<SkippedQuery>{{"short", QuerySkip::kTooShort},
                                       {"flat_tail", QuerySkip::kZeroVarianceQuery},
                                       {"holey", QuerySkip::kMissingInQuery}}));
}

TEST(Scan, DonorWindowsOverMissingValuesAreIgnored) {
  std::vector<double> q{3, 1, 4, 1, 5};
  std::vector<double> donor{9, 3, 1, 4, 1, 5, 2, 3, 1, 4, 1, 5, 6};
  std::vector<double> query_series{2, 7, 3, 1, 4, 1, 5};
  SeriesCollection c({{"q", query_series, {}}, {"d", donor, {8}}});
  auto report = scan(c, config(5, 1.0));
  // copy at 2..6 is clean, copy at 8..12 crosses the hole at position 9
  ASSERT_EQ(report.matches.size(), 1u);
  EXPECT_EQ(report.matches[0].start, 2u);
}

TEST(Scan, MatchesAreSoundAndCompleteOnSmallInstances) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<std::size_t> n(2, 10);
    const std::size_t h = trial % 2 == 0 ? 4 : 6;
    auto c = planted_collection(rng, n(rng), h + 2, 60, h);
    for (double cutoff : {1.0, 0.9}) {
      auto report = scan(c, config(h, cutoff));
      auto oracle = testing::oracle::brute_force_scan(c, h, cutoff - 1e-10);
      std::vector<MatchRecord> oracle_records;
      for (const auto& o : oracle) {
        oracle_records.push_back({o.query_id, o.donor_id, o.start, o.end, o.r});
      }
      EXPECT_EQ(keys_of(report.matches), keys_of(oracle_records));
      for (const auto& m : report.matches) {
        const auto& qs = c.at(m.query_id).values;
        const auto& ds = c.at(m.donor_id).values;
        auto r = testing::oracle::textbook_pearson(
            std::span<const double>(qs).subspan(qs.size() - h),
            std::span<const double>(ds).subspan(m.start - 1, h));
        ASSERT_TRUE(r);
        EXPECT_GE(std::fabs(*r), cutoff - 1e-9);
        EXPECT_EQ(m.end - m.start + 1, h);
      }
    }
  }
}

TEST(Scan, SelfPositionExclusionDropsExactlyOnePerfectCandidate) {
  std::mt19937_64 rng(321);
  auto c = planted_collection(rng, 8, 10, 50, 5);
  auto cfg = config(5, 0.95);
  auto report = scan(c, cfg);
  for (const Series& s : c) {
    auto q = extract_query(s.values, cfg.h);
    auto self = sliding_correlations(q->values, s, cfg.h);
    ASSERT_EQ(self.offsets.back(), s.size() - 4);
    EXPECT_NEAR(self.r_values.back(), 1.0, 1e-12);
    std::size_t kept_self = 0, candidates = 0;
    for (double r : self.r_values) candidates += std::fabs(r) >= cfg.threshold();
    for (const auto& m : report.matches) {
      kept_self += m.query_id == s.id && m.donor_id == s.id;
      EXPECT_FALSE(m.query_id == m.donor_id && m.end == c.at(m.donor_id).size());
    }
    EXPECT_EQ(kept_self, candidates - 1);
  }
}

TEST(Scan, LoweringCutoffNeverRemovesMatches) {
  std::mt19937_64 rng(8);
  auto c = planted_collection(rng, 10, 20, 60, 5);
  std::set<Key> previous;
  for (double cutoff : {1.0, 0.99, 0.95, 0.9, 0.8, 0.6}) {
    auto current = keys_of(scan(c, config(5, cutoff)).matches);
    EXPECT_TRUE(std::includes(current.begin(), current.end(), previous.begin(),
                              previous.end()))
        << cutoff;
    previous = std::move(current);
  }
}

TEST(Scan, WorkerCountDoesNotChangeOutput) {
  std::mt19937_64 rng(50);
  auto c = planted_collection(rng, 50, 20, 120, 6);
  auto one = scan(c, config(6, 0.9, 1));
  auto eight = scan(c, config(6, 0.9, 8));
  EXPECT_FALSE(one.matches.empty());
  EXPECT_EQ(one.matches, eight.matches);
  EXPECT_EQ(one.skipped_queries, eight.skipped_queries);
}

TEST(Scan, OrderingFollowsCollectionOrder) {
  std::mt19937_64 rng(51);
  auto c = planted_collection(rng, 15, 20, 60, 4);
  auto report = scan(c, config(4, 0.9));
  for (std::size_t k = 1; k < report.matches.size(); ++k) {
    const auto& a = report.matches[k - 1];
    const auto& b = report.matches[k];
    auto key = [&](const MatchRecord& m) {
      return std::make_tuple(*c.index_of(m.query_id), *c.index_of(m.donor_id),
                             m.start);
    };
    EXPECT_LT(key(a), key(b));
  }
}

}  // namespace
}  // namespace tsleakscan
