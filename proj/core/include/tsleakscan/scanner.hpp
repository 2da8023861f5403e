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

#ifndef TSLEAKSCAN_SCANNER_HPP_
#define TSLEAKSCAN_SCANNER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsleakscan/collection.hpp"
#include "tsleakscan/corrcore.hpp"

namespace tsleakscan {

struct ScanConfig {
  WindowLength h{6};
  // A window matches when |r| >= cutoff - cutoff_tolerance. The tolerance
  // keeps exact copies alive at cutoff = 1 despite roundoff.
  double cutoff = 1.0;
  double cutoff_tolerance = 1e-10;
  // Worker threads; 0 selects std::thread::hardware_concurrency().
  std::size_t workers = 1;

  // Throws ConfigError unless 0 < cutoff <= 1, tolerance >= 0 and
  // cutoff - tolerance > 0.
  void validate() const;
  double threshold() const { return cutoff - cutoff_tolerance; }
};

std::size_t resolve_workers(std::size_t requested);

// Terminal segment of a series; positions are 1-based and inclusive.
struct QuerySegment {
  std::span<const double> values;
  std::size_t first;
  std::size_t last;
};

// The final h observations, or nullopt when the series is shorter than h.
std::optional<QuerySegment> extract_query(std::span<const double> series,
                                          WindowLength h);

struct MatchRecord {
  std::string query_id;
  std::string donor_id;
  std::size_t start;  // 1-based index into the donor
  std::size_t end;    // inclusive, end = start + h - 1
  double r;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

enum class QuerySkip { kTooShort, kZeroVarianceQuery, kMissingInQuery };

std::string_view to_string(QuerySkip reason);
std::optional<QuerySkip> parse_query_skip(std::string_view text);

struct SkippedQuery {
  std::string id;
  QuerySkip reason;

  friend bool operator==(const SkippedQuery&, const SkippedQuery&) = default;
};

// Output of a scan. Matches are grouped by query in collection order; within
// a group they are ordered by donor collection order, then start. Only
// queries with at least one match contribute entries.
struct LeakReport {
  ScanConfig config;
  std::vector<MatchRecord> matches;
  std::vector<SkippedQuery> skipped_queries;
};

// Matches every series' terminal segment against every window of every
// series, including its own. The single trivial window where a query meets
// itself (same series, end = series length) is dropped; other same-series
// hits are kept as repeating-pattern leaks. Work is split by query across
// cfg.workers threads and the result is identical for any worker count.
//
// Throws ContractViolation for an empty collection and ConfigError for an
// invalid configuration.
LeakReport scan(const SeriesCollection& collection, const ScanConfig& cfg);

}  // namespace tsleakscan

#endif  // TSLEAKSCAN_SCANNER_HPP_
