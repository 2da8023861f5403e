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

#include "tsleakscan/scanner.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "tsleakscan/errors.hpp"

namespace tsleakscan {
namespace {

struct QueryResult {
  std::vector<MatchRecord> matches;
  std::optional<QuerySkip> skipped;
};

QueryResult scan_query(const SeriesCollection& collection, std::size_t qi,
                       const ScanConfig& cfg) {
  QueryResult result;
  const Series& series = collection[qi];
  auto query = extract_query(series.values, cfg.h);
  if (!query) {
    result.skipped = QuerySkip::kTooShort;
    return result;
  }
  if (series.overlaps_missing(query->first - 1, cfg.h)) {
    result.skipped = QuerySkip::kMissingInQuery;
    return result;
  }
  if (is_constant(query->values)) {
    result.skipped = QuerySkip::kZeroVarianceQuery;
    return result;
  }

  const double threshold = cfg.threshold();
  for (std::size_t dj = 0; dj < collection.size(); ++dj) {
    const Series& donor = collection[dj];
    if (donor.size() < cfg.h) continue;
    SlidingProfile profile = sliding_correlations(query->values, donor, cfg.h);
    for (std::size_t k = 0; k < profile.offsets.size(); ++k) {
      const double r = profile.r_values[k];
      if (std::fabs(r) < threshold) continue;
      const std::size_t start = profile.offsets[k];
      const std::size_t end = start + cfg.h - 1;
      if (dj == qi && end == series.size()) continue;  // the query itself
      result.matches.push_back({series.id, donor.id, start, end, r});
    }
  }
  return result;
}

}  // namespace

void ScanConfig::validate() const {
  if (!(cutoff > 0.0 && cutoff <= 1.0)) {
    throw ConfigError(fmt::format("cutoff must be in (0,1], got {}", cutoff));
  }
  if (!(cutoff_tolerance >= 0.0)) {
    throw ConfigError("cutoff tolerance must be non-negative");
  }
  if (!(cutoff - cutoff_tolerance > 0.0)) {
    throw ConfigError("cutoff minus its tolerance must stay positive");
  }
}

std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::optional<QuerySegment> extract_query(std::span<const double> series,
                                          WindowLength h) {
  if (series.size() < h.value()) return std::nullopt;
  const std::size_t first = series.size() - h.value();
  return QuerySegment{series.subspan(first), first + 1, series.size()};
}

std::string_view to_string(QuerySkip reason) {
  switch (reason) {
    case QuerySkip::kTooShort:
      return "too-short";
    case QuerySkip::kZeroVarianceQuery:
      return "zero-variance-query";
    case QuerySkip::kMissingInQuery:
      return "missing-in-query";
  }
  return "unknown";
}

std::optional<QuerySkip> parse_query_skip(std::string_view text) {
  for (auto reason : {QuerySkip::kTooShort, QuerySkip::kZeroVarianceQuery,
                      QuerySkip::kMissingInQuery}) {
    if (to_string(reason) == text) return reason;
  }
  return std::nullopt;
}

LeakReport scan(const SeriesCollection& collection, const ScanConfig& cfg) {
  cfg.validate();
  if (collection.empty()) {
    throw ContractViolation("empty-collection: nothing to scan");
  }

  const std::size_t n = collection.size();
  std::vector<QueryResult> results(n);
  const std::size_t workers = std::min(resolve_workers(cfg.workers), n);

  if (workers <= 1) {
    for (std::size_t qi = 0; qi < n; ++qi) {
      results[qi] = scan_query(collection, qi, cfg);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t qi = next++; qi < n; qi = next++) {
            try {
              results[qi] = scan_query(collection, qi, cfg);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  LeakReport report;
  report.config = cfg;
  for (std::size_t qi = 0; qi < n; ++qi) {
    auto& r = results[qi];
    if (r.skipped) {
      report.skipped_queries.push_back({collection[qi].id, *r.skipped});
    }
    report.matches.insert(report.matches.end(),
                          std::make_move_iterator(r.matches.begin()),
                          std::make_move_iterator(r.matches.end()));
  }
  return report;
}

}  // namespace tsleakscan
