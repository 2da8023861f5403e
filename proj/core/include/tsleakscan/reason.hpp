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

#ifndef TSLEAKSCAN_REASON_HPP_
#define TSLEAKSCAN_REASON_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsleakscan/collection.hpp"
#include "tsleakscan/scanner.hpp"

namespace tsleakscan {

// Least-squares fit w ~ m * q + c over one matched window.
struct AffineFit {
  double m = 0.0;
  double c = 0.0;
  double max_residual = 0.0;
  // max(1, max |w|); tolerances on c and on the residual scale with it.
  double window_scale = 1.0;
};

enum class ReasonKind {
  kExactMatch,
  kAddConstant,
  kMultiplyConstant,
  kAffineTransform,
  kNegativeAffine,
  kHighCorrelationOnly,
};

inline constexpr std::array kAllReasonKinds = {
    ReasonKind::kExactMatch,      ReasonKind::kAddConstant,
    ReasonKind::kMultiplyConstant, ReasonKind::kAffineTransform,
    ReasonKind::kNegativeAffine,  ReasonKind::kHighCorrelationOnly,
};

// Stable identifier used in JSON/CSV reports, e.g. "exact_match".
std::string_view to_string(ReasonKind kind);
// Short label used in human summaries, e.g. "exact".
std::string_view summary_label(ReasonKind kind);
std::optional<ReasonKind> parse_reason_kind(std::string_view text);

struct ReasonConfig {
  double slope_tol = 1e-8;      // |m - 1| <= slope_tol means m == 1
  double intercept_tol = 1e-8;  // |c| <= intercept_tol * scale(w) means c == 0
  double affine_tol = 1e-8;     // residual <= affine_tol * scale(w) is affine
  // Length of the test period to read off a donor; defaults to the scan's h.
  std::optional<std::size_t> horizon;

  // Throws ConfigError on non-positive tolerances or a zero horizon.
  void validate() const;
  std::size_t resolved_horizon(std::size_t h) const;
};

struct ReasonedMatch {
  MatchRecord base;
  AffineFit fit;
  ReasonKind kind = ReasonKind::kHighCorrelationOnly;
  bool useful = false;
  // Present iff useful. Donor values after the matched window, mapped back
  // onto the query's scale through the inverse of the fitted transform.
  // Missing donor positions come through as NaN.
  std::optional<std::vector<double>> predicted_test;
  std::string provenance_note;
};

struct ReasonSummary {
  std::size_t total = 0;
  std::size_t useful = 0;
  std::array<std::size_t, kAllReasonKinds.size()> by_kind{};

  std::size_t count(ReasonKind kind) const {
    return by_kind[static_cast<std::size_t>(kind)];
  }
};

struct ReasonedReport {
  ScanConfig config;
  std::size_t horizon = 0;
  std::vector<ReasonedMatch> matches;
  std::vector<SkippedQuery> skipped_queries;
  ReasonSummary summary;
};

// Throws ContractViolation when lengths differ or q is constant.
AffineFit fit_affine(std::span<const double> q, std::span<const double> w);

// Total over its inputs: every fit maps to exactly one kind. `r` is only
// consulted when the fit itself is not finite.
ReasonKind classify(const AffineFit& fit, double r, const ReasonConfig& cfg);

struct Usefulness {
  bool useful = false;
  std::optional<std::vector<double>> predicted_test;
};

// Useful iff match.end + horizon <= donor length; a pure index test.
// `h` is the segment length of the scan that produced the match.
Usefulness assess_usefulness(const MatchRecord& match,
                             const SeriesCollection& collection,
                             const ReasonConfig& cfg, WindowLength h);
Usefulness assess_usefulness(const MatchRecord& match, const Series& donor,
                             const AffineFit& fit, ReasonKind kind,
                             std::size_t horizon);

// One ReasonedMatch per MatchRecord, same order. Throws ConsistencyError
// when the report mentions a series the collection does not contain.
ReasonedReport reason_report(const LeakReport& report,
                             const SeriesCollection& collection,
                             const ReasonConfig& cfg = {});

}  // namespace tsleakscan

#endif  // TSLEAKSCAN_REASON_HPP_
