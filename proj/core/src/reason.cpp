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

#include "tsleakscan/reason.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "tsleakscan/corrcore.hpp"
#include "tsleakscan/errors.hpp"

namespace tsleakscan {
namespace {

struct KindNames {
  ReasonKind kind;
  std::string_view id;
  std::string_view label;
};

constexpr KindNames kKindNames[] = {
    {ReasonKind::kExactMatch, "exact_match", "exact"},
    {ReasonKind::kAddConstant, "add_constant", "add-constant"},
    {ReasonKind::kMultiplyConstant, "multiply_constant", "multiply-constant"},
    {ReasonKind::kAffineTransform, "affine_transform", "affine"},
    {ReasonKind::kNegativeAffine, "negative_affine", "negative-affine"},
    {ReasonKind::kHighCorrelationOnly, "high_correlation_only",
     "high-correlation"},
};

const KindNames& names_of(ReasonKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

struct MatchedSegments {
  const Series& query;
  const Series& donor;
  std::span<const double> query_values;
  std::span<const double> window;
};

MatchedSegments locate(const MatchRecord& match,
                       const SeriesCollection& collection, std::size_t h) {
  const Series& query = collection.at(match.query_id);
  const Series& donor = collection.at(match.donor_id);
  if (query.size() < h) {
    throw ConsistencyError(fmt::format(
        "query '{}' has {} observations, fewer than h = {}", query.id,
        query.size(), h));
  }
  if (match.start < 1 || match.end != match.start + h - 1 ||
      match.end > donor.size()) {
    throw ConsistencyError(fmt::format(
        "match {} -> {}: window {}-{} does not fit donor of length {} with h = {}",
        match.query_id, match.donor_id, match.start, match.end, donor.size(),
        h));
  }
  return {query, donor,
          std::span<const double>(query.values).subspan(query.size() - h),
          std::span<const double>(donor.values).subspan(match.start - 1, h)};
}

std::string provenance(const MatchRecord& match, std::size_t donor_length,
                       std::size_t horizon, bool useful) {
  if (useful) {
    return fmt::format("donor '{}' has observations {}-{}", match.donor_id,
                       match.end + 1, match.end + horizon);
  }
  return fmt::format(
      "donor '{}' ends at observation {}; observations {}-{} are not available",
      match.donor_id, donor_length, match.end + 1, match.end + horizon);
}

}  // namespace

std::string_view to_string(ReasonKind kind) { return names_of(kind).id; }

std::string_view summary_label(ReasonKind kind) { return names_of(kind).label; }

std::optional<ReasonKind> parse_reason_kind(std::string_view text) {
  for (const auto& n : kKindNames) {
    if (n.id == text) return n.kind;
  }
  return std::nullopt;
}

void ReasonConfig::validate() const {
  if (!(slope_tol > 0.0) || !(intercept_tol > 0.0) || !(affine_tol > 0.0)) {
    throw ConfigError("reason tolerances must be positive");
  }
  if (horizon && *horizon == 0) {
    throw ConfigError("horizon must be a positive integer");
  }
}

std::size_t ReasonConfig::resolved_horizon(std::size_t h) const {
  return horizon.value_or(h);
}

AffineFit fit_affine(std::span<const double> q, std::span<const double> w) {
  if (q.size() != w.size() || q.empty()) {
    throw ContractViolation(fmt::format(
        "fit_affine: length mismatch ({} vs {})", q.size(), w.size()));
  }
  if (is_constant(q)) {
    throw ContractViolation("fit_affine: query segment has zero variance");
  }
  const auto n = static_cast<double>(q.size());
  double mq = 0.0, mw = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    mq += q[i];
    mw += w[i];
  }
  mq /= n;
  mw /= n;
  double sqq = 0.0, sqw = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    sqq += (q[i] - mq) * (q[i] - mq);
    sqw += (q[i] - mq) * (w[i] - mw);
  }

  AffineFit fit;
  fit.m = sqw / sqq;
  fit.c = mw - fit.m * mq;
  for (std::size_t i = 0; i < q.size(); ++i) {
    fit.max_residual =
        std::max(fit.max_residual, std::fabs(w[i] - (fit.m * q[i] + fit.c)));
    fit.window_scale = std::max(fit.window_scale, std::fabs(w[i]));
  }
  return fit;
}

ReasonKind classify(const AffineFit& fit, double r, const ReasonConfig& cfg) {
  if (!std::isfinite(fit.m) || !std::isfinite(fit.c) || std::isnan(r)) {
    return ReasonKind::kHighCorrelationOnly;
  }
  const double scale = std::max(1.0, fit.window_scale);
  if (!(fit.max_residual <= cfg.affine_tol * scale)) {
    return ReasonKind::kHighCorrelationOnly;
  }
  const bool unit_slope = std::fabs(fit.m - 1.0) <= cfg.slope_tol;
  const bool zero_intercept = std::fabs(fit.c) <= cfg.intercept_tol * scale;
  if (unit_slope) {
    return zero_intercept ? ReasonKind::kExactMatch : ReasonKind::kAddConstant;
  }
  if (fit.m < 0.0) return ReasonKind::kNegativeAffine;
  return zero_intercept ? ReasonKind::kMultiplyConstant
                        : ReasonKind::kAffineTransform;
}

Usefulness assess_usefulness(const MatchRecord& match, const Series& donor,
                             const AffineFit& fit, ReasonKind kind,
                             std::size_t horizon) {
  if (horizon == 0) throw ConfigError("horizon must be a positive integer");
  Usefulness out;
  out.useful = match.end + horizon <= donor.size();
  if (!out.useful) return out;

  std::vector<double> predicted;
  predicted.reserve(horizon);
  for (std::size_t pos = match.end; pos < match.end + horizon; ++pos) {
    if (donor.is_missing(pos)) {
      predicted.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double v = donor.values[pos];
    predicted.push_back(kind == ReasonKind::kExactMatch ? v
                                                        : (v - fit.c) / fit.m);
  }
  out.predicted_test = std::move(predicted);
  return out;
}

Usefulness assess_usefulness(const MatchRecord& match,
                             const SeriesCollection& collection,
                             const ReasonConfig& cfg, WindowLength h) {
  cfg.validate();
  auto seg = locate(match, collection, h);
  AffineFit fit = fit_affine(seg.query_values, seg.window);
  ReasonKind kind = classify(fit, match.r, cfg);
  return assess_usefulness(match, seg.donor, fit, kind,
                           cfg.resolved_horizon(h));
}

ReasonedReport reason_report(const LeakReport& report,
                             const SeriesCollection& collection,
                             const ReasonConfig& cfg) {
  cfg.validate();
  const std::size_t h = report.config.h;
  ReasonedReport out;
  out.config = report.config;
  out.horizon = cfg.resolved_horizon(h);
  out.skipped_queries = report.skipped_queries;
  out.matches.reserve(report.matches.size());

  for (const MatchRecord& match : report.matches) {
    auto seg = locate(match, collection, h);
    ReasonedMatch rm;
    rm.base = match;
    rm.fit = fit_affine(seg.query_values, seg.window);
    rm.kind = classify(rm.fit, match.r, cfg);
    auto usefulness =
        assess_usefulness(match, seg.donor, rm.fit, rm.kind, out.horizon);
    rm.useful = usefulness.useful;
    rm.predicted_test = std::move(usefulness.predicted_test);
    rm.provenance_note =
        provenance(match, seg.donor.size(), out.horizon, rm.useful);

    ++out.summary.total;
    ++out.summary.by_kind[static_cast<std::size_t>(rm.kind)];
    if (rm.useful) ++out.summary.useful;
    out.matches.push_back(std::move(rm));
  }
  return out;
}

}  // namespace tsleakscan
