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

#include "tsleakscan/corrcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "tsleakscan/errors.hpp"

namespace tsleakscan {
namespace {

double clamp_unit(double r) { return std::clamp(r, -1.0, 1.0); }

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

void check_sliding_args(std::span<const double> query,
                        std::span<const double> target, WindowLength h) {
  if (query.size() != h.value()) {
    throw ContractViolation(fmt::format(
        "query has {} observations, expected h = {}", query.size(), h.value()));
  }
  if (target.size() < h.value()) {
    throw ContractViolation(fmt::format(
        "target has {} observations, shorter than h = {}", target.size(),
        h.value()));
  }
  if (is_constant(query)) {
    throw ContractViolation("query segment has zero variance");
  }
}

SlidingProfile empty_profile(std::size_t windows) {
  SlidingProfile p;
  p.offsets.reserve(windows);
  p.r_values.reserve(windows);
  return p;
}

}  // namespace

WindowLength::WindowLength(std::size_t h) : h_(h) {
  if (h < kMinimum) {
    throw ConfigError(
        fmt::format("segment length h must be at least {}, got {}", kMinimum, h));
  }
}

std::string_view to_string(WindowSkip reason) {
  switch (reason) {
    case WindowSkip::kZeroVariance:
      return "zero-variance-window";
    case WindowSkip::kMissingOverlap:
      return "missing-overlap";
  }
  return "unknown";
}

bool is_constant(std::span<const double> values) {
  return std::adjacent_find(values.begin(), values.end(),
                            std::not_equal_to<>()) == values.end();
}

std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ContractViolation(fmt::format(
        "pearson: length mismatch ({} vs {})", a.size(), b.size()));
  }
  if (a.size() < 2) {
    throw ContractViolation("pearson: need at least two observations");
  }
  if (is_constant(a) || is_constant(b)) return std::nullopt;

  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return clamp_unit(sab / (std::sqrt(saa) * std::sqrt(sbb)));
}

SlidingProfile sliding_correlations(std::span<const double> query,
                                    std::span<const double> target,
                                    WindowLength h,
                                    std::span<const std::size_t> missing) {
  check_sliding_args(query, target, h);
  const std::size_t n = target.size();
  const std::size_t len = h.value();
  const std::size_t windows = n - len + 1;

  std::vector<double> centered_query(len);
  const double query_mean = mean_of(query);
  double query_ss = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    centered_query[i] = query[i] - query_mean;
    query_ss += centered_query[i] * centered_query[i];
  }
  const double query_norm = std::sqrt(query_ss);

  std::vector<char> is_missing(n, 0);
  for (std::size_t pos : missing) {
    if (pos < n) is_missing[pos] = 1;
  }

  // Prefix sums of the target shifted by its mean, in extended precision,
  // restarted every `block` observations. With block >= h a window spans at
  // most two blocks, so its roundoff depends only on those blocks.
  double shift = 0.0;
  {
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_missing[i]) {
        total += target[i];
        ++count;
      }
    }
    if (count > 0) shift = total / static_cast<double>(count);
  }
  const std::size_t block = std::max<std::size_t>(len, 64);
  const std::size_t blocks = n / block + 1;
  std::vector<long double> sum(n + 1, 0.0L), sum_sq(n + 1, 0.0L);
  std::vector<long double> block_sum(blocks, 0.0L), block_sum_sq(blocks, 0.0L),
      block_abs(blocks, 0.0L);
  std::vector<std::size_t> missing_count(n + 1, 0);
  for (std::size_t i = 0, b = 0, in_block = 0; i < n; ++i) {
    const long double d =
        is_missing[i] ? 0.0L
                      : static_cast<long double>(target[i]) - shift;
    block_sum[b] += d;
    block_sum_sq[b] += d * d;
    block_abs[b] += std::fabs(d);
    if (++in_block == block) {
      ++b;
      in_block = 0;
    } else {
      sum[i + 1] = block_sum[b];
      sum_sq[i + 1] = block_sum_sq[b];
    }
    missing_count[i + 1] = missing_count[i] + (is_missing[i] ? 1 : 0);
  }

  constexpr long double kEps = std::numeric_limits<long double>::epsilon();
  // Relative accuracy demanded of the window variance before it is used.
  constexpr double kTrust = 1e-12;
  constexpr double kEpsD = std::numeric_limits<double>::epsilon();
  const double inv_len = 1.0 / static_cast<double>(len);
  const long double gamma = 2.0L * static_cast<long double>(block + 3) * kEps;

  SlidingProfile profile = empty_profile(windows);
  // Block of the window start, and offset of the window end within the
  // following block (windows never reach past it).
  std::size_t bs = 0;
  std::size_t start_in_block = 0;
  for (std::size_t s = 0; s < windows; ++s, ++start_in_block) {
    if (start_in_block == block) {
      ++bs;
      start_in_block = 0;
    }
    const std::size_t e = s + len;
    const bool crosses = start_in_block + len >= block;
    if (missing_count[e] != missing_count[s]) {
      profile.skipped.push_back({s + 1, WindowSkip::kMissingOverlap});
      continue;
    }
    long double s1 = sum[e] - sum[s];
    long double s2 = sum_sq[e] - sum_sq[s];
    long double abs1 = block_abs[bs];
    long double abs2 = block_sum_sq[bs];
    if (crosses) {
      s1 += block_sum[bs];
      s2 += block_sum_sq[bs];
      if (bs + 1 < blocks) {
        abs1 += block_abs[bs + 1];
        abs2 += block_sum_sq[bs + 1];
      }
    }
    // Past this point the window sums are rounded to double; the bound
    // carries that rounding too.
    const double d1 = static_cast<double>(s1);
    const double d2 = static_cast<double>(s2);
    const double s1_err = static_cast<double>(gamma * abs1) + kEpsD * std::fabs(d1);
    const double s2_err = static_cast<double>(gamma * abs2) + kEpsD * d2;
    const double d1_sq = d1 * d1 * inv_len;
    const double window_ss = d2 - d1_sq;
    const double ss_err = s2_err +
                          (2.0 * std::fabs(d1) * s1_err + s1_err * s1_err) * inv_len +
                          4.0 * kEpsD * (d2 + d1_sq);

    const auto window = target.subspan(s, len);
    double window_mean = 0.0;
    double window_norm = 0.0;
    if (window_ss * kTrust > ss_err) {
      window_mean = shift + d1 * inv_len;
      window_norm = std::sqrt(window_ss);
    } else {
      // Prefix sums cannot resolve this window; recompute it directly.
      if (is_constant(window)) {
        profile.skipped.push_back({s + 1, WindowSkip::kZeroVariance});
        continue;
      }
      window_mean = mean_of(window);
      double ss = 0.0;
      for (double v : window) ss += (v - window_mean) * (v - window_mean);
      if (ss == 0.0) {
        profile.skipped.push_back({s + 1, WindowSkip::kZeroVariance});
        continue;
      }
      window_norm = std::sqrt(ss);
    }

    // Four partial sums keep the loop from serializing on one add chain.
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
      for (std::size_t j = 0; j < 4; ++j) {
        acc[j] += centered_query[i + j] * (window[i + j] - window_mean);
      }
    }
    for (; i < len; ++i) acc[0] += centered_query[i] * (window[i] - window_mean);
    const double cross = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    profile.offsets.push_back(s + 1);
    profile.r_values.push_back(clamp_unit(cross / (query_norm * window_norm)));
  }
  return profile;
}

SlidingProfile sliding_correlations(std::span<const double> query,
                                    const Series& target, WindowLength h) {
  SlidingProfile p = sliding_correlations(query, target.values, h, target.missing);
  p.target_id = target.id;
  return p;
}

SlidingProfile naive_sliding_oracle(std::span<const double> query,
                                    std::span<const double> target,
                                    WindowLength h,
                                    std::span<const std::size_t> missing) {
  check_sliding_args(query, target, h);
  const std::size_t len = h.value();
  const std::size_t windows = target.size() - len + 1;
  SlidingProfile profile = empty_profile(windows);
  for (std::size_t s = 0; s < windows; ++s) {
    bool hole = std::any_of(missing.begin(), missing.end(), [&](std::size_t p) {
      return p >= s && p < s + len;
    });
    if (hole) {
      profile.skipped.push_back({s + 1, WindowSkip::kMissingOverlap});
      continue;
    }
    auto r = pearson(query, target.subspan(s, len));
    if (!r) {
      profile.skipped.push_back({s + 1, WindowSkip::kZeroVariance});
      continue;
    }
    profile.offsets.push_back(s + 1);
    profile.r_values.push_back(*r);
  }
  return profile;
}

SlidingProfile naive_sliding_oracle(std::span<const double> query,
                                    const Series& target, WindowLength h) {
  SlidingProfile p = naive_sliding_oracle(query, target.values, h, target.missing);
  p.target_id = target.id;
  return p;
}

}  // namespace tsleakscan
