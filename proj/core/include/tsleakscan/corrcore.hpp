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

#ifndef TSLEAKSCAN_CORRCORE_HPP_
#define TSLEAKSCAN_CORRCORE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsleakscan/collection.hpp"

namespace tsleakscan {

// Segment length used for matching. Correlation over fewer than three points
// carries no evidence (any two distinct points correlate at +-1).
class WindowLength {
 public:
  static constexpr std::size_t kMinimum = 3;

  // Throws ConfigError when h < kMinimum.
  explicit WindowLength(std::size_t h);

  std::size_t value() const { return h_; }
  operator std::size_t() const { return h_; }

 private:
  std::size_t h_;
};

enum class WindowSkip { kZeroVariance, kMissingOverlap };

std::string_view to_string(WindowSkip reason);

struct SkippedWindow {
  std::size_t offset;  // 1-based
  WindowSkip reason;

  friend bool operator==(const SkippedWindow&, const SkippedWindow&) = default;
};

// Correlations of one query against every length-h window of a target.
// offsets.size() + skipped.size() == target length - h + 1.
struct SlidingProfile {
  std::string target_id;
  std::vector<std::size_t> offsets;  // 1-based window starts
  std::vector<double> r_values;      // aligned with offsets, in [-1, 1]
  std::vector<SkippedWindow> skipped;
};

// True when every element equals the first one. This is the library-wide
// definition of zero variance.
bool is_constant(std::span<const double> values);

// Pearson correlation, clamped into [-1, 1]. Symmetric in its arguments.
// Returns nullopt when either vector is constant. Throws ContractViolation
// on length mismatch or fewer than two elements.
std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b);

// Slides `query` over `target` one step at a time. Window means and
// variances come from prefix sums of the target (O(1) per window); the
// cross term is accumulated per window against the centered query. Windows
// whose prefix-sum variance is not trustworthy are recomputed exactly.
//
// `missing` lists 0-based target positions to avoid. Throws
// ContractViolation when the target is shorter than h, the query length is
// not h, or the query is constant.
SlidingProfile sliding_correlations(std::span<const double> query,
                                    std::span<const double> target,
                                    WindowLength h,
                                    std::span<const std::size_t> missing = {});
SlidingProfile sliding_correlations(std::span<const double> query,
                                    const Series& target, WindowLength h);

// Reference implementation: recomputes pearson() for every window with no
// shared state. Used by tests and benchmarks to check sliding_correlations.
SlidingProfile naive_sliding_oracle(std::span<const double> query,
                                    std::span<const double> target,
                                    WindowLength h,
                                    std::span<const std::size_t> missing = {});
SlidingProfile naive_sliding_oracle(std::span<const double> query,
                                    const Series& target, WindowLength h);

}  // namespace tsleakscan

#endif  // TSLEAKSCAN_CORRCORE_HPP_
