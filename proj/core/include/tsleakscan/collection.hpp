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

#ifndef TSLEAKSCAN_COLLECTION_HPP_
#define TSLEAKSCAN_COLLECTION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tsleakscan {

enum class InputFormat { kWideCsv, kLongCsv, kJson };

std::string_view to_string(InputFormat format);
// Accepts "wide", "long", "json" and the "-csv" suffixed spellings.
std::optional<InputFormat> parse_input_format(std::string_view text);

enum class MissingPolicy {
  kReject,     // any missing value aborts ingestion
  kSplitSkip,  // admit the series, remember where the holes are
};

// One univariate training series. Positions listed in `missing` (0-based,
// sorted, unique) hold a 0.0 placeholder in `values`; consumers must consult
// `missing` before reading a value there.
struct Series {
  std::string id;
  std::vector<double> values;
  std::vector<std::size_t> missing;

  std::size_t size() const { return values.size(); }
  bool has_missing() const { return !missing.empty(); }
  bool is_missing(std::size_t pos) const;
  // True if any position in [first, first + count) is missing.
  bool overlaps_missing(std::size_t first, std::size_t count) const;
};

// Ordered, named set of series. Immutable once built; entry order is input
// order and drives every downstream ordering (report groups, matrix axes).
class SeriesCollection {
 public:
  SeriesCollection() = default;
  // Throws ValidationError on duplicate ids, empty series, non-finite values
  // or out-of-range missing positions.
  SeriesCollection(std::vector<Series> entries, std::string source_path = {},
                   InputFormat created_from = InputFormat::kLongCsv);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Series& operator[](std::size_t i) const { return entries_[i]; }
  std::span<const Series> entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::optional<std::size_t> index_of(std::string_view id) const;
  // Throws ConsistencyError when the id is unknown.
  const Series& at(std::string_view id) const;

  const std::string& source_path() const { return source_path_; }
  InputFormat created_from() const { return created_from_; }

 private:
  std::vector<Series> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::string source_path_;
  InputFormat created_from_ = InputFormat::kLongCsv;
};

}  // namespace tsleakscan

#endif  // TSLEAKSCAN_COLLECTION_HPP_
