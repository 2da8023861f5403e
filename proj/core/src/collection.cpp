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

#include "tsleakscan/collection.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tsleakscan/errors.hpp"

namespace tsleakscan {

std::string_view to_string(InputFormat format) {
  switch (format) {
    case InputFormat::kWideCsv:
      return "wide-csv";
    case InputFormat::kLongCsv:
      return "long-csv";
    case InputFormat::kJson:
      return "json";
  }
  return "unknown";
}

std::optional<InputFormat> parse_input_format(std::string_view text) {
  if (text == "wide" || text == "wide-csv") return InputFormat::kWideCsv;
  if (text == "long" || text == "long-csv") return InputFormat::kLongCsv;
  if (text == "json") return InputFormat::kJson;
  return std::nullopt;
}

bool Series::is_missing(std::size_t pos) const {
  return std::binary_search(missing.begin(), missing.end(), pos);
}

bool Series::overlaps_missing(std::size_t first, std::size_t count) const {
  auto it = std::lower_bound(missing.begin(), missing.end(), first);
  return it != missing.end() && *it < first + count;
}

SeriesCollection::SeriesCollection(std::vector<Series> entries,
                                   std::string source_path,
                                   InputFormat created_from)
    : entries_(std::move(entries)),
      source_path_(std::move(source_path)),
      created_from_(created_from) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    Series& s = entries_[i];
    if (!index_.emplace(s.id, i).second) {
      throw ValidationError(fmt::format("duplicate series id '{}'", s.id));
    }
    if (s.values.empty()) {
      throw ValidationError(fmt::format("series '{}' is empty", s.id));
    }
    std::sort(s.missing.begin(), s.missing.end());
    s.missing.erase(std::unique(s.missing.begin(), s.missing.end()),
                    s.missing.end());
    if (!s.missing.empty() && s.missing.back() >= s.values.size()) {
      throw ValidationError(fmt::format(
          "series '{}': missing position {} is out of range", s.id,
          s.missing.back() + 1));
    }
    for (std::size_t pos : s.missing) s.values[pos] = 0.0;
    for (std::size_t pos = 0; pos < s.values.size(); ++pos) {
      if (!std::isfinite(s.values[pos])) {
        throw ValidationError(fmt::format(
            "series '{}': non-finite value at position {}", s.id, pos + 1));
      }
    }
  }
}

std::optional<std::size_t> SeriesCollection::index_of(
    std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Series& SeriesCollection::at(std::string_view id) const {
  auto idx = index_of(id);
  if (!idx) {
    throw ConsistencyError(
        fmt::format("series '{}' is not part of the collection", id));
  }
  return entries_[*idx];
}

}  // namespace tsleakscan
