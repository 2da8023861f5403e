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

#ifndef TSLEAKSCAN_INGEST_HPP_
#define TSLEAKSCAN_INGEST_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tsleakscan/collection.hpp"

namespace tsleakscan {

// Reads a collection from disk.
//
//   wide CSV  header row of ids, one column per series; trailing empty
//             cells pad shorter series, interior empty cells are missing.
//   long CSV  header `series_id,index,value`; 1-based contiguous index per
//             series. Collection order is order of first appearance.
//   JSON      object id -> array of numbers, `null` is missing. Key order is
//             collection order; duplicate keys are rejected.
//
// Empty cells, `NA`, `NaN` and infinities count as missing in every format.
// Throws FormatError (names the first offending row/record), ValidationError
// (duplicate id, missing value under kReject) or IoError.
SeriesCollection load_collection(const std::filesystem::path& path,
                                 InputFormat format,
                                 MissingPolicy policy = MissingPolicy::kReject);

// Same parsers over an in-memory document; `source_name` is used in messages.
SeriesCollection parse_collection(std::string_view text, InputFormat format,
                                  MissingPolicy policy,
                                  std::string source_name = "<memory>");

// Writes a collection so that load_collection reproduces it bit-for-bit.
// Missing positions are written as empty cells (CSV) or null (JSON).
void save_collection(const SeriesCollection& collection,
                     const std::filesystem::path& path, InputFormat format);
std::string format_collection(const SeriesCollection& collection,
                              InputFormat format);

enum class WarningKind { kTooShort, kConstant, kConfusableIds };

struct CollectionWarning {
  WarningKind kind;
  std::vector<std::string> ids;
  std::string message;
};

// Non-fatal diagnostics: series with fewer than 3 observations, series with
// zero overall variance, ids that collide once whitespace and case are
// ignored. Never mutates the collection.
std::vector<CollectionWarning> validate_collection(
    const SeriesCollection& collection);

}  // namespace tsleakscan

#endif  // TSLEAKSCAN_INGEST_HPP_
