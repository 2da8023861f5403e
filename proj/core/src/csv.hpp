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

#ifndef TSLEAKSCAN_SRC_CSV_HPP_
#define TSLEAKSCAN_SRC_CSV_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tsleakscan::detail {

struct CsvRecord {
  std::size_t line;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and
// newlines. Blank lines are dropped. Throws FormatError.
std::vector<CsvRecord> read_csv(std::string_view text, const std::string& source);

std::string_view trim(std::string_view s);

// Quotes a field when it would not survive read_csv unquoted.
std::string csv_quote(std::string_view s);

}  // namespace tsleakscan::detail

#endif  // TSLEAKSCAN_SRC_CSV_HPP_
