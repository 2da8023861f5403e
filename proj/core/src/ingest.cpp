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

#include "tsleakscan/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "csv.hpp"
#include "tsleakscan/corrcore.hpp"
#include "tsleakscan/errors.hpp"

namespace tsleakscan {
namespace {

using detail::CsvRecord;
using detail::csv_quote;
using detail::read_csv;
using detail::trim;

bool is_missing_marker(std::string_view s) {
  return s.empty() || s == "NA" || s == "na" || s == "N/A" || s == "null";
}

// nullopt = missing. Non-finite literals count as missing.
std::optional<double> parse_cell(std::string_view raw, bool& ok) {
  ok = true;
  std::string_view s = trim(raw);
  if (is_missing_marker(s)) return std::nullopt;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    ok = false;
    return std::nullopt;
  }
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

void record_missing(Series& series, std::size_t pos, MissingPolicy policy,
                    const std::string& where) {
  if (policy == MissingPolicy::kReject) {
    throw ValidationError(fmt::format(
        "series '{}': missing value at position {} ({})", series.id, pos + 1,
        where));
  }
  series.missing.push_back(pos);
}

SeriesCollection parse_wide(std::string_view text, MissingPolicy policy,
                            const std::string& source) {
  auto records = read_csv(text, source);
  if (records.empty()) {
    throw FormatError(fmt::format("{}: missing header row", source));
  }
  const CsvRecord& header = records.front();
  const std::size_t columns = header.fields.size();
  std::vector<Series> series(columns);
  for (std::size_t j = 0; j < columns; ++j) {
    series[j].id = std::string(trim(header.fields[j]));
    if (series[j].id.empty()) {
      throw FormatError(fmt::format("{}: line {}: empty series id in column {}",
                                    source, header.line, j + 1));
    }
  }

  // cells[j][row] holds the raw text so trailing padding can be told apart
  // from interior gaps once the column length is known.
  std::vector<std::vector<std::string_view>> cells(columns);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() > columns) {
      throw FormatError(fmt::format("{}: line {}: {} fields, header has {}",
                                    source, rec.line, rec.fields.size(),
                                    columns));
    }
    for (std::size_t j = 0; j < columns; ++j) {
      cells[j].push_back(j < rec.fields.size() ? trim(rec.fields[j])
                                               : std::string_view{});
    }
  }

  for (std::size_t j = 0; j < columns; ++j) {
    std::size_t length = cells[j].size();
    while (length > 0 && cells[j][length - 1].empty()) --length;
    Series& s = series[j];
    s.values.reserve(length);
    for (std::size_t row = 0; row < length; ++row) {
      bool ok = true;
      auto value = parse_cell(cells[j][row], ok);
      if (!ok) {
        throw FormatError(fmt::format(
            "{}: line {}: column '{}': cannot parse '{}' as a number", source,
            records[row + 1].line, s.id, cells[j][row]));
      }
      if (!value) {
        record_missing(s, row, policy,
                       fmt::format("line {}", records[row + 1].line));
      }
      s.values.push_back(value.value_or(0.0));
    }
  }
  return SeriesCollection(std::move(series), source, InputFormat::kWideCsv);
}

SeriesCollection parse_long(std::string_view text, MissingPolicy policy,
                            const std::string& source) {
  auto records = read_csv(text, source);
  if (records.empty()) {
    throw FormatError(fmt::format("{}: missing header row", source));
  }
  const auto& header = records.front().fields;
  if (header.size() != 3 || trim(header[0]) != "series_id" ||
      trim(header[1]) != "index" || trim(header[2]) != "value") {
    throw FormatError(fmt::format(
        "{}: line {}: expected header 'series_id,index,value'", source,
        records.front().line));
  }

  struct Point {
    std::size_t index;
    std::optional<double> value;
    std::size_t line;
  };
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<Point>> points;

  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() != 3) {
      throw FormatError(fmt::format("{}: line {}: expected 3 fields, got {}",
                                    source, rec.line, rec.fields.size()));
    }
    std::string id(trim(rec.fields[0]));
    if (id.empty()) {
      throw FormatError(fmt::format("{}: line {}: empty series id", source,
                                    rec.line));
    }
    std::string_view index_text = trim(rec.fields[1]);
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(
        index_text.data(), index_text.data() + index_text.size(), index);
    if (ec != std::errc() || ptr != index_text.data() + index_text.size() ||
        index == 0) {
      throw FormatError(fmt::format(
          "{}: line {}: index '{}' is not a positive integer", source,
          rec.line, index_text));
    }
    bool ok = true;
    auto value = parse_cell(rec.fields[2], ok);
    if (!ok) {
      throw FormatError(fmt::format("{}: line {}: cannot parse '{}' as a number",
                                    source, rec.line, trim(rec.fields[2])));
    }
    auto [it, inserted] = points.try_emplace(id);
    if (inserted) order.push_back(id);
    it->second.push_back({index, value, rec.line});
  }

  std::vector<Series> series;
  series.reserve(order.size());
  for (const std::string& id : order) {
    auto& pts = points[id];
    std::stable_sort(pts.begin(), pts.end(),
                     [](const Point& a, const Point& b) { return a.index < b.index; });
    Series s;
    s.id = id;
    s.values.reserve(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (pts[k].index != k + 1) {
        if (pts[k].index == k) {
          throw FormatError(fmt::format("{}: line {}: series '{}' repeats index {}",
                                        source, pts[k].line, id, pts[k].index));
        }
        throw FormatError(fmt::format(
            "{}: line {}: series '{}' index jumps to {}; index {} is absent",
            source, pts[k].line, id, pts[k].index, k + 1));
      }
      if (!pts[k].value) {
        record_missing(s, k, policy, fmt::format("line {}", pts[k].line));
      }
      s.values.push_back(pts[k].value.value_or(0.0));
    }
    series.push_back(std::move(s));
  }
  return SeriesCollection(std::move(series), source, InputFormat::kLongCsv);
}

SeriesCollection parse_json(std::string_view text, MissingPolicy policy,
                            const std::string& source) {
  using nlohmann::ordered_json;
  std::vector<std::string> keys;
  std::optional<std::string> duplicate;
  auto callback = [&](int depth, ordered_json::parse_event_t event,
                      ordered_json& parsed) {
    if (event == ordered_json::parse_event_t::key && depth == 1) {
      auto key = parsed.get<std::string>();
      if (!duplicate &&
          std::find(keys.begin(), keys.end(), key) != keys.end()) {
        duplicate = key;
      }
      keys.push_back(std::move(key));
    }
    return true;
  };

  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end(), callback);
  } catch (const ordered_json::parse_error& e) {
    throw FormatError(fmt::format("{}: {}", source, e.what()));
  }
  if (duplicate) {
    throw ValidationError(
        fmt::format("{}: duplicate series id '{}'", source, *duplicate));
  }
  if (!doc.is_object()) {
    throw FormatError(fmt::format(
        "{}: top-level value must be an object mapping id to array", source));
  }

  std::vector<Series> series;
  series.reserve(doc.size());
  for (const auto& [id, arr] : doc.items()) {
    if (!arr.is_array()) {
      throw FormatError(
          fmt::format("{}: record '{}': value is not an array", source, id));
    }
    Series s;
    s.id = id;
    s.values.reserve(arr.size());
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const auto& v = arr[k];
      if (v.is_null()) {
        record_missing(s, k, policy, fmt::format("record '{}'", id));
        s.values.push_back(0.0);
      } else if (v.is_number()) {
        double value = v.get<double>();
        if (!std::isfinite(value)) {
          record_missing(s, k, policy, fmt::format("record '{}'", id));
          value = 0.0;
        }
        s.values.push_back(value);
      } else {
        throw FormatError(fmt::format(
            "{}: record '{}': element {} is not a number or null", source, id,
            k + 1));
      }
    }
    series.push_back(std::move(s));
  }
  return SeriesCollection(std::move(series), source, InputFormat::kJson);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError(fmt::format("error while reading '{}'", path.string()));
  }
  return std::move(buffer).str();
}

// Shortest decimal form that parses back to the same double.
std::string exact_number(double v) { return fmt::format("{}", v); }

std::string normalized_id(std::string_view id) {
  std::string out;
  for (unsigned char ch : id) {
    if (!std::isspace(ch)) out.push_back(static_cast<char>(std::tolower(ch)));
  }
  return out;
}

}  // namespace

SeriesCollection parse_collection(std::string_view text, InputFormat format,
                                  MissingPolicy policy,
                                  std::string source_name) {
  switch (format) {
    case InputFormat::kWideCsv:
      return parse_wide(text, policy, source_name);
    case InputFormat::kLongCsv:
      return parse_long(text, policy, source_name);
    case InputFormat::kJson:
      return parse_json(text, policy, source_name);
  }
  throw ConfigError("unknown input format");
}

SeriesCollection load_collection(const std::filesystem::path& path,
                                 InputFormat format, MissingPolicy policy) {
  return parse_collection(read_file(path), format, policy, path.string());
}

std::string format_collection(const SeriesCollection& collection,
                              InputFormat format) {
  std::string out;
  switch (format) {
    case InputFormat::kLongCsv: {
      out = "series_id,index,value\n";
      for (const Series& s : collection) {
        std::string id = csv_quote(s.id);
        for (std::size_t k = 0; k < s.size(); ++k) {
          out += fmt::format("{},{},{}\n", id, k + 1,
                             s.is_missing(k) ? "NA" : exact_number(s.values[k]));
        }
      }
      break;
    }
    case InputFormat::kWideCsv: {
      std::size_t rows = 0;
      for (std::size_t j = 0; j < collection.size(); ++j) {
        if (j > 0) out.push_back(',');
        out += csv_quote(collection[j].id);
        rows = std::max(rows, collection[j].size());
      }
      out.push_back('\n');
      for (std::size_t row = 0; row < rows; ++row) {
        for (std::size_t j = 0; j < collection.size(); ++j) {
          if (j > 0) out.push_back(',');
          const Series& s = collection[j];
          if (row >= s.size()) continue;
          out += s.is_missing(row) ? std::string("NA")
                                   : exact_number(s.values[row]);
        }
        out.push_back('\n');
      }
      break;
    }
    case InputFormat::kJson: {
      nlohmann::ordered_json doc = nlohmann::ordered_json::object();
      for (const Series& s : collection) {
        auto arr = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < s.size(); ++k) {
          if (s.is_missing(k)) {
            arr.push_back(nullptr);
          } else {
            arr.push_back(s.values[k]);
          }
        }
        doc[s.id] = std::move(arr);
      }
      out = doc.dump(2);
      out.push_back('\n');
      break;
    }
  }
  return out;
}

void save_collection(const SeriesCollection& collection,
                     const std::filesystem::path& path, InputFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  out << format_collection(collection, format);
  if (!out) {
    throw IoError(fmt::format("error while writing '{}'", path.string()));
  }
}

std::vector<CollectionWarning> validate_collection(
    const SeriesCollection& collection) {
  std::vector<CollectionWarning> warnings;
  for (const Series& s : collection) {
    if (s.size() < 3) {
      warnings.push_back({WarningKind::kTooShort, {s.id},
                          fmt::format("series '{}' has only {} observation(s)",
                                      s.id, s.size())});
      continue;
    }
    std::vector<double> present;
    present.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (!s.is_missing(k)) present.push_back(s.values[k]);
    }
    if (is_constant(present)) {
      warnings.push_back({WarningKind::kConstant, {s.id},
                          fmt::format("series '{}' is constant", s.id)});
    }
  }

  std::map<std::string, std::vector<std::string>> groups;
  std::vector<std::string> group_order;
  for (const Series& s : collection) {
    auto key = normalized_id(s.id);
    auto& members = groups[key];
    if (members.empty()) group_order.push_back(key);
    members.push_back(s.id);
  }
  for (const auto& key : group_order) {
    const auto& members = groups[key];
    if (members.size() < 2) continue;
    warnings.push_back({WarningKind::kConfusableIds, members,
                        fmt::format("ids differ only by whitespace or case: {}",
                                    fmt::join(members, ", "))});
  }
  return warnings;
}

}  // namespace tsleakscan
