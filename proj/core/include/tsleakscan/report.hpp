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

#ifndef TSLEAKSCAN_REPORT_HPP_
#define TSLEAKSCAN_REPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsleakscan/collection.hpp"
#include "tsleakscan/reason.hpp"
#include "tsleakscan/scanner.hpp"

namespace tsleakscan {

// Query x donor grid of match counts. Rows are queries, columns donors,
// both in collection order; series without matches keep a zero row/column.
struct MatchMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  std::size_t nonzero_cells() const;
  std::size_t max_count() const;

  friend bool operator==(const MatchMatrix&, const MatchMatrix&) = default;
};

// Throws ConsistencyError for ids outside the collection.
MatchMatrix build_matrix(std::span<const MatchRecord> matches,
                         const SeriesCollection& collection);
MatchMatrix build_matrix(const LeakReport& report,
                         const SeriesCollection& collection);

std::string format_matrix_csv(const MatchMatrix& matrix);
void write_matrix_csv(const MatchMatrix& matrix,
                      const std::filesystem::path& path);

// --- serialized reports -----------------------------------------------------

enum class ReportFormat { kJson, kCsv };

std::optional<ReportFormat> parse_report_format(std::string_view text);

struct Explanation {
  ReasonKind kind = ReasonKind::kHighCorrelationOnly;
  double m = 0.0;
  double c = 0.0;
  bool useful = false;
  std::optional<std::vector<double>> predicted_test;
};

struct ReportEntry {
  MatchRecord match;
  std::optional<Explanation> explanation;
};

struct ConfigEcho {
  std::size_t h = 0;
  double cutoff = 0.0;
  std::optional<std::size_t> horizon;  // explained reports only

  friend bool operator==(const ConfigEcho&, const ConfigEcho&) = default;
};

// The on-disk shape shared by scan and explain reports. CSV files carry no
// config echo and no skipped queries, so those come back empty from CSV.
struct ReportDocument {
  std::optional<ConfigEcho> config;
  std::vector<SkippedQuery> skipped_queries;
  std::vector<ReportEntry> entries;

  std::vector<MatchRecord> matches() const;
};

ReportDocument to_document(const LeakReport& report);
ReportDocument to_document(const ReasonedReport& report);

// JSON key order is fixed: config, skipped_queries, matches; and within a
// match query_id, donor_id, start, end, r, then kind, m, c, useful,
// predicted_test for explained reports. CSV uses the header
// `query_id,donor_id,start,end,r,kind,m,c,useful` with 12 significant digits.
std::string format_report(const ReportDocument& doc, ReportFormat format);
void write_report(const ReportDocument& doc, const std::filesystem::path& path,
                  ReportFormat format);

// Throws FormatError on malformed input, IoError when the file can't be read.
ReportDocument parse_report(std::string_view text, ReportFormat format);
ReportDocument read_report(const std::filesystem::path& path,
                           ReportFormat format);

// Exact structural equality (NaN predictions compare equal to NaN).
bool same_structure(const ReportDocument& a, const ReportDocument& b);

// --- presentation -------------------------------------------------------------

// A run of consecutive-offset matches for one (query, donor) pair.
struct MatchRun {
  std::string query_id;
  std::string donor_id;
  std::size_t start;
  std::size_t end;
  std::size_t windows;
  double min_abs_r;
};

std::vector<MatchRun> collapse_overlaps(std::span<const MatchRecord> matches);

struct HeatmapOptions {
  double label_angle = 90.0;  // degrees, applied to column labels
  double cell_size = 14.0;
  std::string title = "Potential data leaks (rows: query, columns: donor)";
};

// Standalone SVG 1.1 document: one <rect> per cell, zero cells styled with
// class "cell-zero" and nonzero cells with class "cell-hit", plus a legend.
std::string heatmap_svg(const MatchMatrix& matrix,
                        const HeatmapOptions& options = {});
void render_heatmap(const MatchMatrix& matrix,
                    const std::filesystem::path& path,
                    const HeatmapOptions& options = {});

// Writes `contents` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path,
                     std::string_view contents);

}  // namespace tsleakscan

#endif  // TSLEAKSCAN_REPORT_HPP_
