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

#include "tsleakscan/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "csv.hpp"
#include "tsleakscan/errors.hpp"

namespace tsleakscan {
namespace {

using nlohmann::ordered_json;

constexpr std::string_view kCsvHeader =
    "query_id,donor_id,start,end,r,kind,m,c,useful";

std::string g12(double v) { return fmt::format("{:.12g}", v); }

bool same_double(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double as_double(const ordered_json& v) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

std::string format_json(const ReportDocument& doc) {
  ordered_json root = ordered_json::object();
  if (doc.config) {
    ordered_json cfg = ordered_json::object();
    cfg["h"] = doc.config->h;
    cfg["cutoff"] = doc.config->cutoff;
    cfg["horizon"] = doc.config->horizon ? ordered_json(*doc.config->horizon)
                                         : ordered_json(nullptr);
    root["config"] = std::move(cfg);
  } else {
    root["config"] = nullptr;
  }

  ordered_json skipped = ordered_json::array();
  for (const auto& s : doc.skipped_queries) {
    skipped.push_back({{"id", s.id}, {"reason", to_string(s.reason)}});
  }
  root["skipped_queries"] = std::move(skipped);

  ordered_json matches = ordered_json::array();
  for (const auto& e : doc.entries) {
    ordered_json m = ordered_json::object();
    m["query_id"] = e.match.query_id;
    m["donor_id"] = e.match.donor_id;
    m["start"] = e.match.start;
    m["end"] = e.match.end;
    m["r"] = e.match.r;
    if (e.explanation) {
      const Explanation& x = *e.explanation;
      m["kind"] = to_string(x.kind);
      m["m"] = number_or_null(x.m);
      m["c"] = number_or_null(x.c);
      m["useful"] = x.useful;
      if (x.predicted_test) {
        ordered_json pred = ordered_json::array();
        for (double v : *x.predicted_test) pred.push_back(number_or_null(v));
        m["predicted_test"] = std::move(pred);
      } else {
        m["predicted_test"] = nullptr;
      }
    }
    matches.push_back(std::move(m));
  }
  root["matches"] = std::move(matches);
  return root.dump(2) + "\n";
}

std::string format_csv(const ReportDocument& doc) {
  using detail::csv_quote;
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const auto& e : doc.entries) {
    out += fmt::format("{},{},{},{},{}", csv_quote(e.match.query_id),
                       csv_quote(e.match.donor_id), e.match.start, e.match.end,
                       g12(e.match.r));
    if (e.explanation) {
      const Explanation& x = *e.explanation;
      out += fmt::format(",{},{},{},{}\n", to_string(x.kind), g12(x.m),
                         g12(x.c), x.useful ? "true" : "false");
    } else {
      out += ",,,,\n";
    }
  }
  return out;
}

std::size_t parse_index(std::string_view text, std::size_t line) {
  std::size_t v = 0;
  std::istringstream in{std::string(text)};
  if (text.empty() || text.front() == '-' || !(in >> v) || !in.eof()) {
    throw FormatError(
        fmt::format("report line {}: '{}' is not a valid index", line, text));
  }
  return v;
}

double parse_real(std::string_view text, std::size_t line) {
  try {
    std::size_t used = 0;
    std::string s(text);
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError(
        fmt::format("report line {}: '{}' is not a number", line, text));
  }
}

ReportDocument parse_csv(std::string_view text) {
  using detail::trim;
  auto records = detail::read_csv(text, "report");
  if (records.empty()) throw FormatError("report: missing CSV header");
  {
    std::string header;
    for (std::size_t i = 0; i < records[0].fields.size(); ++i) {
      if (i > 0) header.push_back(',');
      header += trim(records[0].fields[i]);
    }
    if (header != kCsvHeader) {
      throw FormatError(fmt::format("report: expected header '{}'", kCsvHeader));
    }
  }
  ReportDocument doc;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i].fields;
    const std::size_t line = records[i].line;
    if (f.size() != 9) {
      throw FormatError(fmt::format("report line {}: expected 9 fields, got {}",
                                    line, f.size()));
    }
    ReportEntry e;
    e.match.query_id = std::string(trim(f[0]));
    e.match.donor_id = std::string(trim(f[1]));
    e.match.start = parse_index(trim(f[2]), line);
    e.match.end = parse_index(trim(f[3]), line);
    e.match.r = parse_real(trim(f[4]), line);
    if (!trim(f[5]).empty()) {
      Explanation x;
      auto kind = parse_reason_kind(trim(f[5]));
      if (!kind) {
        throw FormatError(fmt::format("report line {}: unknown kind '{}'", line,
                                      trim(f[5])));
      }
      x.kind = *kind;
      x.m = parse_real(trim(f[6]), line);
      x.c = parse_real(trim(f[7]), line);
      auto useful = trim(f[8]);
      if (useful != "true" && useful != "false") {
        throw FormatError(fmt::format(
            "report line {}: useful must be true or false", line));
      }
      x.useful = useful == "true";
      e.explanation = std::move(x);
    }
    doc.entries.push_back(std::move(e));
  }
  return doc;
}

ReportDocument parse_json(std::string_view text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error& e) {
    throw FormatError(fmt::format("report: {}", e.what()));
  }

  ReportDocument doc;
  std::size_t index = 0;
  try {
    if (!root.is_object()) throw FormatError("report: top level must be an object");
    const auto& cfg = root.at("config");
    if (!cfg.is_null()) {
      ConfigEcho echo;
      echo.h = cfg.at("h").get<std::size_t>();
      echo.cutoff = cfg.at("cutoff").get<double>();
      if (cfg.contains("horizon") && !cfg.at("horizon").is_null()) {
        echo.horizon = cfg.at("horizon").get<std::size_t>();
      }
      doc.config = echo;
    }
    for (const auto& s : root.at("skipped_queries")) {
      auto reason = parse_query_skip(s.at("reason").get<std::string>());
      if (!reason) {
        throw FormatError(fmt::format("report: unknown skip reason '{}'",
                                      s.at("reason").get<std::string>()));
      }
      doc.skipped_queries.push_back({s.at("id").get<std::string>(), *reason});
    }
    for (const auto& m : root.at("matches")) {
      ReportEntry e;
      e.match.query_id = m.at("query_id").get<std::string>();
      e.match.donor_id = m.at("donor_id").get<std::string>();
      e.match.start = m.at("start").get<std::size_t>();
      e.match.end = m.at("end").get<std::size_t>();
      e.match.r = m.at("r").get<double>();
      if (m.contains("kind")) {
        Explanation x;
        auto kind = parse_reason_kind(m.at("kind").get<std::string>());
        if (!kind) {
          throw FormatError(fmt::format("report: match {}: unknown kind '{}'",
                                        index + 1,
                                        m.at("kind").get<std::string>()));
        }
        x.kind = *kind;
        x.m = as_double(m.at("m"));
        x.c = as_double(m.at("c"));
        x.useful = m.at("useful").get<bool>();
        const auto& pred = m.at("predicted_test");
        if (!pred.is_null()) {
          std::vector<double> values;
          for (const auto& v : pred) values.push_back(as_double(v));
          x.predicted_test = std::move(values);
        }
        e.explanation = std::move(x);
      }
      doc.entries.push_back(std::move(e));
      ++index;
    }
  } catch (const ordered_json::exception& e) {
    throw FormatError(fmt::format("report: match {}: {}", index + 1, e.what()));
  }
  return doc;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

}  // namespace

std::size_t MatchMatrix::total() const {
  std::size_t sum = 0;
  for (const auto& row : counts) {
    for (std::size_t v : row) sum += v;
  }
  return sum;
}

std::size_t MatchMatrix::nonzero_cells() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    n += static_cast<std::size_t>(
        std::count_if(row.begin(), row.end(), [](std::size_t v) { return v > 0; }));
  }
  return n;
}

std::size_t MatchMatrix::max_count() const {
  std::size_t best = 0;
  for (const auto& row : counts) {
    for (std::size_t v : row) best = std::max(best, v);
  }
  return best;
}

MatchMatrix build_matrix(std::span<const MatchRecord> matches,
                         const SeriesCollection& collection) {
  MatchMatrix m;
  m.row_ids.reserve(collection.size());
  for (const Series& s : collection) m.row_ids.push_back(s.id);
  m.col_ids = m.row_ids;
  m.counts.assign(collection.size(),
                  std::vector<std::size_t>(collection.size(), 0));
  for (const MatchRecord& rec : matches) {
    auto row = collection.index_of(rec.query_id);
    auto col = collection.index_of(rec.donor_id);
    if (!row || !col) {
      throw ConsistencyError(fmt::format(
          "match {} -> {} refers to a series outside the collection",
          rec.query_id, rec.donor_id));
    }
    ++m.counts[*row][*col];
  }
  return m;
}

MatchMatrix build_matrix(const LeakReport& report,
                         const SeriesCollection& collection) {
  return build_matrix(report.matches, collection);
}

std::string format_matrix_csv(const MatchMatrix& matrix) {
  using detail::csv_quote;
  std::string out = "query/donor";
  for (const auto& id : matrix.col_ids) out += "," + csv_quote(id);
  out.push_back('\n');
  for (std::size_t i = 0; i < matrix.row_ids.size(); ++i) {
    out += csv_quote(matrix.row_ids[i]);
    for (std::size_t v : matrix.counts[i]) out += fmt::format(",{}", v);
    out.push_back('\n');
  }
  return out;
}

void write_matrix_csv(const MatchMatrix& matrix,
                      const std::filesystem::path& path) {
  write_text_file(path, format_matrix_csv(matrix));
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv") return ReportFormat::kCsv;
  return std::nullopt;
}

std::vector<MatchRecord> ReportDocument::matches() const {
  std::vector<MatchRecord> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.match);
  return out;
}

ReportDocument to_document(const LeakReport& report) {
  ReportDocument doc;
  doc.config = ConfigEcho{report.config.h, report.config.cutoff, std::nullopt};
  doc.skipped_queries = report.skipped_queries;
  doc.entries.reserve(report.matches.size());
  for (const auto& m : report.matches) doc.entries.push_back({m, std::nullopt});
  return doc;
}

ReportDocument to_document(const ReasonedReport& report) {
  ReportDocument doc;
  doc.config = ConfigEcho{report.config.h, report.config.cutoff, report.horizon};
  doc.skipped_queries = report.skipped_queries;
  doc.entries.reserve(report.matches.size());
  for (const auto& rm : report.matches) {
    doc.entries.push_back(
        {rm.base, Explanation{rm.kind, rm.fit.m, rm.fit.c, rm.useful,
                              rm.predicted_test}});
  }
  return doc;
}

std::string format_report(const ReportDocument& doc, ReportFormat format) {
  return format == ReportFormat::kJson ? format_json(doc) : format_csv(doc);
}

void write_report(const ReportDocument& doc, const std::filesystem::path& path,
                  ReportFormat format) {
  write_text_file(path, format_report(doc, format));
}

ReportDocument parse_report(std::string_view text, ReportFormat format) {
  return format == ReportFormat::kJson ? parse_json(text) : parse_csv(text);
}

ReportDocument read_report(const std::filesystem::path& path,
                           ReportFormat format) {
  return parse_report(read_text_file(path), format);
}

bool same_structure(const ReportDocument& a, const ReportDocument& b) {
  if (a.config != b.config || a.skipped_queries != b.skipped_queries ||
      a.entries.size() != b.entries.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const auto& x = a.entries[i];
    const auto& y = b.entries[i];
    if (x.match.query_id != y.match.query_id ||
        x.match.donor_id != y.match.donor_id ||
        x.match.start != y.match.start || x.match.end != y.match.end ||
        !same_double(x.match.r, y.match.r)) {
      return false;
    }
    if (x.explanation.has_value() != y.explanation.has_value()) return false;
    if (!x.explanation) continue;
    const auto& ex = *x.explanation;
    const auto& ey = *y.explanation;
    if (ex.kind != ey.kind || !same_double(ex.m, ey.m) ||
        !same_double(ex.c, ey.c) || ex.useful != ey.useful ||
        ex.predicted_test.has_value() != ey.predicted_test.has_value()) {
      return false;
    }
    if (ex.predicted_test) {
      const auto& px = *ex.predicted_test;
      const auto& py = *ey.predicted_test;
      if (px.size() != py.size() ||
          !std::equal(px.begin(), px.end(), py.begin(), same_double)) {
        return false;
      }
    }
  }
  return true;
}

std::vector<MatchRun> collapse_overlaps(std::span<const MatchRecord> matches) {
  std::vector<MatchRun> runs;
  std::size_t last_start = 0;
  for (const MatchRecord& m : matches) {
    if (!runs.empty()) {
      MatchRun& run = runs.back();
      if (run.query_id == m.query_id && run.donor_id == m.donor_id &&
          m.start == last_start + 1) {
        run.end = m.end;
        ++run.windows;
        run.min_abs_r = std::min(run.min_abs_r, std::fabs(m.r));
        last_start = m.start;
        continue;
      }
    }
    runs.push_back({m.query_id, m.donor_id, m.start, m.end, 1, std::fabs(m.r)});
    last_start = m.start;
  }
  return runs;
}

void write_text_file(const std::filesystem::path& path,
                     std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) {
    throw IoError(fmt::format("error while writing '{}'", path.string()));
  }
}

}  // namespace tsleakscan
