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

#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "tsleakscan/tsleakscan.hpp"

namespace tsleakscan::cli {
namespace {

struct Invocation {
  std::string input;
  std::string format = "long";
  long long h = 0;
  double cutoff = 1.0;
  long long horizon = 0;  // 0: same as h
  std::string output;
  std::string report_format = "json";
  std::string missing = "reject";
  std::string workers;
  double angle = 90.0;
  bool collapse = false;
  std::string from_report;
};

// Flag values that CLI11 accepts syntactically but the tool does not.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::size_t parse_workers(const std::string& text) {
  if (text.empty() || text == "auto") return 0;
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || ptr != text.data() + text.size() || n == 0) {
    throw UsageError(fmt::format("workers must be a positive integer or 'auto', got '{}'", text));
  }
  return n;
}

ScanConfig scan_config(const Invocation& inv) {
  if (inv.h < static_cast<long long>(WindowLength::kMinimum)) {
    throw UsageError(fmt::format("h must be an integer >= {}", WindowLength::kMinimum));
  }
  if (!(inv.cutoff > 0.0 && inv.cutoff <= 1.0)) {
    throw UsageError("cutoff must be in (0,1]");
  }
  if (inv.horizon < 0) throw UsageError("horizon must be >= 1");

  ScanConfig cfg;
  cfg.h = WindowLength(static_cast<std::size_t>(inv.h));
  cfg.cutoff = inv.cutoff;
  std::string workers = inv.workers;
  if (workers.empty()) {
    if (const char* env = std::getenv("TSLEAKSCAN_WORKERS")) workers = env;
  }
  cfg.workers = parse_workers(workers);
  return cfg;
}

ReportFormat report_format(const Invocation& inv) {
  auto f = parse_report_format(inv.report_format);
  if (!f) throw UsageError("report-format must be json or csv");
  return *f;
}

SeriesCollection load(const Invocation& inv, std::ostream& err) {
  auto format = parse_input_format(inv.format);
  if (!format) throw UsageError("format must be wide, long or json");
  MissingPolicy policy;
  if (inv.missing == "reject") {
    policy = MissingPolicy::kReject;
  } else if (inv.missing == "skip") {
    policy = MissingPolicy::kSplitSkip;
  } else {
    throw UsageError("missing must be reject or skip");
  }
  SeriesCollection collection = load_collection(inv.input, *format, policy);
  for (const auto& w : validate_collection(collection)) {
    fmt::print(err, "warning: {}\n", w.message);
  }
  return collection;
}

void print_header(std::ostream& out, const SeriesCollection& c,
                  const ScanConfig& cfg) {
  fmt::print(out, "scanned {} series with h={}, cutoff={:g}\n", c.size(),
             cfg.h.value(), cfg.cutoff);
}

void print_skipped(std::ostream& out, const std::vector<SkippedQuery>& skipped) {
  for (const auto& s : skipped) {
    fmt::print(out, "skipped {}: {}\n", s.id, to_string(s.reason));
  }
}

void print_matches(std::ostream& out, const std::vector<MatchRecord>& matches,
                   bool collapse) {
  if (collapse) {
    for (const auto& run : collapse_overlaps(matches)) {
      if (run.windows == 1) {
        fmt::print(out, "{} -> {}: {}-{}, |r|={:.3f}\n", run.query_id,
                   run.donor_id, run.start, run.end, run.min_abs_r);
      } else {
        fmt::print(out, "{} -> {}: {}-{} ({} windows), |r|>={:.3f}\n",
                   run.query_id, run.donor_id, run.start, run.end,
                   run.windows, run.min_abs_r);
      }
    }
    return;
  }
  for (const auto& m : matches) {
    fmt::print(out, "{} -> {}: {}-{}, r={:.3f}\n", m.query_id, m.donor_id,
               m.start, m.end, m.r);
  }
}

std::string summary_footer(const ReasonSummary& s) {
  if (s.total == 0) return "0 matches";
  std::vector<std::string> parts;
  for (ReasonKind kind : kAllReasonKinds) {
    if (s.count(kind) > 0) {
      parts.push_back(fmt::format("{} {}", s.count(kind), summary_label(kind)));
    }
  }
  return fmt::format("{} match{}: {}; {} useful", s.total,
                     s.total == 1 ? "" : "es", fmt::join(parts, ", "), s.useful);
}

void maybe_write(const Invocation& inv, const ReportDocument& doc,
                 std::ostream& out) {
  if (inv.output.empty()) return;
  write_report(doc, inv.output, report_format(inv));
  fmt::print(out, "report written to {}\n", inv.output);
}

int cmd_scan(const Invocation& inv, std::ostream& out, std::ostream& err) {
  ScanConfig cfg = scan_config(inv);
  report_format(inv);
  SeriesCollection collection = load(inv, err);
  LeakReport report = scan(collection, cfg);

  print_header(out, collection, cfg);
  print_skipped(out, report.skipped_queries);
  if (report.matches.empty()) {
    fmt::print(out, "no leaks detected\n");
  } else {
    print_matches(out, report.matches, inv.collapse);
    fmt::print(out, "{} match{}\n", report.matches.size(),
               report.matches.size() == 1 ? "" : "es");
  }
  maybe_write(inv, to_document(report), out);
  return kExitOk;
}

int cmd_explain(const Invocation& inv, std::ostream& out, std::ostream& err) {
  ScanConfig cfg = scan_config(inv);
  report_format(inv);
  ReasonConfig rcfg;
  if (inv.horizon > 0) rcfg.horizon = static_cast<std::size_t>(inv.horizon);
  SeriesCollection collection = load(inv, err);
  LeakReport report = scan(collection, cfg);
  ReasonedReport reasoned = reason_report(report, collection, rcfg);

  print_header(out, collection, cfg);
  print_skipped(out, reasoned.skipped_queries);
  if (inv.collapse) {
    print_matches(out, report.matches, true);
  } else {
    for (const auto& rm : reasoned.matches) {
      const auto& m = rm.base;
      fmt::print(out, "{} -> {}: {}-{}, r={:.3f}, {} (m={:.6g}, c={:.6g}), {}\n",
                 m.query_id, m.donor_id, m.start, m.end, m.r,
                 summary_label(rm.kind), rm.fit.m, rm.fit.c,
                 rm.useful ? "useful" : "not useful");
      if (rm.predicted_test) {
        fmt::print(out, "    predicted test: {:.6g}\n",
                   fmt::join(*rm.predicted_test, ", "));
      }
      fmt::print(out, "    {}\n", rm.provenance_note);
    }
  }
  fmt::print(out, "{}\n", summary_footer(reasoned.summary));
  maybe_write(inv, to_document(reasoned), out);
  return kExitOk;
}

int cmd_viz(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (inv.output.empty()) throw UsageError("viz requires --output PATH for the SVG");
  SeriesCollection collection = load(inv, err);
  MatchMatrix matrix;
  if (!inv.from_report.empty()) {
    std::filesystem::path p(inv.from_report);
    auto fmt_ = p.extension() == ".csv" ? ReportFormat::kCsv : ReportFormat::kJson;
    matrix = build_matrix(read_report(p, fmt_).matches(), collection);
  } else {
    ScanConfig cfg = scan_config(inv);
    matrix = build_matrix(scan(collection, cfg), collection);
  }

  std::filesystem::path svg(inv.output);
  std::filesystem::path csv = svg;
  csv.replace_extension(".csv");
  if (csv == svg) csv += ".matrix.csv";
  HeatmapOptions options;
  options.label_angle = inv.angle;
  render_heatmap(matrix, svg, options);
  write_matrix_csv(matrix, csv);
  fmt::print(out, "{}x{} match matrix, {} nonzero cell(s), {} match(es)\n",
             matrix.row_ids.size(), matrix.col_ids.size(),
             matrix.nonzero_cells(), matrix.total());
  fmt::print(out, "heatmap written to {}\nmatrix written to {}\n", svg.string(),
             csv.string());
  return kExitOk;
}

void add_common(CLI::App* sub, Invocation& inv, bool needs_h) {
  // `--h` is the segment length, so help is only reachable as --help.
  sub->set_help_flag("--help", "Print this help message and exit");
  sub->add_option("--input", inv.input, "Input collection file")->required();
  sub->add_option("--format", inv.format, "Input format: wide|long|json")
      ->capture_default_str();
  auto* h = sub->add_option("--h", inv.h, "Segment length (>= 3)");
  if (needs_h) h->required();
  sub->add_option("--cutoff", inv.cutoff,
                  "Cutoff for |Pearson r|, in (0,1]")
      ->capture_default_str();
  sub->add_option("--missing", inv.missing, "Missing values: reject|skip")
      ->capture_default_str();
  sub->add_option("--workers", inv.workers,
                  "Worker threads or 'auto' (env TSLEAKSCAN_WORKERS)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Detect potential data leaks in forecasting competition series",
               "tsleakscan"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Invocation inv;
  auto* scan_cmd = app.add_subcommand(
      "scan", "Match every series' last h observations against all windows");
  add_common(scan_cmd, inv, true);
  scan_cmd->add_option("--output", inv.output, "Report file");
  scan_cmd->add_option("--report-format", inv.report_format, "json|csv")
      ->capture_default_str();
  scan_cmd->add_flag("--collapse-overlaps", inv.collapse,
                     "Merge consecutive-offset matches in the summary");

  auto* explain_cmd = app.add_subcommand(
      "explain", "Scan, then classify each match and judge its usefulness");
  add_common(explain_cmd, inv, true);
  explain_cmd->add_option("--horizon", inv.horizon,
                          "Test-period length to read off donors (default h)");
  explain_cmd->add_option("--output", inv.output, "Report file");
  explain_cmd->add_option("--report-format", inv.report_format, "json|csv")
      ->capture_default_str();
  explain_cmd->add_flag("--collapse-overlaps", inv.collapse,
                        "Merge consecutive-offset matches in the summary");

  auto* viz_cmd = app.add_subcommand(
      "viz", "Write the query x donor match matrix as CSV and SVG heatmap");
  add_common(viz_cmd, inv, false);
  viz_cmd->add_option("--output", inv.output, "Heatmap SVG path")->required();
  viz_cmd->add_option("--ang", inv.angle, "Column label angle in degrees")
      ->capture_default_str();
  viz_cmd->add_option("--from-report", inv.from_report,
                      "Build the matrix from an existing scan report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*scan_cmd) return cmd_scan(inv, out, err);
    if (*explain_cmd) return cmd_explain(inv, out, err);
    if (viz_cmd->parsed() && inv.from_report.empty() && inv.h == 0) {
      throw UsageError("viz requires --h unless --from-report is given");
    }
    return cmd_viz(inv, out, err);
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\nRun with --help for usage.\n", e.what());
    return kExitUsage;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\nRun with --help for usage.\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
}

}  // namespace tsleakscan::cli
