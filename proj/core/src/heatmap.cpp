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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "tsleakscan/errors.hpp"
#include "tsleakscan/report.hpp"

namespace tsleakscan {
namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

// Linear ramp from light orange (one match) to dark red (the maximum).
std::string hit_colour(std::size_t count, std::size_t max_count) {
  constexpr int lo[3] = {0xfd, 0xae, 0x61};
  constexpr int hi[3] = {0xb2, 0x18, 0x2b};
  const double t = max_count <= 1 ? 1.0
                                  : static_cast<double>(count - 1) /
                                        static_cast<double>(max_count - 1);
  int rgb[3];
  for (int k = 0; k < 3; ++k) {
    rgb[k] = static_cast<int>(std::lround(lo[k] + t * (hi[k] - lo[k])));
  }
  return fmt::format("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
}

}  // namespace

std::string heatmap_svg(const MatchMatrix& matrix,
                        const HeatmapOptions& options) {
  const std::size_t rows = matrix.row_ids.size();
  const std::size_t cols = matrix.col_ids.size();
  if (matrix.counts.size() != rows) {
    throw ContractViolation("heatmap: row count does not match row labels");
  }
  for (const auto& row : matrix.counts) {
    if (row.size() != cols) {
      throw ContractViolation("heatmap: ragged count matrix");
    }
  }

  const double cell = options.cell_size;
  const double font = std::clamp(cell * 0.75, 4.0, 12.0);
  const double char_w = font * 0.62;
  auto longest = [](const std::vector<std::string>& ids) {
    std::size_t n = 0;
    for (const auto& id : ids) n = std::max(n, id.size());
    return static_cast<double>(n);
  };
  const double angle = options.label_angle;
  const double rad = angle * std::numbers::pi / 180.0;
  const double col_label_len = longest(matrix.col_ids) * char_w;
  const double left = 10.0 + longest(matrix.row_ids) * char_w + 6.0;
  const double top = 34.0 + col_label_len * std::fabs(std::sin(rad)) + font + 6.0;
  const double grid_w = cell * static_cast<double>(cols);
  const double grid_h = cell * static_cast<double>(rows);

  const std::size_t max_count = matrix.max_count();
  std::vector<std::size_t> legend_levels{0};
  if (max_count > 0) {
    const std::size_t steps = std::min<std::size_t>(max_count, 5);
    for (std::size_t k = 1; k <= steps; ++k) {
      std::size_t level = 1 + (max_count - 1) * (k - 1) / std::max<std::size_t>(steps - 1, 1);
      if (level != legend_levels.back()) legend_levels.push_back(level);
    }
  }
  const double legend_x = left + grid_w + 24.0;
  const double legend_w = 110.0;
  const double width = legend_x + legend_w + 10.0 +
                       std::max(0.0, col_label_len * std::fabs(std::cos(rad)) - grid_w);
  const double height = std::max(top + grid_h + 16.0,
                                 top + 20.0 * static_cast<double>(legend_levels.size() + 1));

  std::string out;
  out.reserve(256 + rows * cols * 64);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      std::ceil(width), std::ceil(height), std::ceil(width), std::ceil(height));
  out += "<defs><style type=\"text/css\"><![CDATA[\n"
         ".cell-zero{fill:#f4f4f4;stroke:#dddddd;stroke-width:0.5}\n"
         ".cell-hit{stroke:#7f0000;stroke-width:0.5}\n"
         "text{font-family:Helvetica,Arial,sans-serif;fill:#222222}\n"
         "]]></style></defs>\n";
  out += fmt::format("<text x=\"10\" y=\"20\" font-size=\"14\">{}</text>\n",
                     xml_escape(options.title));

  out += fmt::format("<g font-size=\"{:g}\">\n", font);
  for (std::size_t j = 0; j < cols; ++j) {
    const double x = left + cell * (static_cast<double>(j) + 0.5);
    const double y = top - 4.0;
    out += fmt::format(
        "<text x=\"{:g}\" y=\"{:g}\" transform=\"rotate({:g} {:g} {:g})\">{}</text>\n",
        x, y, -angle, x, y, xml_escape(matrix.col_ids[j]));
  }
  for (std::size_t i = 0; i < rows; ++i) {
    out += fmt::format(
        "<text x=\"{:g}\" y=\"{:g}\" text-anchor=\"end\">{}</text>\n", left - 4.0,
        top + cell * (static_cast<double>(i) + 0.5) + font * 0.35,
        xml_escape(matrix.row_ids[i]));
  }
  out += "</g>\n<g>\n";

  for (std::size_t i = 0; i < rows; ++i) {
    const double y = top + cell * static_cast<double>(i);
    for (std::size_t j = 0; j < cols; ++j) {
      const double x = left + cell * static_cast<double>(j);
      const std::size_t v = matrix.counts[i][j];
      if (v == 0) {
        out += fmt::format(
            "<rect x=\"{:g}\" y=\"{:g}\" width=\"{:g}\" height=\"{:g}\" class=\"cell-zero\"/>\n",
            x, y, cell, cell);
      } else {
        out += fmt::format(
            "<rect x=\"{:g}\" y=\"{:g}\" width=\"{:g}\" height=\"{:g}\" class=\"cell-hit\" "
            "fill=\"{}\"><title>{} -&gt; {}: {}</title></rect>\n",
            x, y, cell, cell, hit_colour(v, max_count),
            xml_escape(matrix.row_ids[i]), xml_escape(matrix.col_ids[j]), v);
      }
    }
  }
  out += "</g>\n";

  out += fmt::format("<g font-size=\"11\">\n<text x=\"{:g}\" y=\"{:g}\">matches</text>\n",
                     legend_x, top - 6.0);
  for (std::size_t k = 0; k < legend_levels.size(); ++k) {
    const std::size_t level = legend_levels[k];
    const double y = top + 20.0 * static_cast<double>(k);
    const std::string fill =
        level == 0 ? std::string("#f4f4f4") : hit_colour(level, max_count);
    out += fmt::format(
        "<rect x=\"{:g}\" y=\"{:g}\" width=\"14\" height=\"14\" fill=\"{}\" "
        "stroke=\"#999999\" stroke-width=\"0.5\"/>\n"
        "<text x=\"{:g}\" y=\"{:g}\">{}</text>\n",
        legend_x, y, fill, legend_x + 20.0, y + 11.0, level);
  }
  out += "</g>\n</svg>\n";
  return out;
}

void render_heatmap(const MatchMatrix& matrix,
                    const std::filesystem::path& path,
                    const HeatmapOptions& options) {
  write_text_file(path, heatmap_svg(matrix, options));
}

}  // namespace tsleakscan
