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

#ifndef TSLEAKSCAN_TESTS_XML_CHECK_HPP_
#define TSLEAKSCAN_TESTS_XML_CHECK_HPP_

#include <map>
#include <sstream>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace tsleakscan::testing {

struct SvgStats {
  bool well_formed = false;
  std::string error;
  std::map<std::string, std::size_t> rects_by_class;
  std::size_t rotated_labels = 0;
  std::string first_rotation;
};

inline void walk_svg(const boost::property_tree::ptree& node, SvgStats& stats) {
  for (const auto& [name, child] : node) {
    if (name == "rect") {
      stats.rects_by_class[child.get<std::string>("<xmlattr>.class", "")]++;
    } else if (name == "text") {
      auto t = child.get<std::string>("<xmlattr>.transform", "");
      if (!t.empty()) {
        if (stats.rotated_labels++ == 0) stats.first_rotation = t;
      }
    }
    if (name != "<xmlattr>") walk_svg(child, stats);
  }
}

// Parses the document with a real XML parser and tallies <rect> classes.
inline SvgStats inspect_svg(const std::string& svg) {
  SvgStats stats;
  try {
    std::istringstream in(svg);
    boost::property_tree::ptree tree;
    boost::property_tree::read_xml(in, tree);
    if (tree.count("svg") != 1) {
      stats.error = "no single <svg> root";
      return stats;
    }
    walk_svg(tree.get_child("svg"), stats);
    stats.well_formed = true;
  } catch (const std::exception& e) {
    stats.error = e.what();
  }
  return stats;
}

}  // namespace tsleakscan::testing

#endif  // TSLEAKSCAN_TESTS_XML_CHECK_HPP_
