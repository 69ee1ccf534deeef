// Copyright 2026 The emdarp Authors
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


#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "emdarp/graph.hpp"
#include "emdarp/instance.hpp"
#include "emdarp/plan.hpp"

namespace emdarp {

enum class GlyphShape { Circle, Square, Triangle, Diamond, Ring };

struct Glyph {
  GlyphShape shape = GlyphShape::Circle;
  std::string fill = "#000000";
  double size = 7.0;
};

struct StrokeStyle {
  std::string color = "#000000";
  double width = 2.0;
  // SVG dash pattern, empty for solid.
  std::string dash;
};

struct PlotSpec {
  double width = 800.0;
  double height = 800.0;
  double margin = 40.0;
  // Cycled when there are more agents than entries.
  std::vector<StrokeStyle> agents{{"#000000", 2.0, ""},
                                  {"#1f4fd6", 2.0, ""},
                                  {"#c0392b", 2.0, ""},
                                  {"#17803d", 2.0, ""},
                                  {"#8e44ad", 2.0, "6 3"}};
  // Indexed by NodeKind: start, pickup, delivery, station, depot.
  std::array<Glyph, 5> glyphs{Glyph{GlyphShape::Ring, "#ffffff", 8.0},
                              Glyph{GlyphShape::Circle, "#2e86de", 6.0},
                              Glyph{GlyphShape::Square, "#e67e22", 6.0},
                              Glyph{GlyphShape::Triangle, "#27ae60", 8.0},
                              Glyph{GlyphShape::Diamond, "#555555", 8.0}};
  // Opacity of rejected requests' nodes.
  double rejected_opacity = 0.3;
  bool labels = true;
  std::string title;
};

// Standalone SVG 1.1 document. Needs planar coordinates; throws
// ValidationError for matrix-cost instances. plan may be null to draw the
// nodes alone.
std::string render_svg(const Instance& instance, const ExpandedGraph& graph,
                       const RoutePlan* plan, const PlotSpec& spec = {});
void save_svg(const std::string& svg, const std::filesystem::path& path);

}  // namespace emdarp
