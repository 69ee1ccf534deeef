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


#include "emdarp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "emdarp/errors.hpp"

namespace emdarp {
namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas(const PlotSpec& spec, double x0, double y0, double x1, double y1) : spec_(spec) {
    const double w = std::max(x1 - x0, 1e-9);
    const double h = std::max(y1 - y0, 1e-9);
    scale_ = std::min((spec.width - 2 * spec.margin) / w, (spec.height - 2 * spec.margin) / h);
    x0_ = x0;
    y0_ = y0;
    h_ = h;
  }
  double x(const Point& p) const { return spec_.margin + (p.x - x0_) * scale_; }
  // SVG grows downwards; flip so north stays up.
  double y(const Point& p) const { return spec_.margin + (h_ - (p.y - y0_)) * scale_; }

 private:
  const PlotSpec& spec_;
  double scale_ = 1.0;
  double x0_ = 0.0, y0_ = 0.0, h_ = 1.0;
};

void glyph(std::ostream& os, const Glyph& gl, double cx, double cy, double opacity) {
  const double s = gl.size;
  os << "<g opacity=\"" << opacity << "\">";
  switch (gl.shape) {
    case GlyphShape::Circle:
      os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << s << "\" fill=\"" << gl.fill
         << "\" stroke=\"#000\"/>";
      break;
    case GlyphShape::Ring:
      os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << s << "\" fill=\"" << gl.fill
         << "\" stroke=\"#000\" stroke-width=\"2\"/>";
      break;
    case GlyphShape::Square:
      os << "<rect x=\"" << cx - s << "\" y=\"" << cy - s << "\" width=\"" << 2 * s
         << "\" height=\"" << 2 * s << "\" fill=\"" << gl.fill << "\" stroke=\"#000\"/>";
      break;
    case GlyphShape::Triangle:
      os << "<polygon points=\"" << cx << "," << cy - s << " " << cx - s << "," << cy + s << " "
         << cx + s << "," << cy + s << "\" fill=\"" << gl.fill << "\" stroke=\"#000\"/>";
      break;
    case GlyphShape::Diamond:
      os << "<polygon points=\"" << cx << "," << cy - s << " " << cx + s << "," << cy << " " << cx
         << "," << cy + s << " " << cx - s << "," << cy << "\" fill=\"" << gl.fill
         << "\" stroke=\"#000\"/>";
      break;
  }
  os << "</g>\n";
}

}  // namespace

std::string render_svg(const Instance& in, const ExpandedGraph& g, const RoutePlan* plan,
                       const PlotSpec& spec) {
  if (in.costs.mode != CostSpec::Mode::Euclidean) {
    throw ValidationError("plot: instance has no coordinates (matrix costs)");
  }
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (NodeId n = 0; n < g.num_nodes(); ++n) {
    if (const auto p = g.position(n)) {
      x0 = std::min(x0, p->x);
      y0 = std::min(y0, p->y);
      x1 = std::max(x1, p->x);
      y1 = std::max(y1, p->y);
    }
  }
  if (!std::isfinite(x0)) x0 = y0 = x1 = y1 = 0.0;
  const Canvas cv(spec, x0, y0, x1, y1);

  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
     << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height
     << "\">\n";
  if (!spec.title.empty()) os << "<title>" << escape(spec.title) << "</title>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  const std::size_t K = g.num_agents();
  auto style = [&](std::size_t k) -> const StrokeStyle& {
    return spec.agents[k % std::max<std::size_t>(1, spec.agents.size())];
  };
  if (plan && !spec.agents.empty()) {
    os << "<defs>\n";
    for (std::size_t k = 0; k < K; ++k) {
      os << "<marker id=\"arrow" << k << "\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" "
         << "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" "
         << "fill=\"" << style(k).color << "\"/></marker>\n";
    }
    os << "</defs>\n";

    for (std::size_t k = 0; k < plan->routes.size() && k < K; ++k) {
      const AgentRoute& route = plan->routes[k];
      std::vector<NodeId> seq;
      for (const Stop& s : route.stops) seq.push_back(s.node);
      if (route.hub && !route.idle()) seq.push_back(*route.hub);
      const StrokeStyle& st = style(k);
      os << "<g id=\"agent" << k << "\" stroke=\"" << st.color << "\" stroke-width=\"" << st.width
         << "\" fill=\"none\"";
      if (!st.dash.empty()) os << " stroke-dasharray=\"" << st.dash << "\"";
      os << ">\n";
      for (std::size_t i = 1; i < seq.size(); ++i) {
        const auto a = g.position(seq[i - 1]);
        const auto b = g.position(seq[i]);
        if (!a || !b) continue;
        const double ax = cv.x(*a), ay = cv.y(*a), bx = cv.x(*b), by = cv.y(*b);
        const double len = std::hypot(bx - ax, by - ay);
        if (len < 1e-9) continue;
        // Stop the arrow short of the glyph it points at.
        const double cut = std::min(len / 2, 9.0);
        os << "<line x1=\"" << ax << "\" y1=\"" << ay << "\" x2=\"" << bx - (bx - ax) * cut / len
           << "\" y2=\"" << by - (by - ay) * cut / len << "\" marker-end=\"url(#arrow" << k
           << ")\"/>\n";
      }
      os << "</g>\n";
    }
  }

  os << "<g id=\"nodes\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (NodeId n = 0; n < g.num_nodes(); ++n) {
    const auto p = g.position(n);
    if (!p) continue;
    const NodeKind kind = g.kind(n);
    std::string label = g.label(n);
    if (kind == NodeKind::Station) {
      const StationVisit sv = g.station_of(n);
      if (sv.visit != 0) continue;
      label = "f" + std::to_string(sv.station);
    }
    double opacity = 1.0;
    if (plan && (kind == NodeKind::Pickup || kind == NodeKind::Delivery)) {
      const std::size_t r = g.request_of(n);
      if (r < plan->accepted.size() && !plan->accepted[r]) opacity = spec.rejected_opacity;
    }
    const Glyph& gl = spec.glyphs[static_cast<std::size_t>(kind)];
    glyph(os, gl, cv.x(*p), cv.y(*p), opacity);
    if (spec.labels) {
      os << "<text x=\"" << cv.x(*p) + gl.size + 2 << "\" y=\"" << cv.y(*p) - gl.size
         << "\" opacity=\"" << opacity << "\">" << escape(label) << "</text>\n";
    }
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void save_svg(const std::string& svg, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << svg;
  if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace emdarp
