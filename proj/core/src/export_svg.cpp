#include <algorithm>
#include <cmath>
#include <sstream>

#include "papercad/error.hpp"
#include "papercad/export.hpp"
#include "xml_document.hpp"

namespace papercad {

namespace {

constexpr const char* kCutStyle = "fill:none;stroke:#000;stroke-width:0.1";

std::string path_data(const std::vector<Point>& pts, bool closed) {
  std::string d;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    d += k == 0 ? "M" : " L";
    d += format_mm(pts[k].x) + " " + format_mm(pts[k].y);
  }
  if (closed) d += " Z";
  return d;
}

std::vector<const Polyline*> ordered_cuts(const ZoneLayout& layout) {
  std::vector<const Polyline*> out;
  for (const auto& p : layout.cut_paths) {
    if (p.points.size() >= 2) out.push_back(&p);
  }
  std::stable_sort(out.begin(), out.end(), [](const Polyline* a, const Polyline* b) {
    const Point pa = a->points.front(), pb = b->points.front();
    if (pa.y != pb.y) return pa.y < pb.y;
    return pa.x < pb.x;
  });
  return out;
}

void open_svg(std::ostringstream& os, const Board& board) {
  const std::string w = format_mm(board.width()), h = format_mm(board.height());
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "mm\" height=\"" << h << "mm\" viewBox=\"0 0 "
     << w << ' ' << h << "\">\n";
}

// Three L-shaped marks, 5 mm arms, in the corners except bottom-right.
void registration_marks(std::ostringstream& os, const Board& board) {
  const double W = board.width(), H = board.height();
  const double inset = std::min(1.0, board.margin() / 2);
  const double arm = std::min({5.0, W / 4, H / 4});
  const std::vector<std::vector<Point>> marks = {
      {{inset, inset + arm}, {inset, inset}, {inset + arm, inset}},
      {{W - inset - arm, inset}, {W - inset, inset}, {W - inset, inset + arm}},
      {{inset, H - inset - arm}, {inset, H - inset}, {inset + arm, H - inset}},
  };
  os << "  <g id=\"registration\" style=\"" << kCutStyle << "\">\n";
  for (const auto& m : marks) os << "    <path d=\"" << path_data(m, false) << "\"/>\n";
  os << "  </g>\n";
}

}  // namespace

std::string export_cut_svg(const ZoneLayout& layout, const ExportOptions& opts) {
  if (opts.mode != ExportMode::VinylCut) {
    throw Error(ErrorCode::ModeMismatch, "cut SVG export needs vinyl-cut mode");
  }
  std::ostringstream os;
  open_svg(os, layout.board);
  for (const Polyline* p : ordered_cuts(layout)) {
    os << "  <path d=\"" << path_data(p->points, p->closed) << "\" style=\"" << kCutStyle << "\"/>\n";
  }
  if (opts.include_registration_marks) registration_marks(os, layout.board);
  if (!layout.outline.points.empty()) {
    os << "  <path id=\"outline\" d=\"" << path_data(layout.outline.points, true) << "\" style=\"" << kCutStyle
       << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string export_finetape_svg(const ZoneMap& zones, const ZoneLayout& layout, const ExportOptions& opts) {
  if (opts.mode != ExportMode::FineTape) {
    throw Error(ErrorCode::ModeMismatch, "fine-tape export needs fine-tape mode");
  }
  const double g = zones.board.gap();
  if (!(opts.tape_width > 0) || std::abs(opts.tape_width - g) > 1e-9) {
    throw Error(ErrorCode::TapeWidthMismatch, "tape width " + format_mm(opts.tape_width) +
                                                  " mm differs from the layout gap " + format_mm(g) +
                                                  " mm; convert with --gap equal to the tape width");
  }
  const auto cuts = ordered_cuts(layout);
  std::ostringstream os;
  open_svg(os, layout.board);
  os << "  <!-- " << kFineTapeWarning << " -->\n";
  os << "  <g id=\"zones\" style=\"fill:#f0c070;stroke:none;fill-rule:evenodd\">\n";
  for (const auto& [net, polys] : layout.zones) {
    for (const auto& poly : polys) {
      std::string d = path_data(poly.outer, true);
      for (const auto& hole : poly.holes) d += " " + path_data(hole, true);
      os << "    <path data-net=\"" << net << "\" d=\"" << d << "\"/>\n";
    }
  }
  os << "  </g>\n";
  os << "  <g id=\"tape-corridors\" style=\"fill:none;stroke:#fff;stroke-width:" << format_mm(opts.tape_width)
     << ";stroke-linejoin:round;stroke-linecap:round\">\n";
  for (const Polyline* p : cuts) os << "    <path d=\"" << path_data(p->points, p->closed) << "\"/>\n";
  os << "  </g>\n";
  os << "  <g id=\"tape-guides\" style=\"fill:none;stroke:#000;stroke-width:0.1;stroke-dasharray:1,1\">\n";
  for (const Polyline* p : cuts) os << "    <path d=\"" << path_data(p->points, p->closed) << "\"/>\n";
  os << "  </g>\n";
  if (opts.include_labels) {
    os << "  <g id=\"labels\" style=\"font-family:sans-serif;font-size:2px;text-anchor:middle;fill:#000\">\n";
    for (const auto& [net, at] : layout.label_anchors) {
      const std::string name = net >= 0 && static_cast<std::size_t>(net) < opts.net_names.size()
                                   ? opts.net_names[static_cast<std::size_t>(net)]
                                   : std::to_string(net);
      os << "    <text x=\"" << format_mm(at.x) << "\" y=\"" << format_mm(at.y) << "\">" << xml::escape(name)
         << "</text>\n";
    }
    os << "  </g>\n";
  }
  if (opts.include_registration_marks) registration_marks(os, layout.board);
  if (!layout.outline.points.empty()) {
    os << "  <path id=\"outline\" d=\"" << path_data(layout.outline.points, true)
       << "\" style=\"fill:none;stroke:#808080;stroke-width:0.1\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace papercad
