#include "papercad/placement.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "papercad/error.hpp"

namespace papercad {

Board::Board(const BoardParams& p) : p_(p) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::Validation, "invalid board: " + why); };
  if (!(p.width > 0) || !(p.height > 0)) fail("width and height must be positive");
  if (!(p.resolution > 0)) fail("resolution must be positive");
  if (!(p.margin >= 0)) fail("margin must be non-negative");
  if (!(p.gap >= 2 * p.resolution - 1e-12)) {
    fail("gap " + format_mm(p.gap) + " mm is below twice the resolution (" + format_mm(2 * p.resolution) + " mm)");
  }
  if (!(p.min_feature >= p.gap - 1e-12)) {
    fail("min feature " + format_mm(p.min_feature) + " mm is below the gap " + format_mm(p.gap) + " mm");
  }
  if (!(2 * p.margin < std::min(p.width, p.height))) fail("margin leaves no usable area");
}

double snap(double value, double step) {
  const double inverse = 1.0 / step;
  const double whole = std::round(inverse);
  if (std::abs(inverse - whole) < 1e-9) return std::round(value * whole) / whole;
  return std::round(value / step) * step;
}

namespace {

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double parse_number(const std::string& s, int line_no) {
  try {
    std::size_t idx = 0;
    const double v = std::stod(s, &idx);
    if (idx != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("placement: expected a number, found '" + s + "'", line_no, 1);
  }
}

}  // namespace

PlacementSet load_placement(std::string_view text, const Netlist& netlist) {
  PlacementSet out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto t = tokens(line);
    if (t.empty()) continue;
    // "id at x,y rot r" -> "id x y r"
    if (t.size() >= 2 && t[1] == "at") t.erase(t.begin() + 1);
    if (t.size() >= 4 && t[3] == "rot") t.erase(t.begin() + 3);
    if (t.size() != 3 && t.size() != 4) {
      throw ParseError("placement: expected 'part_id x y rot'", line_no, 1);
    }
    const std::string& id = t[0];
    const double x = parse_number(t[1], line_no);
    const double y = parse_number(t[2], line_no);
    const double rot = t.size() == 4 ? parse_number(t[3], line_no) : 0.0;
    if (netlist.find_part(id) == nullptr) {
      throw Error(ErrorCode::UnknownPart, "placement line " + std::to_string(line_no) + ": unknown part '" + id + "'",
                  ErrorDetail{.parts = {id}});
    }
    if (!(rot >= 0 && rot <= 270) || rot != std::floor(rot) || !is_cardinal(static_cast<int>(rot))) {
      throw Error(ErrorCode::BadRotation, "placement line " + std::to_string(line_no) + ": rotation " + t[3] +
                                              " is not one of 0, 90, 180, 270",
                  ErrorDetail{.parts = {id}});
    }
    if (out.contains(id)) throw ParseError("placement: part '" + id + "' placed twice", line_no, 1);
    out[id] = Placement{x, y, rotation_from_cardinal(static_cast<int>(rot))};
  }
  return out;
}

std::string format_placement(const PlacementSet& placement) {
  std::string out = "# part_id x_mm y_mm rot\n";
  char buf[128];
  for (const auto& [id, p] : placement) {
    double x = snap(p.x, 0.1), y = snap(p.y, 0.1);
    if (x == 0.0) x = 0.0;  // drop negative zero
    if (y == 0.0) y = 0.0;
    std::snprintf(buf, sizeof buf, " %.1f %.1f %d\n", x, y, degrees(p.rotation));
    out += id + buf;
  }
  return out;
}

std::vector<PlacedCourtyard> placed_courtyards(const Netlist& netlist, const FootprintLibrary& library,
                                               const PlacementSet& placement) {
  std::vector<PlacedCourtyard> out;
  for (const auto& part : netlist.parts) {
    const Footprint& fp = library.at(part.footprint_key);
    auto it = placement.find(part.id);
    if (it == placement.end()) {
      throw Error(ErrorCode::MissingPlacement, "part " + part.id + " is not placed", ErrorDetail{.parts = {part.id}});
    }
    out.push_back({part.id, fp.placed_courtyard(it->second)});
  }
  return out;
}

PlacementCost placement_cost(const Netlist& netlist, const FootprintLibrary& library, const Board& board,
                             const PlacementSet& placement, const CostWeights& weights) {
  PlacementCost cost;
  const auto pads = instantiate_pads(netlist, library, placement);
  std::map<int, Rect> boxes;
  for (const auto& pad : pads) {
    if (pad.net_id < 0) continue;
    auto [it, inserted] = boxes.try_emplace(pad.net_id, Rect{pad.center.x, pad.center.y, pad.center.x, pad.center.y});
    if (!inserted) {
      Rect& r = it->second;
      r.min_x = std::min(r.min_x, pad.center.x);
      r.min_y = std::min(r.min_y, pad.center.y);
      r.max_x = std::max(r.max_x, pad.center.x);
      r.max_y = std::max(r.max_y, pad.center.y);
    }
  }
  for (const auto& [_, r] : boxes) cost.wirelength += r.width() + r.height();

  const auto courts = placed_courtyards(netlist, library, placement);
  const double halo = board.gap() / 2;
  const Rect usable = board.usable_area();
  for (std::size_t i = 0; i < courts.size(); ++i) {
    for (std::size_t j = i + 1; j < courts.size(); ++j) {
      cost.overlap += intersection_area(courts[i].rect.expanded(halo), courts[j].rect.expanded(halo));
    }
    cost.out_of_board += area_outside(courts[i].rect, usable);
  }
  // Tiny negatives from floating subtraction would break feasibility tests.
  if (cost.out_of_board < 1e-9) cost.out_of_board = 0.0;
  cost.total = cost.wirelength + weights.overlap * cost.overlap + weights.out_of_board * cost.out_of_board;
  return cost;
}

std::vector<PlacementViolation> check_overlaps(const std::vector<PlacedCourtyard>& courtyards, const Board& board) {
  std::vector<PlacementViolation> out;
  const double halo = board.gap() / 2;
  for (std::size_t i = 0; i < courtyards.size(); ++i) {
    for (std::size_t j = i + 1; j < courtyards.size(); ++j) {
      const Rect a = courtyards[i].rect.expanded(halo);
      const Rect b = courtyards[j].rect.expanded(halo);
      const double area = intersection_area(a, b);
      if (area > 0) {
        const Rect both{std::max(a.min_x, b.min_x), std::max(a.min_y, b.min_y), std::min(a.max_x, b.max_x),
                        std::min(a.max_y, b.max_y)};
        out.push_back({PlacementViolationKind::Overlap, {courtyards[i].part_id, courtyards[j].part_id}, area,
                       both.center()});
      }
    }
  }
  const Rect usable = board.usable_area();
  for (const auto& c : courtyards) {
    const double outside = area_outside(c.rect, usable);
    if (outside > 1e-9) {
      out.push_back({PlacementViolationKind::OutOfBoard, {c.part_id}, outside, c.rect.center()});
    }
  }
  return out;
}

}  // namespace papercad
