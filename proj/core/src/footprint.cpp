#include "papercad/footprint.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "papercad/error.hpp"

namespace papercad {

PadShape PadShape::rotated(Rotation r) const {
  if (r == Rotation::R90 || r == Rotation::R270) return {kind, h, w};
  return *this;
}

bool PadShape::contains(Point center, Point p, double tol) const {
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  if (kind == PadKind::Circle) {
    const double rad = w / 2 + tol;
    return dx * dx + dy * dy <= rad * rad;
  }
  return std::abs(dx) <= w / 2 + tol && std::abs(dy) <= h / 2 + tol;
}

std::string_view to_string(Attach attach) {
  switch (attach) {
    case Attach::StaplerSlot: return "stapler_slot";
    case Attach::TapePad: return "tape_pad";
    case Attach::SolderPad: return "solder_pad";
  }
  return "tape_pad";
}

Rect Footprint::placed_courtyard(const Placement& placement) const {
  const bool swap = placement.rotation == Rotation::R90 || placement.rotation == Rotation::R270;
  return Rect::centered({placement.x, placement.y}, swap ? courtyard_h : courtyard_w,
                        swap ? courtyard_w : courtyard_h);
}

void validate_footprint(const Footprint& fp) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::Validation, "footprint '" + fp.key + "': " + why);
  };
  if (fp.key.empty()) throw Error(ErrorCode::Validation, "footprint with empty key");
  if (fp.pads.empty()) fail("has no pads");
  if (!(fp.courtyard_w > 0) || !(fp.courtyard_h > 0)) fail("courtyard dimensions must be positive");
  const Rect court = fp.courtyard();
  for (std::size_t i = 0; i < fp.pads.size(); ++i) {
    const Pad& pad = fp.pads[i];
    if (!(pad.shape.w > 0) || !(pad.shape.h > 0)) {
      fail("pad " + std::to_string(i + 1) + " has a non-positive dimension");
    }
    if (!court.contains(pad.shape.bounds(pad.offset))) {
      fail("pad " + std::to_string(i + 1) + " at (" + format_mm(pad.offset.x) + ", " +
           format_mm(pad.offset.y) + ") lies outside the courtyard");
    }
  }
}

namespace {

constexpr double kDipPitch = 2.54;
constexpr double kDipRowSpacing = 7.62;
// Stapler slot: one slot per leg, long axis across the pin row so the pad
// spans both piercings of the bent leg.
constexpr double kSlotWidth = 1.0;
constexpr double kSlotLength = 4.0;
constexpr double kTapePad = 6.0;

Footprint two_pad(std::string key, double half_span, double court_w, double court_h) {
  return Footprint{std::move(key),
                   {{{-half_span, 0}, PadShape::rect(kTapePad, kTapePad)},
                    {{half_span, 0}, PadShape::rect(kTapePad, kTapePad)}},
                   Attach::TapePad,
                   court_w,
                   court_h};
}

// DIP numbering: pin 1 at the left end of the lower row, counting along the
// lower row and back along the upper row.
Footprint dip_socket(int pins) {
  Footprint fp;
  fp.key = "dip" + std::to_string(pins);
  fp.attach = Attach::StaplerSlot;
  const int per_row = pins / 2;
  const double x0 = -(per_row - 1) * kDipPitch / 2;
  for (int i = 0; i < per_row; ++i) {
    fp.pads.push_back({{x0 + i * kDipPitch, kDipRowSpacing / 2}, PadShape::rect(kSlotWidth, kSlotLength)});
  }
  for (int i = per_row - 1; i >= 0; --i) {
    fp.pads.push_back({{x0 + i * kDipPitch, -kDipRowSpacing / 2}, PadShape::rect(kSlotWidth, kSlotLength)});
  }
  fp.courtyard_w = (per_row - 1) * kDipPitch + kSlotWidth + 2.0;
  fp.courtyard_h = kDipRowSpacing + kSlotLength + 1.0;
  return fp;
}

double required(const YAML::Node& node, const char* key, const std::string& where) {
  const auto v = node[key];
  if (!v) throw ParseError(where + ": missing '" + key + "'", node.Mark().line + 1, node.Mark().column + 1);
  return v.as<double>();
}

Attach parse_attach(const std::string& s, const std::string& where) {
  if (s == "stapler_slot") return Attach::StaplerSlot;
  if (s == "tape_pad") return Attach::TapePad;
  if (s == "solder_pad") return Attach::SolderPad;
  throw ParseError(where + ": unknown attach style '" + s + "'");
}

Footprint parse_entry(const YAML::Node& node) {
  Footprint fp;
  if (!node.IsMap() || !node["key"]) {
    throw ParseError("footprint entry without a key", node.Mark().line + 1, node.Mark().column + 1);
  }
  fp.key = node["key"].as<std::string>();
  const std::string where = "footprint '" + fp.key + "'";
  fp.attach = parse_attach(node["attach"] ? node["attach"].as<std::string>() : "tape_pad", where);
  const auto court = node["courtyard"];
  if (!court) throw ParseError(where + ": missing courtyard");
  fp.courtyard_w = required(court, "w", where);
  fp.courtyard_h = required(court, "h", where);
  const auto pads = node["pads"];
  if (!pads || !pads.IsSequence()) throw ParseError(where + ": 'pads' must be a list");
  for (const auto& p : pads) {
    Pad pad;
    pad.offset = {required(p, "x", where), required(p, "y", where)};
    const std::string shape = p["shape"] ? p["shape"].as<std::string>() : "rect";
    if (shape == "rect") {
      pad.shape = PadShape::rect(required(p, "w", where), required(p, "h", where));
    } else if (shape == "circle") {
      pad.shape = PadShape::circle(p["d"] ? p["d"].as<double>() : required(p, "w", where));
    } else {
      throw ParseError(where + ": unknown pad shape '" + shape + "'");
    }
    fp.pads.push_back(pad);
  }
  return fp;
}

}  // namespace

FootprintLibrary FootprintLibrary::builtin() {
  FootprintLibrary lib;
  lib.insert_or_replace(two_pad("r_axial", 7.5, 22.0, 8.0));
  lib.insert_or_replace(two_pad("led_5mm", 4.5, 16.0, 8.0));
  lib.insert_or_replace(two_pad("spst_slide", 5.0, 18.0, 8.0));
  {
    Footprint rgb{"rgb_led_4pin", {}, Attach::TapePad, 32.0, 8.0};
    for (double x : {-12.0, -4.0, 4.0, 12.0}) rgb.pads.push_back({{x, 0}, PadShape::rect(kTapePad, kTapePad)});
    lib.insert_or_replace(std::move(rgb));
  }
  lib.insert_or_replace(dip_socket(8));
  lib.insert_or_replace(dip_socket(14));
  lib.insert_or_replace(dip_socket(16));
  // Coin cell taped face-down on the negative pad; a tape strip carries the
  // positive face to the square pad.
  lib.insert_or_replace(Footprint{"cr2032_clip",
                                  {{{-12.0, 0}, PadShape::rect(kTapePad, kTapePad)},
                                   {{5.0, 0}, PadShape::circle(12.0)}},
                                  Attach::TapePad,
                                  32.0,
                                  22.0});
  return lib;
}

const Footprint* FootprintLibrary::find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

const Footprint& FootprintLibrary::at(std::string_view key) const {
  if (const Footprint* fp = find(key)) return *fp;
  throw Error(ErrorCode::UnknownFootprint, "unknown footprint '" + std::string(key) + "'");
}

void FootprintLibrary::insert_or_replace(Footprint footprint) {
  validate_footprint(footprint);
  std::string key = footprint.key;
  entries_.insert_or_assign(std::move(key), std::move(footprint));
}

std::vector<std::string> FootprintLibrary::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : entries_) out.push_back(k);
  return out;
}

FootprintLibrary load_footprint_library(std::string_view text, FootprintLibrary base) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError("footprint library: " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (root.IsNull()) return base;
  if (!root.IsMap()) throw ParseError("footprint library: top level must be a mapping");
  const auto entries = root["footprint"];
  if (!entries) return base;
  if (!entries.IsSequence()) throw ParseError("footprint library: 'footprint' must be a list");

  std::set<std::string> seen;
  std::vector<Footprint> parsed;
  try {
    for (const auto& node : entries) {
      Footprint fp = parse_entry(node);
      if (!seen.insert(fp.key).second) {
        throw Error(ErrorCode::Validation, "footprint '" + fp.key + "' defined twice in one file");
      }
      validate_footprint(fp);
      parsed.push_back(std::move(fp));
    }
  } catch (const YAML::Exception& e) {
    throw ParseError("footprint library: " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  for (auto& fp : parsed) base.insert_or_replace(std::move(fp));
  return base;
}

std::vector<PadInstance> instantiate_pads(const Netlist& netlist, const FootprintLibrary& library,
                                          const PlacementSet& placement) {
  std::vector<const Part*> parts;
  for (const auto& p : netlist.parts) parts.push_back(&p);
  std::sort(parts.begin(), parts.end(), [](const Part* a, const Part* b) { return a->id < b->id; });

  std::map<PinRef, int> net_of;
  for (const auto& net : netlist.nets) {
    for (const auto& pin : net.pins) net_of[pin] = net.id;
  }

  std::vector<PadInstance> out;
  for (const Part* part : parts) {
    const Footprint* fp = library.find(part->footprint_key);
    if (fp == nullptr) {
      throw Error(ErrorCode::UnknownFootprint,
                  "part " + part->id + " uses unknown footprint '" + part->footprint_key + "'",
                  ErrorDetail{.parts = {part->id}});
    }
    auto it = placement.find(part->id);
    if (it == placement.end()) {
      throw Error(ErrorCode::MissingPlacement, "part " + part->id + " is not placed",
                  ErrorDetail{.parts = {part->id}});
    }
    const Placement& pl = it->second;
    for (std::size_t i = 0; i < fp->pads.size(); ++i) {
      const Pad& pad = fp->pads[i];
      const Point local = rotate(pad.offset, pl.rotation);
      PadInstance inst;
      inst.part_id = part->id;
      inst.pin = static_cast<int>(i) + 1;
      auto net = net_of.find(PinRef{part->id, inst.pin});
      inst.net_id = net == net_of.end() ? -1 : net->second;
      inst.center = {pl.x + local.x, pl.y + local.y};
      inst.shape = pad.shape.rotated(pl.rotation);
      inst.rotation = pl.rotation;
      out.push_back(std::move(inst));
    }
  }
  return out;
}

}  // namespace papercad
