#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "papercad/board.hpp"
#include "papercad/geometry.hpp"
#include "papercad/netmodel.hpp"

namespace papercad {

enum class PadKind { Rect, Circle };

struct PadShape {
  PadKind kind = PadKind::Rect;
  double w = 1.0;  // mm; diameter for circles
  double h = 1.0;  // mm; equal to w for circles

  static PadShape rect(double w, double h) { return {PadKind::Rect, w, h}; }
  static PadShape circle(double diameter) { return {PadKind::Circle, diameter, diameter}; }

  PadShape rotated(Rotation r) const;
  Rect bounds(Point center) const { return Rect::centered(center, w, h); }
  bool contains(Point center, Point p, double tol = 1e-9) const;

  friend bool operator==(const PadShape&, const PadShape&) = default;
};

// How the component is fixed to the conductive layer.
enum class Attach {
  StaplerSlot,  // leads pierce the paper like staple legs
  TapePad,      // held down with a strip of copper tape
  SolderPad,
};

std::string_view to_string(Attach attach);

struct Pad {
  Point offset;  // footprint-local frame, mm
  PadShape shape;

  friend bool operator==(const Pad&, const Pad&) = default;
};

struct Footprint {
  std::string key;
  std::vector<Pad> pads;  // pad i is pin i + 1
  Attach attach = Attach::TapePad;
  double courtyard_w = 0.0;  // courtyard is centred on the local origin
  double courtyard_h = 0.0;

  Rect courtyard() const { return Rect::centered({0, 0}, courtyard_w, courtyard_h); }
  // Courtyard in the board frame for a placement.
  Rect placed_courtyard(const Placement& placement) const;

  friend bool operator==(const Footprint&, const Footprint&) = default;
};

// Throws ValidationError when a pad has a non-positive dimension, the
// footprint has no pads, or a pad leaves the courtyard.
void validate_footprint(const Footprint& footprint);

class FootprintLibrary {
 public:
  // Axial resistor, 5 mm LED, 4-pin RGB LED, DIP-8/14/16 sockets, CR2032
  // tape clip and SPST slide switch.
  static FootprintLibrary builtin();

  const Footprint* find(std::string_view key) const;
  const Footprint& at(std::string_view key) const;  // throws UnknownFootprint
  void insert_or_replace(Footprint footprint);
  std::vector<std::string> keys() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, Footprint, std::less<>> entries_;
};

// Parses a YAML footprint library and merges it over `base` (entries shadow
// base entries with the same key):
//
//   footprint:
//     - key: r_axial
//       attach: tape_pad            # stapler_slot | tape_pad | solder_pad
//       courtyard: {w: 22, h: 8}
//       pads:
//         - {x: -7.5, y: 0, shape: rect, w: 6, h: 6}
//         - {x: 7.5, y: 0, shape: circle, d: 6}
FootprintLibrary load_footprint_library(std::string_view text,
                                        FootprintLibrary base = FootprintLibrary::builtin());

struct PadInstance {
  std::string part_id;
  int pin = 1;
  int net_id = -1;  // -1: pin belongs to no net
  Point center;     // board frame
  PadShape shape;   // already rotated
  Rotation rotation = Rotation::R0;

  friend bool operator==(const PadInstance&, const PadInstance&) = default;
};

// Rotates each pad about the part origin, then translates. Ordered by
// (part id, pin). Throws MissingPlacement / UnknownFootprint.
std::vector<PadInstance> instantiate_pads(const Netlist& netlist, const FootprintLibrary& library,
                                          const PlacementSet& placement);

}  // namespace papercad
