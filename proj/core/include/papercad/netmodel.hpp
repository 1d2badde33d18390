#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "papercad/geometry.hpp"

namespace papercad {

class FootprintLibrary;

struct Part {
  std::string id;             // reference designator, unique per netlist
  std::string footprint_key;  // lookup key into a FootprintLibrary
  std::string label;

  friend bool operator==(const Part&, const Part&) = default;
};

struct PinRef {
  std::string part_id;
  int pin = 1;  // 1-based, footprint pad order

  friend auto operator<=>(const PinRef&, const PinRef&) = default;
};

struct Net {
  int id = 0;  // dense, equal to the index in Netlist::nets
  std::string name;
  std::vector<PinRef> pins;

  friend bool operator==(const Net&, const Net&) = default;
};

struct Netlist {
  std::vector<Part> parts;
  std::vector<Net> nets;

  const Part* find_part(std::string_view id) const;
  // Net id for a pin, or -1 when the pin belongs to no net.
  int net_of(const PinRef& pin) const;

  friend bool operator==(const Netlist&, const Netlist&) = default;
};

// Footprint key given to parts that appear in connectors without ever being
// declared with a footprint (lenient mode only).
inline constexpr std::string_view kUndeclaredFootprint = "undeclared";

struct NetlistParseOptions {
  // Reject connectors that reference a part never declared with a footprint.
  bool strict = false;
};

// Accepts the Fritzing-style netlist export:
//
//   <netlist>
//     <parts><part id="R1" footprint="r_axial" label="220R"/></parts>   (optional)
//     <net name="GND">
//       <connector id="connector1" name="pin 2"><part id="R1" footprint="r_axial"/></connector>
//     </net>
//   </netlist>
//
// The pin index is the trailing integer of the connector id plus one.
Netlist parse_netlist_xml(std::string_view xml_text, const NetlistParseOptions& options = {});

// Canonical form of a netlist in the accepted schema; parsing it yields an
// equal Netlist.
std::string serialize_netlist(const Netlist& netlist);

enum class IssueKind { UnknownFootprint, PinOutOfRange, SinglePinNet, UnconnectedPart };
enum class Severity { Error, Warning };

struct Issue {
  IssueKind kind;
  Severity severity;
  std::string part_id;
  int net_id = -1;
  std::string message;
};

std::string_view to_string(IssueKind kind);

std::vector<Issue> validate_netlist(const Netlist& netlist, const FootprintLibrary& library);

bool has_blocking_issue(const std::vector<Issue>& issues);

// ---------------------------------------------------------------------------
// Trace layers exported from a PCB tool as SVG.

struct TraceGeometry {
  Polyline path;
  double stroke_width = 0.0;  // mm; 0 for fill-only shapes
  bool filled = false;        // interior belongs to the net
};

struct TraceNet {
  std::string name;
  std::vector<TraceGeometry> geometry;
};

struct TraceLayer {
  double width = 0.0;   // mm
  double height = 0.0;  // mm
  std::vector<TraceNet> nets;  // document order of first appearance
  std::vector<TraceGeometry> unassigned;
  std::vector<std::string> warnings;
};

// Reads `path`, `line`, `polyline`, `polygon`, `rect` and `circle` elements.
// The root must carry a viewBox and width/height in a physical unit
// (mm, cm or in). `translate`, `scale` and `matrix` transforms are honoured;
// net names and stroke styles are inherited from enclosing groups.
TraceLayer parse_trace_layer(std::string_view svg_text, std::string_view net_attr = "data-net");

}  // namespace papercad
