#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "papercad/footprint.hpp"
#include "papercad/geometry.hpp"
#include "papercad/partition.hpp"

namespace papercad {

enum class ViolationKind { Clearance, DisconnectedNet, ThinFeature, PadUncovered, OutOfBoard, SeedConflict };

// "CLEARANCE", "DISCONNECTED_NET", ...
std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::Clearance;
  Point location;                    // blob centroid, mm
  Rect bounds;                       // extent of the offending cells, mm
  std::vector<int> nets;             // ascending
  std::vector<std::string> parts;    // seed sources involved, when known
  std::vector<std::size_t> cells;    // offending cells, ascending
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct DrcReport {
  std::vector<Violation> violations;
  bool pass = true;

  friend bool operator==(const DrcReport&, const DrcReport&) = default;
};

// Rules, with r the raster resolution:
//   CLEARANCE         cells of different nets whose centres are closer than g - 2r
//   DISCONNECTED_NET  a net's seeds do not share one 4-connected region
//   THIN_FEATURE      zone cells an opening with the w_min disk would remove
//   PAD_UNCOVERED     seed cells not labelled with their net
//   OUT_OF_BOARD      zone cells inside the margin band
// One violation per connected offending blob; ordered by kind, then y, then x.
// Seedless input (a bare dump) skips the two seed rules.
DrcReport run_drc(const ZoneMap& zones, std::span<const SeedSource> seeds);
DrcReport run_drc(const ZoneMap& zones, std::span<const PadInstance> pads);

// Cells involved in at least one clearance violation, ascending.
std::vector<std::size_t> clearance_violating_cells(const ZoneMap& zones);

// One line naming the rule, the nets (by name when known) and a fix.
std::string explain_violation(const Violation& v, const std::vector<std::string>& net_names = {});

// Text report: a header comment, one "KIND x y nets detail" line per
// violation (nets comma separated, "-" when none), then the JSON payload.
std::string format_drc_report(const DrcReport& report, const std::vector<std::string>& net_names = {});

// {"pass": bool, "violations": [{"kind", "x", "y", "nets", "parts", "detail", "message"}]}
std::string drc_report_json(const DrcReport& report, const std::vector<std::string>& net_names = {});

}  // namespace papercad
