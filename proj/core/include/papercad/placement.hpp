#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "papercad/board.hpp"
#include "papercad/footprint.hpp"
#include "papercad/netmodel.hpp"

namespace papercad {

// Placement file: one `part_id x_mm y_mm rot` entry per line, `#` starts a
// comment. The form `part_id at x,y rot r` is accepted as well.
// Throws ParseError, UnknownPart, BadRotation.
PlacementSet load_placement(std::string_view text, const Netlist& netlist);

// Canonical placement file, coordinates snapped to 0.1 mm.
std::string format_placement(const PlacementSet& placement);

double snap(double value, double step);

struct PlacementCost {
  double wirelength = 0.0;    // mm, sum of per-net half-perimeters of pad centres
  double overlap = 0.0;       // mm^2, pairwise courtyard intersections (gap/2 halo)
  double out_of_board = 0.0;  // mm^2, courtyard area outside the usable area
  double total = 0.0;

  bool feasible() const { return overlap == 0.0 && out_of_board == 0.0; }
};

struct CostWeights {
  double overlap = 10.0;       // per mm
  double out_of_board = 100.0; // per mm
};

PlacementCost placement_cost(const Netlist& netlist, const FootprintLibrary& library, const Board& board,
                             const PlacementSet& placement, const CostWeights& weights = {});

struct PlacedCourtyard {
  std::string part_id;
  Rect rect;  // board frame, without halo
};

std::vector<PlacedCourtyard> placed_courtyards(const Netlist& netlist, const FootprintLibrary& library,
                                               const PlacementSet& placement);

enum class PlacementViolationKind { Overlap, OutOfBoard };

struct PlacementViolation {
  PlacementViolationKind kind;
  std::vector<std::string> parts;
  double area = 0.0;  // mm^2
  Point location;
};

// One violation per intersecting courtyard pair (each courtyard grown by
// gap/2) and one per courtyard leaving the usable area.
std::vector<PlacementViolation> check_overlaps(const std::vector<PlacedCourtyard>& courtyards,
                                               const Board& board);

struct AnnealOptions {
  CostWeights weights;
  double cooling = 0.95;
  int moves_per_temperature = 200;
  int calibration_moves = 100;
  double stop_ratio = 1e-3;  // stop once T < stop_ratio * T0
  double move_snap = 1.0;    // mm
};

// Simulated annealing over integer 0.1 mm positions. Returns the best
// feasible placement seen; deterministic for a given seed. Throws
// Infeasible when the haloed courtyards cannot fit the usable area, or when
// no feasible state was found.
PlacementSet auto_place(const Netlist& netlist, const FootprintLibrary& library, const Board& board,
                        std::uint64_t seed, const AnnealOptions& options = {});

}  // namespace papercad
