#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "papercad/board.hpp"
#include "papercad/footprint.hpp"
#include "papercad/geometry.hpp"
#include "papercad/netmodel.hpp"

namespace papercad {

// Cell labels: non-negative values are net ids.
using Label = std::int32_t;
inline constexpr Label kEmpty = -1;
inline constexpr Label kKeepout = -2;
inline constexpr Label kGap = -3;
inline constexpr Label kOutside = -4;
inline constexpr int kMaxNets = 251;  // net ids must fit the debug dump byte

inline bool is_net(Label l) { return l >= 0; }

// Raster over the board: cell (i, j) covers [i*r, (i+1)*r) x [j*r, (j+1)*r),
// row-major with j as the row.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double resolution = 0.0;

  static GridSpec for_board(const Board& board);

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  bool in_bounds(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  int col(std::size_t idx) const { return static_cast<int>(idx % nx); }
  int row(std::size_t idx) const { return static_cast<int>(idx / nx); }
  Point center(int i, int j) const { return {(i + 0.5) * resolution, (j + 0.5) * resolution}; }
  Point center(std::size_t idx) const { return center(col(idx), row(idx)); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct LabelGrid {
  GridSpec grid;
  std::vector<Label> cells;

  LabelGrid() = default;
  LabelGrid(GridSpec g, Label fill) : grid(g), cells(g.size(), fill) {}

  Label at(int i, int j) const { return cells[grid.index(i, j)]; }
  Label& at(int i, int j) { return cells[grid.index(i, j)]; }

  friend bool operator==(const LabelGrid&, const LabelGrid&) = default;
};

// A group of seed cells that must end up in one conductive region: one pad,
// or all geometry of one trace net.
struct SeedSource {
  Label net = kKeepout;  // kKeepout for unconnected pads and unassigned traces
  std::string name;      // "R1.2" for pads, the net name for traces
  std::vector<std::size_t> cells;
};

struct SeedGrid : LabelGrid {
  std::vector<SeedSource> sources;
};

struct ZoneMap : LabelGrid {
  Board board;
};

// Cells whose centres fall inside the pad. A pad too small to cover any
// centre claims the cell containing its centre.
std::vector<std::size_t> pad_cells(const PadInstance& pad, const GridSpec& grid);

// Throws SeedConflict (different nets claim a cell) and OutOfBoard.
SeedGrid rasterize_pads(std::span<const PadInstance> pads, const Board& board);

// Cells within half the stroke width of a trace (or inside a filled shape)
// take the trace's net. Unassigned geometry stamps KEEPOUT.
// Throws SeedConflict, UnknownNetName, OutOfBoard.
SeedGrid rasterize_traces(const TraceLayer& traces, const Board& board,
                          const std::map<std::string, int, std::less<>>& net_index);

// Every cell reachable from a seed without crossing KEEPOUT joins the net of
// its geodesically nearest seed (4-connected unit steps). Ties go to the
// lower net id, then to the seed that comes first in scanline order.
// Unreachable and KEEPOUT cells become GAP. Throws NoSeeds.
LabelGrid geodesic_partition(const SeedGrid& seeds);

// A labelled cell keeps its net only if every cell centre within gap/2 has
// the same net (cells beyond the raster do not count). Seed cells are exempt
// when that keeps different nets at least gap - 2r apart; otherwise throws
// PadClearanceViolation. Cells in the margin band become OUTSIDE.
ZoneMap carve_gaps(const LabelGrid& labels, const Board& board, const SeedGrid& seeds);

// Per-net morphological opening with a disk of radius min_feature/2; the
// removed cells become GAP. Throws FeatureTooThin when this eats a seed cell
// or splits a net whose seeds were connected.
ZoneMap enforce_min_feature(const ZoneMap& zones, const SeedGrid& seeds);

// net id -> all seed cells of that net lie in one 4-connected region of
// cells carrying the net.
std::map<int, bool> check_zone_connectivity(const ZoneMap& zones, std::span<const SeedSource> sources);
std::map<int, bool> check_zone_connectivity(const ZoneMap& zones, std::span<const PadInstance> pads);

struct ZonePolygon {
  std::vector<Point> outer;               // positive signed area
  std::vector<std::vector<Point>> holes;  // negative signed area

  friend bool operator==(const ZonePolygon&, const ZonePolygon&) = default;
};

struct ZoneLayout {
  Board board;
  std::map<int, std::vector<ZonePolygon>> zones;  // net id -> polygons
  // Blade paths separating regions that must not stay electrically joined:
  // channel centre lines between different nets and the outlines of isolated
  // GAP islands. Each physical cut appears once.
  std::vector<Polyline> cut_paths;
  // Copper outline: boundary of the non-margin area, cut to weed the margin.
  Polyline outline;
  std::map<int, Point> label_anchors;  // a point deep inside each net's zone

  std::size_t polygon_count() const;
};

// Traces cell-edge boundaries, then simplifies them (Douglas-Peucker,
// `tolerance` mm). GAP-only maps give an empty layout.
ZoneLayout vectorize(const ZoneMap& zones, double tolerance = 0.1);

// Debug dump: header line "nx ny r" then one byte per cell, row-major:
// net id 0..250, 251 GAP, 252 OUTSIDE, 253 KEEPOUT, 254 EMPTY.
std::string dump_zonemap(const LabelGrid& zones);
LabelGrid parse_zonemap_dump(std::string_view bytes);
// Attaches a board to a parsed dump; throws Validation when the raster does
// not match the board's grid.
ZoneMap zonemap_for_board(LabelGrid grid, const Board& board);

// Cells in the margin band (centre closer than `margin` to the board edge,
// or beyond the board).
bool in_margin(const GridSpec& grid, const Board& board, std::size_t idx);

}  // namespace papercad
