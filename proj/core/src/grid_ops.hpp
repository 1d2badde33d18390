#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "papercad/partition.hpp"

namespace papercad::detail {

struct Offset {
  int di;
  int dj;
};

// Offsets (excluding the origin) whose centre distance is <= radius
// (inclusive) or < radius (strict); distances in cells.
std::vector<Offset> disk_offsets(double radius_cells, bool inclusive);

// True when two cell centres `d2` (squared distance in mm^2) apart violate
// the clearance `limit` mm. Shared by carving and DRC so the two agree.
inline bool closer_than(double d2, double limit) { return d2 < limit * limit - 1e-9; }

// 4-connected component ids for cells where `member` holds, -1 elsewhere.
// Components are numbered in scanline order of their first cell.
std::vector<int> label_components(const GridSpec& grid, const std::function<bool(std::size_t)>& member,
                                  int* count = nullptr);

// Opening of every net region by a disk of radius `radius_cells`; returns a
// mask of the net cells that survive.
std::vector<bool> opening_survivors(const LabelGrid& zones, double radius_cells);

// Whether all `cells` carry `net` and lie in one 4-connected net region.
bool cells_connected(const LabelGrid& zones, Label net, const std::vector<std::size_t>& cells);

template <typename F>
void for_each_neighbor4(const GridSpec& g, std::size_t idx, F&& f) {
  const int i = g.col(idx);
  const int j = g.row(idx);
  if (i > 0) f(idx - 1);
  if (i + 1 < g.nx) f(idx + 1);
  if (j > 0) f(idx - static_cast<std::size_t>(g.nx));
  if (j + 1 < g.ny) f(idx + static_cast<std::size_t>(g.nx));
}

}  // namespace papercad::detail
