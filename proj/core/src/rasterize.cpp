#include <algorithm>
#include <cmath>

#include "papercad/error.hpp"
#include "papercad/partition.hpp"

namespace papercad {

GridSpec GridSpec::for_board(const Board& board) {
  const double r = board.resolution();
  return {static_cast<int>(std::ceil(board.width() / r - 1e-9)),
          static_cast<int>(std::ceil(board.height() / r - 1e-9)), r};
}

bool in_margin(const GridSpec& grid, const Board& board, std::size_t idx) {
  const Point c = grid.center(idx);
  const double m = board.margin();
  return c.x < m || c.y < m || c.x > board.width() - m || c.y > board.height() - m;
}

namespace {

constexpr double kTol = 1e-9;

// Index range of cells whose centres may lie in [lo, hi].
std::pair<int, int> cell_span(double lo, double hi, double r, int n) {
  const int a = std::max(0, static_cast<int>(std::ceil(lo / r - 0.5 - 1e-9)));
  const int b = std::min(n - 1, static_cast<int>(std::floor(hi / r - 0.5 + 1e-9)));
  return {a, b};
}

void require_inside(const Rect& bounds, const Board& board, const std::string& what) {
  if (!board.outline().contains(bounds, 1e-6)) {
    throw Error(ErrorCode::OutOfBoard, what + " extends beyond the board", ErrorDetail{.parts = {what}});
  }
}

class Stamper {
 public:
  Stamper(SeedGrid& grid) : grid_(grid), owner_(grid.cells.size(), -1) {}

  void stamp(std::size_t idx, int source) {
    Label& cell = grid_.cells[idx];
    const Label want = grid_.sources[static_cast<std::size_t>(source)].net;
    if (cell == kEmpty) {
      cell = want;
      owner_[idx] = source;
    } else if (cell != want) {
      const auto& a = grid_.sources[static_cast<std::size_t>(owner_[idx])];
      const auto& b = grid_.sources[static_cast<std::size_t>(source)];
      ErrorDetail detail;
      detail.parts = {a.name, b.name};
      for (Label l : {a.net, b.net}) {
        if (is_net(l)) detail.nets.push_back(l);
      }
      detail.location = grid_.grid.center(idx);
      const Point at = *detail.location;
      throw Error(ErrorCode::SeedConflict,
                  "seed conflict between " + a.name + " and " + b.name + " at (" + format_mm(at.x) + ", " +
                      format_mm(at.y) + "): move them apart",
                  std::move(detail));
    }
    auto& cells = grid_.sources[static_cast<std::size_t>(source)].cells;
    cells.push_back(idx);
  }

 private:
  SeedGrid& grid_;
  std::vector<int> owner_;
};

void check_net_id(int net) {
  if (net >= kMaxNets) {
    throw Error(ErrorCode::Validation, "net id " + std::to_string(net) + " exceeds the supported " +
                                           std::to_string(kMaxNets) + " nets");
  }
}

void finish_sources(SeedGrid& grid) {
  for (auto& s : grid.sources) {
    std::sort(s.cells.begin(), s.cells.end());
    s.cells.erase(std::unique(s.cells.begin(), s.cells.end()), s.cells.end());
  }
}

std::size_t containing_cell(Point p, const GridSpec& g) {
  const int i = std::clamp(static_cast<int>(std::floor(p.x / g.resolution)), 0, g.nx - 1);
  const int j = std::clamp(static_cast<int>(std::floor(p.y / g.resolution)), 0, g.ny - 1);
  return g.index(i, j);
}

}  // namespace

std::vector<std::size_t> pad_cells(const PadInstance& pad, const GridSpec& grid) {
  std::vector<std::size_t> out;
  const Rect b = pad.shape.bounds(pad.center);
  const double r = grid.resolution;
  const auto [i0, i1] = cell_span(b.min_x, b.max_x, r, grid.nx);
  const auto [j0, j1] = cell_span(b.min_y, b.max_y, r, grid.ny);
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      if (pad.shape.contains(pad.center, grid.center(i, j), kTol)) out.push_back(grid.index(i, j));
    }
  }
  if (out.empty()) out.push_back(containing_cell(pad.center, grid));
  return out;
}

SeedGrid rasterize_pads(std::span<const PadInstance> pads, const Board& board) {
  SeedGrid grid;
  static_cast<LabelGrid&>(grid) = LabelGrid(GridSpec::for_board(board), kEmpty);
  for (const auto& pad : pads) {
    const std::string name = pad.part_id + "." + std::to_string(pad.pin);
    require_inside(pad.shape.bounds(pad.center), board, "pad " + name);
    check_net_id(pad.net_id);
    grid.sources.push_back(SeedSource{pad.net_id >= 0 ? pad.net_id : kKeepout, name, {}});
  }
  Stamper stamper(grid);
  for (std::size_t k = 0; k < pads.size(); ++k) {
    for (std::size_t idx : pad_cells(pads[k], grid.grid)) stamper.stamp(idx, static_cast<int>(k));
  }
  finish_sources(grid);
  return grid;
}

namespace {

void stamp_geometry(const TraceGeometry& g, const GridSpec& grid, const Board& board, Stamper& stamper, int source,
                    const std::string& name) {
  if (g.path.points.empty()) return;
  const double half = g.stroke_width / 2;
  Rect b{g.path.points[0].x, g.path.points[0].y, g.path.points[0].x, g.path.points[0].y};
  for (const Point& p : g.path.points) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  b = b.expanded(half);
  require_inside(b, board, "trace of net " + name);

  const double r = grid.resolution;
  const auto [i0, i1] = cell_span(b.min_x, b.max_x, r, grid.nx);
  const auto [j0, j1] = cell_span(b.min_y, b.max_y, r, grid.ny);
  bool any = false;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const Point c = grid.center(i, j);
      const bool inside = (g.filled && g.path.points.size() >= 3 && point_in_ring(c, g.path.points)) ||
                          (half > 0 && distance_to_polyline(c, g.path) <= half + kTol);
      if (inside) {
        stamper.stamp(grid.index(i, j), source);
        any = true;
      }
    }
  }
  if (!any) stamper.stamp(containing_cell(g.path.points[0], grid), source);
}

}  // namespace

SeedGrid rasterize_traces(const TraceLayer& traces, const Board& board,
                          const std::map<std::string, int, std::less<>>& net_index) {
  SeedGrid grid;
  static_cast<LabelGrid&>(grid) = LabelGrid(GridSpec::for_board(board), kEmpty);
  for (const auto& net : traces.nets) {
    auto it = net_index.find(net.name);
    if (it == net_index.end()) {
      throw Error(ErrorCode::UnknownNetName, "trace layer names unknown net '" + net.name + "'",
                  ErrorDetail{.parts = {net.name}});
    }
    check_net_id(it->second);
    grid.sources.push_back(SeedSource{it->second, net.name, {}});
  }
  if (!traces.unassigned.empty()) grid.sources.push_back(SeedSource{kKeepout, "unassigned", {}});

  Stamper stamper(grid);
  for (std::size_t k = 0; k < traces.nets.size(); ++k) {
    for (const auto& g : traces.nets[k].geometry) {
      stamp_geometry(g, grid.grid, board, stamper, static_cast<int>(k), traces.nets[k].name);
    }
  }
  const int unassigned = static_cast<int>(traces.nets.size());
  for (const auto& g : traces.unassigned) stamp_geometry(g, grid.grid, board, stamper, unassigned, "unassigned");
  finish_sources(grid);
  return grid;
}

}  // namespace papercad
