#include <algorithm>
#include <cmath>

#include "grid_ops.hpp"
#include "papercad/error.hpp"
#include "papercad/partition.hpp"

namespace papercad {

LabelGrid geodesic_partition(const SeedGrid& seeds) {
  const GridSpec& g = seeds.grid;
  LabelGrid out(g, kEmpty);

  // Seeds enter the FIFO ordered by (net id, scanline index). Each BFS layer
  // then stays sorted by that key, so a cell's first discoverer is the
  // minimum-key seed among all seeds at the same geodesic distance.
  std::vector<std::size_t> queue;
  queue.reserve(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (is_net(seeds.cells[c])) queue.push_back(c);
  }
  if (queue.empty()) throw Error(ErrorCode::NoSeeds, "nothing to partition: no pad or trace seeds a net");
  std::stable_sort(queue.begin(), queue.end(),
                   [&](std::size_t a, std::size_t b) { return seeds.cells[a] < seeds.cells[b]; });
  for (std::size_t c : queue) out.cells[c] = seeds.cells[c];

  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t c = queue[head];
    const Label label = out.cells[c];
    detail::for_each_neighbor4(g, c, [&](std::size_t n) {
      if (out.cells[n] == kEmpty && seeds.cells[n] != kKeepout) {
        out.cells[n] = label;
        queue.push_back(n);
      }
    });
  }
  for (Label& l : out.cells) {
    if (!is_net(l)) l = kGap;
  }
  return out;
}

ZoneMap carve_gaps(const LabelGrid& labels, const Board& board, const SeedGrid& seeds) {
  const GridSpec& g = labels.grid;
  if (!(g == GridSpec::for_board(board))) {
    throw Error(ErrorCode::Validation, "label grid does not match the board raster");
  }
  const double r = g.resolution;
  const auto halo = detail::disk_offsets(board.gap() / 2 / r, true);

  ZoneMap out;
  static_cast<LabelGrid&>(out) = labels;
  out.board = board;

  std::vector<std::size_t> exempt;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Label k = labels.at(i, j);
      if (!is_net(k)) continue;
      bool uniform = true;
      for (const auto& o : halo) {
        const int a = i + o.di, b = j + o.dj;
        if (g.in_bounds(a, b) && labels.at(a, b) != k) {
          uniform = false;
          break;
        }
      }
      if (uniform) continue;
      const std::size_t idx = g.index(i, j);
      if (seeds.cells.size() == labels.cells.size() && seeds.cells[idx] == k) {
        exempt.push_back(idx);
      } else {
        out.cells[idx] = kGap;
      }
    }
  }

  // Exempted seed cells must still respect the clearance that DRC checks.
  const double limit = board.gap() - 2 * r;
  if (limit > 0) {
    const auto near = detail::disk_offsets(limit / r, false);
    for (std::size_t idx : exempt) {
      const int i = g.col(idx), j = g.row(idx);
      const Label k = out.cells[idx];
      for (const auto& o : near) {
        const int a = i + o.di, b = j + o.dj;
        if (!g.in_bounds(a, b)) continue;
        const Label other = out.at(a, b);
        if (is_net(other) && other != k) {
          ErrorDetail detail;
          detail.nets = {std::min(k, other), std::max(k, other)};
          detail.location = g.center(idx);
          for (const auto& s : seeds.sources) {
            const bool touches = std::binary_search(s.cells.begin(), s.cells.end(), idx) ||
                                 std::binary_search(s.cells.begin(), s.cells.end(), g.index(a, b));
            if (touches) detail.parts.push_back(s.name);
          }
          std::string message = "seeds of nets " + std::to_string(detail.nets[0]) + " and " +
                                std::to_string(detail.nets[1]) + " are closer than the " + format_mm(board.gap()) +
                                " mm gap near (" + format_mm(detail.location->x) + ", " +
                                format_mm(detail.location->y) + ")";
          throw Error(ErrorCode::PadClearanceViolation, message, std::move(detail));
        }
      }
    }
  }

  for (std::size_t idx = 0; idx < out.cells.size(); ++idx) {
    if (in_margin(g, board, idx)) out.cells[idx] = kOutside;
  }
  return out;
}

}  // namespace papercad
