#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "grid_ops.hpp"
#include "papercad/error.hpp"

namespace papercad {
namespace detail {

std::vector<Offset> disk_offsets(double radius_cells, bool inclusive) {
  std::vector<Offset> out;
  const int reach = static_cast<int>(std::ceil(radius_cells));
  const double r2 = radius_cells * radius_cells;
  for (int dj = -reach; dj <= reach; ++dj) {
    for (int di = -reach; di <= reach; ++di) {
      if (di == 0 && dj == 0) continue;
      const double d2 = static_cast<double>(di * di + dj * dj);
      if (inclusive ? d2 <= r2 + 1e-9 : d2 < r2 - 1e-9) out.push_back({di, dj});
    }
  }
  return out;
}

std::vector<int> label_components(const GridSpec& grid, const std::function<bool(std::size_t)>& member, int* count) {
  std::vector<int> comp(grid.size(), -1);
  std::vector<std::size_t> stack;
  int next = 0;
  for (std::size_t start = 0; start < grid.size(); ++start) {
    if (comp[start] != -1 || !member(start)) continue;
    comp[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      for_each_neighbor4(grid, c, [&](std::size_t n) {
        if (comp[n] == -1 && member(n)) {
          comp[n] = next;
          stack.push_back(n);
        }
      });
    }
    ++next;
  }
  if (count != nullptr) *count = next;
  return comp;
}

std::vector<bool> opening_survivors(const LabelGrid& zones, double radius_cells) {
  const GridSpec& g = zones.grid;
  const auto disk = disk_offsets(radius_cells, true);
  std::vector<bool> kept(g.size(), false);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Label k = zones.at(i, j);
      if (!is_net(k)) continue;
      bool interior = true;
      for (const auto& o : disk) {
        const int a = i + o.di, b = j + o.dj;
        if (!g.in_bounds(a, b) || zones.at(a, b) != k) {
          interior = false;
          break;
        }
      }
      if (!interior) continue;
      kept[g.index(i, j)] = true;
      for (const auto& o : disk) kept[g.index(i + o.di, j + o.dj)] = true;
    }
  }
  return kept;
}

bool cells_connected(const LabelGrid& zones, Label net, const std::vector<std::size_t>& cells) {
  if (cells.empty()) return true;
  for (std::size_t c : cells) {
    if (zones.cells[c] != net) return false;
  }
  const GridSpec& g = zones.grid;
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack{cells.front()};
  seen[cells.front()] = true;
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    for_each_neighbor4(g, c, [&](std::size_t n) {
      if (!seen[n] && zones.cells[n] == net) {
        seen[n] = true;
        stack.push_back(n);
      }
    });
  }
  return std::all_of(cells.begin(), cells.end(), [&](std::size_t c) { return seen[c]; });
}

}  // namespace detail

namespace {

std::map<int, std::vector<std::size_t>> seed_cells_by_net(std::span<const SeedSource> sources) {
  std::map<int, std::vector<std::size_t>> out;
  for (const auto& s : sources) {
    if (!is_net(s.net)) continue;
    auto& v = out[s.net];
    v.insert(v.end(), s.cells.begin(), s.cells.end());
  }
  for (auto& [_, v] : out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return out;
}

}  // namespace

ZoneMap enforce_min_feature(const ZoneMap& zones, const SeedGrid& seeds) {
  const double radius = zones.board.min_feature() / 2 / zones.grid.resolution;
  const auto kept = detail::opening_survivors(zones, radius);
  ZoneMap out = zones;
  for (std::size_t c = 0; c < out.cells.size(); ++c) {
    if (is_net(out.cells[c]) && !kept[c]) out.cells[c] = kGap;
  }
  for (const auto& [net, cells] : seed_cells_by_net(seeds.sources)) {
    bool ate_seed = false;
    for (std::size_t c : cells) {
      if (zones.cells[c] == net && out.cells[c] != net) ate_seed = true;
    }
    const bool was_connected = detail::cells_connected(zones, net, cells);
    if (ate_seed || (was_connected && !detail::cells_connected(out, net, cells))) {
      ErrorDetail detail;
      detail.nets = {net};
      for (const auto& s : seeds.sources) {
        if (s.net == net) detail.parts.push_back(s.name);
      }
      throw Error(ErrorCode::FeatureTooThin,
                  "net " + std::to_string(net) + " has a zone section narrower than the minimum feature of " +
                      format_mm(zones.board.min_feature()) + " mm; widen the space around its pads",
                  std::move(detail));
    }
  }
  return out;
}

std::map<int, bool> check_zone_connectivity(const ZoneMap& zones, std::span<const SeedSource> sources) {
  std::map<int, bool> out;
  for (const auto& [net, cells] : seed_cells_by_net(sources)) out[net] = detail::cells_connected(zones, net, cells);
  return out;
}

std::map<int, bool> check_zone_connectivity(const ZoneMap& zones, std::span<const PadInstance> pads) {
  std::vector<SeedSource> sources;
  for (const auto& pad : pads) {
    if (pad.net_id < 0) continue;
    sources.push_back({pad.net_id, pad.part_id + "." + std::to_string(pad.pin), pad_cells(pad, zones.grid)});
  }
  return check_zone_connectivity(zones, sources);
}

}  // namespace papercad
