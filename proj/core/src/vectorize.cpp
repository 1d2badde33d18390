#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>

#include "grid_ops.hpp"
#include "papercad/partition.hpp"

namespace papercad {

namespace {

constexpr std::array<int, 4> kDx = {1, 0, -1, 0};
constexpr std::array<int, 4> kDy = {0, 1, 0, -1};

// Lattice of cell corners: (nx + 1) x (ny + 1) vertices.
struct Lattice {
  int nx;
  int ny;
  std::size_t vertex(int x, int y) const { return static_cast<std::size_t>(y) * (nx + 1) + x; }
  int vx(std::size_t v) const { return static_cast<int>(v % (nx + 1)); }
  int vy(std::size_t v) const { return static_cast<int>(v / (nx + 1)); }
};

// Cell on the region side of the directed lattice edge leaving (x, y) in
// direction d. The region side is d rotated a quarter turn towards +y.
std::pair<int, int> side_cell(int x, int y, int d) {
  const int dx = kDx[d], dy = kDy[d];
  const int px = -dy, py = dx;
  return {x + std::min(dx, 0) + std::min(px, 0), y + std::min(dy, 0) + std::min(py, 0)};
}

class RingTracer {
 public:
  RingTracer(const GridSpec& g, const std::vector<int>& comp)
      : g_(g), lat_{g.nx, g.ny}, comp_(comp), visited_((g.size() + g.nx + g.ny + 1) * 4, 0) {}

  int comp_at(int i, int j) const { return g_.in_bounds(i, j) ? comp_[g_.index(i, j)] : -1; }

  bool boundary(int x, int y, int d, int c) const {
    if (x < 0 || y < 0 || x > g_.nx || y > g_.ny) return false;
    const auto [ai, aj] = side_cell(x, y, d);
    const auto [bi, bj] = side_cell(x + kDx[d], y + kDy[d], (d + 2) % 4);
    return comp_at(ai, aj) == c && comp_at(bi, bj) != c;
  }

  std::vector<std::vector<Point>> trace_cell(std::size_t idx) {
    std::vector<std::vector<Point>> rings;
    const int i = g_.col(idx), j = g_.row(idx);
    const int c = comp_[idx];
    // The four edges around the cell, each oriented with the cell on the region side.
    const std::array<std::array<int, 3>, 4> edges = {{{i, j, 0}, {i + 1, j, 1}, {i + 1, j + 1, 2}, {i, j + 1, 3}}};
    for (const auto& [x, y, d] : edges) {
      if (!boundary(x, y, d, c) || seen(x, y, d)) continue;
      rings.push_back(follow(x, y, d, c));
    }
    return rings;
  }

 private:
  std::uint8_t& seen(int x, int y, int d) { return visited_[lat_.vertex(x, y) * 4 + d]; }

  std::vector<Point> follow(int x, int y, int d, int c) {
    std::vector<Point> ring;
    const int sx = x, sy = y, sd = d;
    do {
      seen(x, y, d) = 1;
      ring.push_back({x * g_.resolution, y * g_.resolution});
      x += kDx[d];
      y += kDy[d];
      // Turning towards the region first wraps around the cell just passed,
      // which keeps diagonally touching cells on separate rings.
      const std::array<int, 3> options = {(d + 1) % 4, d, (d + 3) % 4};
      int next = -1;
      for (int o : options) {
        if (boundary(x, y, o, c)) {
          next = o;
          break;
        }
      }
      d = next;
    } while (d >= 0 && !(x == sx && y == sy && d == sd));
    return ring;
  }

  GridSpec g_;
  Lattice lat_;
  const std::vector<int>& comp_;
  std::vector<std::uint8_t> visited_;
};

// 4-connected components of equal net labels.
std::vector<int> net_components(const LabelGrid& zones, std::vector<Label>* comp_net) {
  const GridSpec& g = zones.grid;
  std::vector<int> comp(g.size(), -1);
  std::vector<std::size_t> stack;
  int next = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (!is_net(zones.cells[s]) || comp[s] >= 0) continue;
    const Label k = zones.cells[s];
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      detail::for_each_neighbor4(g, c, [&](std::size_t n) {
        if (comp[n] < 0 && zones.cells[n] == k) {
          comp[n] = next;
          stack.push_back(n);
        }
      });
    }
    comp_net->push_back(k);
    ++next;
  }
  return comp;
}

std::vector<Point> clean_ring(const std::vector<Point>& raw, double tolerance, const Board& board) {
  auto ring = remove_collinear(raw, true);
  auto simple = simplify_ring(ring, tolerance);
  const double a0 = signed_area(ring);
  if (simple.size() >= 3 && std::signbit(signed_area(simple)) == std::signbit(a0) && signed_area(simple) != 0) {
    ring = std::move(simple);
  }
  for (Point& p : ring) {
    p.x = std::clamp(p.x, 0.0, board.width());
    p.y = std::clamp(p.y, 0.0, board.height());
  }
  return ring;
}

constexpr int kOwnerOutside = -1;

// Who each cell belongs to when cutting: zone cells own their net, GAP cells
// near a zone join the nearest one, and remaining GAP islands are void
// regions with owners of their own.
std::vector<int> owner_map(const ZoneMap& zones) {
  const GridSpec& g = zones.grid;
  std::vector<int> owner(g.size(), kOwnerOutside);
  std::vector<int> dist(g.size(), -1);
  std::vector<std::size_t> queue;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (is_net(zones.cells[c])) queue.push_back(c);
  }
  std::stable_sort(queue.begin(), queue.end(),
                   [&](std::size_t a, std::size_t b) { return zones.cells[a] < zones.cells[b]; });
  for (std::size_t c : queue) {
    owner[c] = zones.cells[c];
    dist[c] = 0;
  }
  const int reach = static_cast<int>(std::ceil(zones.board.gap() / (2 * g.resolution) - 1e-9)) + 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t c = queue[head];
    if (dist[c] >= reach) continue;
    const int i = g.col(c), j = g.row(c);
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if ((di == 0 && dj == 0) || !g.in_bounds(i + di, j + dj)) continue;
        const std::size_t n = g.index(i + di, j + dj);
        if (dist[n] >= 0 || zones.cells[n] == kOutside || is_net(zones.cells[n])) continue;
        dist[n] = dist[c] + 1;
        owner[n] = owner[c];
        queue.push_back(n);
      }
    }
  }
  int void_id = kMaxNets;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (dist[s] >= 0 || zones.cells[s] == kOutside) continue;
    dist[s] = 0;
    owner[s] = void_id;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      detail::for_each_neighbor4(g, c, [&](std::size_t n) {
        if (dist[n] < 0 && zones.cells[n] != kOutside) {
          dist[n] = 0;
          owner[n] = void_id;
          stack.push_back(n);
        }
      });
    }
    ++void_id;
  }
  return owner;
}

class CutGraph {
 public:
  CutGraph(const GridSpec& g, const std::vector<int>& owner) : g_(g), lat_{g.nx, g.ny} {
    const std::size_t nv = static_cast<std::size_t>(g.nx + 1) * (g.ny + 1);
    edges_.assign(nv * 4, 0);
    degree_.assign(nv, 0);
    auto differs = [&](int ai, int aj, int bi, int bj) {
      if (!g.in_bounds(ai, aj) || !g.in_bounds(bi, bj)) return false;
      const int a = owner[g.index(ai, aj)], b = owner[g.index(bi, bj)];
      return a != b && a != kOwnerOutside && b != kOwnerOutside;
    };
    for (int y = 0; y <= g.ny; ++y) {
      for (int x = 0; x <= g.nx; ++x) {
        if (x < g.nx && differs(x, y - 1, x, y)) add(x, y, 0);
        if (y < g.ny && differs(x - 1, y, x, y)) add(x, y, 1);
      }
    }
  }

  std::vector<Polyline> paths(double tolerance) {
    std::vector<Polyline> out;
    const std::size_t nv = degree_.size();
    for (std::size_t v = 0; v < nv; ++v) {
      if (degree_[v] == 0 || degree_[v] == 2) continue;
      for (int d = 0; d < 4; ++d) {
        if (edges_[v * 4 + d]) out.push_back(walk(v, d, false, tolerance));
      }
    }
    for (std::size_t v = 0; v < nv; ++v) {
      for (int d = 0; d < 4; ++d) {
        if (edges_[v * 4 + d]) out.push_back(walk(v, d, true, tolerance));
      }
    }
    return out;
  }

 private:
  void add(int x, int y, int d) {
    const std::size_t a = lat_.vertex(x, y);
    const std::size_t b = lat_.vertex(x + kDx[d], y + kDy[d]);
    edges_[a * 4 + d] = 1;
    edges_[b * 4 + (d + 2) % 4] = 1;
    ++degree_[a];
    ++degree_[b];
  }

  void remove(std::size_t v, int d) {
    const std::size_t w = lat_.vertex(lat_.vx(v) + kDx[d], lat_.vy(v) + kDy[d]);
    edges_[v * 4 + d] = 0;
    edges_[w * 4 + (d + 2) % 4] = 0;
  }

  Point at(std::size_t v) const { return {lat_.vx(v) * g_.resolution, lat_.vy(v) * g_.resolution}; }

  Polyline walk(std::size_t v, int d, bool loop, double tolerance) {
    const std::size_t start = v;
    std::vector<Point> pts{at(v)};
    while (true) {
      remove(v, d);
      v = lat_.vertex(lat_.vx(v) + kDx[d], lat_.vy(v) + kDy[d]);
      if (loop ? v == start : degree_[v] != 2) break;
      pts.push_back(at(v));
      d = -1;
      for (int o = 0; o < 4; ++o) {
        if (edges_[v * 4 + o]) {
          d = o;
          break;
        }
      }
      if (d < 0) break;
    }
    Polyline line;
    if (loop) {
      line.closed = true;
      auto ring = remove_collinear(pts, true);
      auto simple = simplify_ring(ring, tolerance);
      line.points = simple.size() >= 3 ? std::move(simple) : std::move(ring);
    } else {
      pts.push_back(at(v));
      line.points = simplify_chain(remove_collinear(pts, false), tolerance);
    }
    return line;
  }

  GridSpec g_;
  Lattice lat_;
  std::vector<std::uint8_t> edges_;
  std::vector<int> degree_;
};

std::map<int, Point> anchors(const LabelGrid& zones) {
  const GridSpec& g = zones.grid;
  std::vector<int> dist(g.size(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!is_net(zones.cells[c])) continue;
    const int i = g.col(c), j = g.row(c);
    bool edge = i == 0 || j == 0 || i + 1 == g.nx || j + 1 == g.ny;
    detail::for_each_neighbor4(g, c, [&](std::size_t n) { edge = edge || zones.cells[n] != zones.cells[c]; });
    if (edge) {
      dist[c] = 0;
      queue.push_back(c);
    }
  }
  while (!queue.empty()) {
    const std::size_t c = queue.front();
    queue.pop_front();
    detail::for_each_neighbor4(g, c, [&](std::size_t n) {
      if (dist[n] < 0 && zones.cells[n] == zones.cells[c]) {
        dist[n] = dist[c] + 1;
        queue.push_back(n);
      }
    });
  }
  std::map<int, std::pair<int, std::size_t>> best;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!is_net(zones.cells[c])) continue;
    auto [it, fresh] = best.try_emplace(zones.cells[c], dist[c], c);
    if (!fresh && dist[c] > it->second.first) it->second = {dist[c], c};
  }
  std::map<int, Point> out;
  for (const auto& [net, b] : best) out[net] = g.center(b.second);
  return out;
}

}  // namespace

std::size_t ZoneLayout::polygon_count() const {
  std::size_t n = 0;
  for (const auto& [net, polys] : zones) n += polys.size();
  return n;
}

ZoneLayout vectorize(const ZoneMap& zones, double tolerance) {
  const GridSpec& g = zones.grid;
  ZoneLayout layout;
  layout.board = zones.board;

  std::vector<Label> comp_net;
  const auto comp = net_components(zones, &comp_net);
  std::vector<ZonePolygon> polys(comp_net.size());
  RingTracer tracer(g, comp);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (comp[c] < 0) continue;
    for (auto& raw : tracer.trace_cell(c)) {
      ZonePolygon& poly = polys[static_cast<std::size_t>(comp[c])];
      if (signed_area(raw) > 0) {
        poly.outer = clean_ring(raw, tolerance, zones.board);
      } else {
        poly.holes.push_back(clean_ring(raw, tolerance, zones.board));
      }
    }
  }
  for (std::size_t k = 0; k < polys.size(); ++k) layout.zones[comp_net[k]].push_back(std::move(polys[k]));

  layout.cut_paths = CutGraph(g, owner_map(zones)).paths(tolerance);

  int x0 = g.nx, y0 = g.ny, x1 = 0, y1 = 0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (zones.cells[c] == kOutside) continue;
    x0 = std::min(x0, g.col(c));
    y0 = std::min(y0, g.row(c));
    x1 = std::max(x1, g.col(c) + 1);
    y1 = std::max(y1, g.row(c) + 1);
  }
  if (x0 < x1) {
    const double r = g.resolution;
    const double W = zones.board.width(), H = zones.board.height();
    layout.outline.closed = true;
    layout.outline.points = {{x0 * r, y0 * r}, {std::min(x1 * r, W), y0 * r},
                             {std::min(x1 * r, W), std::min(y1 * r, H)}, {x0 * r, std::min(y1 * r, H)}};
  }
  layout.label_anchors = anchors(zones);
  return layout;
}

}  // namespace papercad
