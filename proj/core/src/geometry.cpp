#include "papercad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace papercad {

Rect Rect::centered(Point center, double width, double height) {
  return {center.x - width / 2, center.y - height / 2, center.x + width / 2, center.y + height / 2};
}

bool Rect::contains(const Rect& other, double tol) const {
  return other.min_x >= min_x - tol && other.min_y >= min_y - tol && other.max_x <= max_x + tol &&
         other.max_y <= max_y + tol;
}

double intersection_area(const Rect& a, const Rect& b) {
  const double w = std::min(a.max_x, b.max_x) - std::max(a.min_x, b.min_x);
  const double h = std::min(a.max_y, b.max_y) - std::max(a.min_y, b.min_y);
  if (w <= 0 || h <= 0) return 0.0;
  return w * h;
}

double area_outside(const Rect& r, const Rect& bounds) {
  return r.area() - intersection_area(r, bounds);
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance_to_segment(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return distance(p, a);
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, {a.x + t * dx, a.y + t * dy});
}

double distance_to_polyline(Point p, const Polyline& line) {
  const auto& pts = line.points;
  if (pts.empty()) return INFINITY;
  if (pts.size() == 1) return distance(p, pts[0]);
  double best = INFINITY;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    best = std::min(best, distance_to_segment(p, pts[i], pts[i + 1]));
  }
  if (line.closed) best = std::min(best, distance_to_segment(p, pts.back(), pts.front()));
  return best;
}

double signed_area(std::span<const Point> ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % ring.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2.0;
}

bool point_in_ring(Point p, std::span<const Point> ring) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

namespace {

std::vector<Point> densify(const Polyline& line, double step) {
  std::vector<Point> out;
  const auto& pts = line.points;
  const std::size_t n = pts.size();
  if (n == 0) return out;
  const std::size_t edges = line.closed ? n : n - 1;
  out.push_back(pts[0]);
  for (std::size_t i = 0; i < edges; ++i) {
    const Point a = pts[i];
    const Point b = pts[(i + 1) % n];
    const int k = std::max(1, static_cast<int>(std::ceil(distance(a, b) / step)));
    for (int s = 1; s <= k; ++s) {
      const double t = static_cast<double>(s) / k;
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

double directed_hausdorff(const std::vector<Point>& samples, const Polyline& target) {
  double worst = 0.0;
  for (const Point& p : samples) worst = std::max(worst, distance_to_polyline(p, target));
  return worst;
}

void rdp(std::span<const Point> pts, std::size_t first, std::size_t last, double tol,
         std::vector<bool>& keep) {
  if (last <= first + 1) return;
  double max_dist = -1.0;
  std::size_t index = first;
  for (std::size_t i = first + 1; i < last; ++i) {
    const double d = distance_to_segment(pts[i], pts[first], pts[last]);
    if (d > max_dist) {
      max_dist = d;
      index = i;
    }
  }
  if (max_dist > tol) {
    keep[index] = true;
    rdp(pts, first, index, tol, keep);
    rdp(pts, index, last, tol, keep);
  }
}

}  // namespace

double hausdorff_distance(const Polyline& a, const Polyline& b, double step) {
  if (a.points.empty() || b.points.empty()) {
    return (a.points.empty() && b.points.empty()) ? 0.0 : INFINITY;
  }
  return std::max(directed_hausdorff(densify(a, step), b), directed_hausdorff(densify(b, step), a));
}

std::vector<Point> simplify_chain(std::span<const Point> chain, double tolerance) {
  if (chain.size() <= 2) return {chain.begin(), chain.end()};
  std::vector<bool> keep(chain.size(), false);
  keep.front() = keep.back() = true;
  rdp(chain, 0, chain.size() - 1, tolerance, keep);
  std::vector<Point> out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (keep[i]) out.push_back(chain[i]);
  }
  return out;
}

std::vector<Point> simplify_ring(std::span<const Point> ring, double tolerance) {
  const std::size_t n = ring.size();
  if (n <= 3) return {ring.begin(), ring.end()};

  std::size_t anchor = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[anchor];
    if (p.y < q.y || (p.y == q.y && p.x < q.x)) anchor = i;
  }
  std::vector<Point> rotated;
  rotated.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) rotated.push_back(ring[(anchor + i) % n]);

  // Split at the vertex farthest from the anchor and simplify both halves.
  std::size_t far = 1;
  double far_dist = -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = distance(rotated[0], rotated[i]);
    if (d > far_dist) {
      far_dist = d;
      far = i;
    }
  }
  rotated.push_back(rotated[0]);
  std::vector<bool> keep(rotated.size(), false);
  keep[0] = keep[far] = keep.back() = true;
  rdp(rotated, 0, far, tolerance, keep);
  rdp(rotated, far, rotated.size() - 1, tolerance, keep);

  std::vector<Point> out;
  for (std::size_t i = 0; i + 1 < rotated.size(); ++i) {
    if (keep[i]) out.push_back(rotated[i]);
  }
  return out;
}

std::vector<Point> remove_collinear(std::span<const Point> pts, bool closed) {
  const std::size_t n = pts.size();
  if (n < 3) return {pts.begin(), pts.end()};
  auto collinear = [](Point a, Point b, Point c) {
    const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return std::abs(cross) < 1e-12;
  };
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!closed && (i == 0 || i + 1 == n)) {
      out.push_back(pts[i]);
      continue;
    }
    const Point prev = pts[(i + n - 1) % n];
    const Point next = pts[(i + 1) % n];
    if (!collinear(prev, pts[i], next)) out.push_back(pts[i]);
  }
  return out;
}

std::string format_mm(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

}  // namespace papercad

namespace papercad {

bool is_cardinal(int deg) { return deg == 0 || deg == 90 || deg == 180 || deg == 270; }

Rotation rotation_from_cardinal(int deg) { return static_cast<Rotation>(deg); }

Rotation rotate_by(Rotation r, int quarter_turns) {
  const int q = ((degrees(r) / 90 + quarter_turns) % 4 + 4) % 4;
  return static_cast<Rotation>(q * 90);
}

// Exact for cardinal angles: no trigonometry, so four quarter turns give
// back the input bit for bit.
Point rotate(Point p, Rotation r) {
  switch (r) {
    case Rotation::R0: return p;
    case Rotation::R90: return {-p.y, p.x};
    case Rotation::R180: return {-p.x, -p.y};
    case Rotation::R270: return {p.y, -p.x};
  }
  return p;
}

}  // namespace papercad
