#pragma once

#include <span>
#include <string>
#include <vector>

namespace papercad {

// Board frame: millimetres, origin at the top-left corner, y grows downward
// (the SVG convention). "Counterclockwise" rings are those with positive
// shoelace area in these coordinates.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  static Rect centered(Point center, double width, double height);

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  double area() const { return width() * height(); }
  Point center() const { return {(min_x + max_x) / 2, (min_y + max_y) / 2}; }
  Rect expanded(double by) const { return {min_x - by, min_y - by, max_x + by, max_y + by}; }
  bool contains(const Rect& other, double tol = 1e-9) const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Area of the intersection; zero when the rectangles are disjoint or only touch.
double intersection_area(const Rect& a, const Rect& b);

// Area of `r` lying outside `bounds`.
double area_outside(const Rect& r, const Rect& bounds);

struct Polyline {
  std::vector<Point> points;
  bool closed = false;

  friend bool operator==(const Polyline&, const Polyline&) = default;
};

double distance(Point a, Point b);
double distance_to_segment(Point p, Point a, Point b);
double distance_to_polyline(Point p, const Polyline& line);

double signed_area(std::span<const Point> ring);

// Even-odd containment test; points exactly on an edge are unspecified.
bool point_in_ring(Point p, std::span<const Point> ring);

// Symmetric Hausdorff distance, evaluated on both polylines densified to
// `step` spacing.
double hausdorff_distance(const Polyline& a, const Polyline& b, double step = 0.01);

// Ramer-Douglas-Peucker on an open chain; endpoints are always kept.
std::vector<Point> simplify_chain(std::span<const Point> chain, double tolerance);

// Simplifies a closed ring (first point not repeated at the end). The
// lowest-then-leftmost vertex is kept as the anchor so results do not depend
// on where tracing started.
std::vector<Point> simplify_ring(std::span<const Point> ring, double tolerance);

// Drops vertices that lie on the straight line through their neighbours.
std::vector<Point> remove_collinear(std::span<const Point> pts, bool closed);

// Fixed three-decimal rendering used by every file format ("-0.000" is
// normalised to "0.000").
std::string format_mm(double value);

}  // namespace papercad

namespace papercad {

// Cardinal orientations only; quarter turns counterclockwise in the
// mathematical sense, i.e. (x, y) -> (-y, x) for one quarter turn.
enum class Rotation { R0 = 0, R90 = 90, R180 = 180, R270 = 270 };

inline int degrees(Rotation r) { return static_cast<int>(r); }
bool is_cardinal(int degrees);
Rotation rotation_from_cardinal(int degrees);  // precondition: is_cardinal(degrees)
Rotation rotate_by(Rotation r, int quarter_turns);
Point rotate(Point p, Rotation r);

}  // namespace papercad
