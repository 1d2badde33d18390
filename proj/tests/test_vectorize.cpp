#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "papercad/error.hpp"
#include "papercad/partition.hpp"

using namespace papercad;
using namespace papercad::testing;

namespace {

ZoneMap zones_from(int nx, int ny, double r, auto label_of) {
  ZoneMap z;
  z.board = Board(BoardParams{nx * r, ny * r, 0, r, 2 * r, 2 * r});
  static_cast<LabelGrid&>(z) = LabelGrid(GridSpec::for_board(z.board), kGap);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) z.at(i, j) = label_of(i, j);
  }
  return z;
}

double polygon_area(const ZonePolygon& p) {
  double a = signed_area(p.outer);
  for (const auto& h : p.holes) a += signed_area(h);
  return a;
}

}  // namespace

TEST_CASE("a single zone filling the board is one rectangle") {
  const ZoneMap z = zones_from(20, 10, 1.0, [](int, int) { return 0; });
  const ZoneLayout l = vectorize(z);
  REQUIRE(l.zones.size() == 1);
  REQUIRE(l.zones.at(0).size() == 1);
  const ZonePolygon& p = l.zones.at(0)[0];
  CHECK(p.outer.size() == 4);
  CHECK(p.holes.empty());
  CHECK(signed_area(p.outer) == doctest::Approx(200));
  CHECK(l.cut_paths.empty());
  CHECK(l.outline.closed);
  CHECK(l.outline.points.size() == 4);
  CHECK(l.polygon_count() == 1);
  REQUIRE(l.label_anchors.contains(0));
  CHECK(point_in_ring(l.label_anchors.at(0), p.outer));
}

TEST_CASE("two zones split by a gap band get one centred cut") {
  const ZoneMap z = zones_from(20, 10, 1.0, [](int i, int) { return i < 10 ? 0 : i >= 12 ? 1 : kGap; });
  const ZoneLayout l = vectorize(z);
  REQUIRE(l.zones.size() == 2);
  CHECK(signed_area(l.zones.at(0)[0].outer) == doctest::Approx(100));
  CHECK(signed_area(l.zones.at(1)[0].outer) == doctest::Approx(80));
  CHECK(l.zones.at(0)[0].outer.size() == 4);
  REQUIRE(l.cut_paths.size() == 1);
  const Polyline& cut = l.cut_paths[0];
  CHECK_FALSE(cut.closed);
  for (const Point& p : cut.points) CHECK(p.x == doctest::Approx(11));
  CHECK(hausdorff_distance(cut, Polyline{{{11, 0}, {11, 10}}, false}) < 1e-9);
}

TEST_CASE("a zone surrounding another has a hole") {
  const ZoneMap z = zones_from(20, 20, 1.0, [](int i, int j) {
    const int d = std::max(std::abs(2 * i - 19), std::abs(2 * j - 19));  // ring index times two
    return d <= 5 ? 1 : d <= 9 ? kGap : 0;
  });
  const ZoneLayout l = vectorize(z);
  REQUIRE(l.zones.at(0).size() == 1);
  const ZonePolygon& outer = l.zones.at(0)[0];
  REQUIRE(outer.holes.size() == 1);
  CHECK(signed_area(outer.outer) > 0);
  CHECK(signed_area(outer.holes[0]) < 0);
  CHECK(polygon_area(outer) == doctest::Approx(400 - 100));
  CHECK(polygon_area(l.zones.at(1)[0]) == doctest::Approx(36));
  REQUIRE(l.cut_paths.size() == 1);
  CHECK(l.cut_paths[0].closed);
}

TEST_CASE("disjoint pieces of one net are separate polygons") {
  const ZoneMap z = zones_from(20, 10, 1.0, [](int i, int) { return i < 5 || i >= 15 ? 0 : kGap; });
  const ZoneLayout l = vectorize(z);
  CHECK(l.zones.at(0).size() == 2);
  CHECK(l.polygon_count() == 2);
}

TEST_CASE("a gap-only map gives an empty layout") {
  const ZoneMap z = zones_from(10, 10, 1.0, [](int, int) { return kGap; });
  const ZoneLayout l = vectorize(z);
  CHECK(l.zones.empty());
  CHECK(l.cut_paths.empty());
  CHECK(l.polygon_count() == 0);
}

TEST_CASE("vertices stay on the board and rings keep orientation") {
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const SeedGrid s = random_seed_grid(rng, 40, 4, 0.3);
    const Board b(BoardParams{s.grid.nx * 1.0, s.grid.ny * 1.0, 0, 1.0, 2.0, 2.0});
    ZoneMap z;
    try {
      z = enforce_min_feature(carve_gaps(geodesic_partition(s), b, s), s);
    } catch (const Error&) {
      continue;
    }
    const ZoneLayout l = vectorize(z);
    for (const auto& [net, polys] : l.zones) {
      for (const auto& p : polys) {
        CHECK(signed_area(p.outer) > 0);
        for (const auto& h : p.holes) CHECK(signed_area(h) < 0);
        for (const Point& q : p.outer) {
          CHECK(q.x >= 0);
          CHECK(q.y >= 0);
          CHECK(q.x <= b.width());
          CHECK(q.y <= b.height());
        }
      }
    }
  }
}

TEST_CASE("re-rasterising the polygons reproduces the zone map") {
  Rng rng(99);
  for (int k = 0; k < 25; ++k) {
    const SeedGrid s = random_seed_grid(rng, 60, 5, 0.2);
    const double r = 0.5;
    GridSpec g = s.grid;
    const Board b(BoardParams{g.nx * r, g.ny * r, 0, r, 2 * r, 2 * r});
    SeedGrid scaled = s;
    scaled.grid.resolution = r;
    ZoneMap z;
    try {
      z = enforce_min_feature(carve_gaps(geodesic_partition(scaled), b, scaled), scaled);
    } catch (const Error&) {
      continue;
    }
    const ZoneLayout l = vectorize(z);
    const LabelGrid back = oracle_rerasterize(l, z.grid);
    const auto near = near_boundary(z, 2);
    std::size_t same = 0, counted = 0;
    for (std::size_t c = 0; c < z.cells.size(); ++c) {
      if (z.cells[c] == kOutside) continue;
      const Label want = is_net(z.cells[c]) ? z.cells[c] : kGap;
      ++counted;
      if (back.cells[c] == want) {
        ++same;
      } else {
        CHECK(near[c]);
      }
    }
    CHECK(static_cast<double>(same) >= 0.98 * static_cast<double>(counted));
  }
}
