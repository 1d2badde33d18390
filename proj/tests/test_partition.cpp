#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "papercad/error.hpp"
#include "papercad/partition.hpp"

using namespace papercad;
using namespace papercad::testing;

namespace {

Board grid_board(double w, double h, double r, double gap, double min_feature, double margin = 0) {
  return Board(BoardParams{w, h, margin, r, gap, min_feature});
}

PadInstance pad(std::string part, int pin, int net, Point c, PadShape shape) {
  return PadInstance{std::move(part), pin, net, c, shape, Rotation::R0};
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

SeedGrid seeds_with(const GridSpec& g, std::vector<std::tuple<int, int, Label>> cells) {
  SeedGrid s;
  static_cast<LabelGrid&>(s) = LabelGrid(g, kEmpty);
  for (auto [i, j, l] : cells) {
    s.at(i, j) = l;
    if (is_net(l)) s.sources.push_back({l, "s" + std::to_string(s.sources.size()), {g.index(i, j)}});
  }
  return s;
}

ZoneMap as_zones(LabelGrid g, const Board& b) {
  ZoneMap z;
  static_cast<LabelGrid&>(z) = std::move(g);
  z.board = b;
  return z;
}

int count(const LabelGrid& g, Label l) { return static_cast<int>(std::count(g.cells.begin(), g.cells.end(), l)); }

}  // namespace

TEST_CASE("grid dimensions round up") {
  const GridSpec g = GridSpec::for_board(grid_board(10.1, 7, 0.2, 1, 2));
  CHECK(g.nx == 51);
  CHECK(g.ny == 35);
  CHECK(GridSpec::for_board(Board()).nx == 500);
}

TEST_CASE("pad rasterisation: 2x2 mm pad at r = 1 covers four cells") {
  const Board b = grid_board(10, 10, 1, 2, 2);
  const std::vector<PadInstance> pads = {pad("R1", 1, 0, {5, 5}, PadShape::rect(2, 2))};
  const SeedGrid s = rasterize_pads(pads, b);
  CHECK(count(s, 0) == 4);
  CHECK(s.at(4, 4) == 0);
  CHECK(s.at(5, 5) == 0);
  CHECK(s.at(3, 4) == kEmpty);
  REQUIRE(s.sources.size() == 1);
  CHECK(s.sources[0].name == "R1.1");
}

TEST_CASE("pad rasterisation edge cases") {
  const Board b = grid_board(10, 10, 1, 2, 2);
  CHECK(count(rasterize_pads({}, b), kEmpty) == 100);
  // unconnected pins become keepout
  const std::vector<PadInstance> free_pin = {pad("R1", 2, -1, {5, 5}, PadShape::rect(2, 2))};
  CHECK(count(rasterize_pads(free_pin, b), kKeepout) == 4);
  // a pad smaller than a cell still claims its centre cell
  const std::vector<PadInstance> tiny = {pad("R1", 1, 0, {5.2, 5.3}, PadShape::circle(0.3))};
  CHECK(count(rasterize_pads(tiny, b), 0) == 1);
  // same-net overlap merges
  const std::vector<PadInstance> same = {pad("A", 1, 0, {5, 5}, PadShape::rect(2, 2)),
                                         pad("B", 1, 0, {6, 5}, PadShape::rect(2, 2))};
  CHECK(count(rasterize_pads(same, b), 0) == 6);
}

TEST_CASE("different nets on one cell are a seed conflict naming both pads") {
  const Board b = grid_board(10, 10, 1, 2, 2);
  const std::vector<PadInstance> pads = {pad("A", 1, 0, {5, 5}, PadShape::rect(2, 2)),
                                         pad("B", 1, 1, {5, 5}, PadShape::rect(2, 2))};
  try {
    rasterize_pads(pads, b);
    FAIL("expected SeedConflict");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeedConflict);
    CHECK(e.detail().parts == std::vector<std::string>{"A.1", "B.1"});
    CHECK(e.detail().location.has_value());
  }
  const std::vector<PadInstance> off = {pad("A", 1, 0, {0.5, 5}, PadShape::rect(2, 2))};
  CHECK(code_of([&] { rasterize_pads(off, b); }) == ErrorCode::OutOfBoard);
}

TEST_CASE("trace rasterisation: 1 mm trace at r = 0.5 is a two-cell band") {
  const Board b = grid_board(10, 10, 0.5, 1, 1);
  TraceLayer t;
  t.width = 10;
  t.height = 10;
  t.nets.push_back({"A", {{Polyline{{{2, 5}, {8, 5}}, false}, 1.0, false}}});
  const SeedGrid s = rasterize_traces(t, b, {{"A", 0}});
  // independent check: cells whose centre lies within 0.5 mm of the segment
  const GridSpec& g = s.grid;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const bool inside = distance_to_segment(g.center(c), {2, 5}, {8, 5}) <= 0.5 + 1e-9;
    CHECK((s.cells[c] == 0) == inside);
  }
  for (int i = 5; i < 15; ++i) {
    CHECK(s.at(i, 9) == 0);
    CHECK(s.at(i, 10) == 0);
    CHECK(s.at(i, 8) == kEmpty);
  }
}

TEST_CASE("trace rasterisation errors and keepouts") {
  const Board b = grid_board(10, 10, 0.5, 1, 1);
  TraceLayer t;
  t.nets.push_back({"A", {{Polyline{{{2, 5}, {8, 5}}, false}, 1.0, false}}});
  t.nets.push_back({"B", {{Polyline{{{5, 2}, {5, 8}}, false}, 1.0, false}}});
  CHECK(code_of([&] { rasterize_traces(t, b, {{"A", 0}, {"B", 1}}); }) == ErrorCode::SeedConflict);
  CHECK(code_of([&] { rasterize_traces(t, b, {{"A", 0}}); }) == ErrorCode::UnknownNetName);
  TraceLayer k;
  k.unassigned.push_back({Polyline{{{1, 1}, {3, 1}, {3, 3}, {1, 3}}, true}, 0.0, true});
  const SeedGrid s = rasterize_traces(k, b, {});
  CHECK(count(s, kKeepout) == 16);
  CHECK(count(rasterize_traces(TraceLayer{}, b, {}), kEmpty) == 400);
}

TEST_CASE("geodesic partition splits at the midline with ties to the lower net") {
  const GridSpec g{20, 20, 1.0};
  const SeedGrid s = seeds_with(g, {{5, 10, 0}, {15, 10, 1}});
  const LabelGrid p = geodesic_partition(s);
  for (int j = 0; j < 20; ++j) {
    for (int i = 0; i < 20; ++i) CHECK(p.at(i, j) == (i <= 10 ? 0 : 1));
  }
  CHECK(p == oracle_partition(s));
}

TEST_CASE("geodesic partition basics") {
  const GridSpec g{12, 9, 1.0};
  const LabelGrid single = geodesic_partition(seeds_with(g, {{3, 3, 2}}));
  CHECK(count(single, 2) == 108);
  CHECK(code_of([&] { geodesic_partition(seeds_with(g, {})); }) == ErrorCode::NoSeeds);

  // a keepout wall with a gap routes distances around it
  SeedGrid walled = seeds_with(g, {{1, 4, 0}, {10, 4, 1}});
  for (int j = 0; j < 8; ++j) walled.at(4, j) = kKeepout;
  const LabelGrid p = geodesic_partition(walled);
  CHECK(p.at(4, 0) == kGap);
  CHECK(count(p, kEmpty) == 0);
  CHECK(p == oracle_partition(walled));
  CHECK(p.at(5, 0) == 1);  // straight-line nearer to net 0, geodesically nearer to net 1
}

TEST_CASE("unreachable cells become gap") {
  const GridSpec g{10, 10, 1.0};
  SeedGrid s = seeds_with(g, {{1, 1, 0}});
  for (int j = 0; j < 10; ++j) s.at(5, j) = kKeepout;
  const LabelGrid p = geodesic_partition(s);
  CHECK(p.at(7, 7) == kGap);
  CHECK(p.at(4, 7) == 0);
}

TEST_CASE("geodesic partition matches the brute-force oracle on random grids") {
  Rng rng(2024);
  for (int k = 0; k < 60; ++k) {
    const SeedGrid s = random_seed_grid(rng, 40, 5, 0.5);
    CHECK(geodesic_partition(s) == oracle_partition(s));
  }
}

TEST_CASE("carving a midline split with g = 2r leaves a two-cell band") {
  const Board b = grid_board(20, 20, 1, 2, 2);
  const GridSpec g = GridSpec::for_board(b);
  const SeedGrid s = seeds_with(g, {{5, 10, 0}, {15, 10, 1}});
  const ZoneMap z = carve_gaps(geodesic_partition(s), b, s);
  for (int j = 0; j < 20; ++j) {
    for (int i = 0; i < 20; ++i) CHECK(z.at(i, j) == (i <= 9 ? 0 : i >= 12 ? 1 : kGap));
  }
}

TEST_CASE("carving a single zone only marks the margin") {
  const Board b = grid_board(20, 10, 1, 2, 2, 2);
  const SeedGrid s = seeds_with(GridSpec::for_board(b), {{10, 5, 0}});
  const ZoneMap z = carve_gaps(geodesic_partition(s), b, s);
  CHECK(count(z, kGap) == 0);
  CHECK(count(z, kOutside) == 200 - 16 * 6);
  for (std::size_t c = 0; c < z.cells.size(); ++c) CHECK((z.cells[c] == kOutside) == in_margin(z.grid, b, c));
  CHECK_THROWS(grid_board(20, 10, 1, 0, 2));
}

TEST_CASE("seed cells closer than the gap are a pad clearance violation") {
  const Board b = grid_board(20, 20, 1, 4, 4);
  const GridSpec g = GridSpec::for_board(b);
  const SeedGrid s = seeds_with(g, {{9, 10, 0}, {10, 10, 1}});
  try {
    carve_gaps(geodesic_partition(s), b, s);
    FAIL("expected PadClearanceViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PadClearanceViolation);
    CHECK(e.detail().nets == std::vector<int>{0, 1});
  }
  // seeds exactly g - 2r apart keep their labels
  const SeedGrid ok = seeds_with(g, {{8, 10, 0}, {10, 10, 1}});
  const ZoneMap z = carve_gaps(geodesic_partition(ok), b, ok);
  CHECK(z.at(8, 10) == 0);
  CHECK(z.at(10, 10) == 1);
}

TEST_CASE("opening removes a thin isthmus and reports the split net") {
  const Board b = grid_board(20, 10, 1, 2, 4);
  const GridSpec g = GridSpec::for_board(b);
  LabelGrid l(g, kGap);
  for (int j = 2; j <= 6; ++j) {
    for (int i = 1; i <= 5; ++i) l.at(i, j) = 0;
    for (int i = 14; i <= 18; ++i) l.at(i, j) = 0;
  }
  for (int i = 6; i <= 13; ++i) l.at(i, 4) = 0;
  const SeedGrid s = seeds_with(g, {{3, 4, 0}, {16, 4, 0}});
  try {
    enforce_min_feature(as_zones(l, b), s);
    FAIL("expected FeatureTooThin");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FeatureTooThin);
    CHECK(e.detail().nets == std::vector<int>{0});
  }
  // without the second seed the isthmus just disappears
  const ZoneMap opened = enforce_min_feature(as_zones(l, b), seeds_with(g, {{3, 4, 0}}));
  CHECK(opened.at(9, 4) == kGap);
  CHECK(opened.at(3, 4) == 0);
}

TEST_CASE("opening keeps fat zones, only rounding their corners") {
  const Board b = grid_board(20, 10, 1, 2, 4);
  const GridSpec g = GridSpec::for_board(b);
  LabelGrid l(g, kGap);
  for (int j = 0; j < 10; ++j) {
    for (int i = 0; i < 20; ++i) l.at(i, j) = i < 9 ? 0 : i > 10 ? 1 : kGap;
  }
  const SeedGrid s = seeds_with(g, {{3, 4, 0}, {16, 4, 1}});
  const ZoneMap once = enforce_min_feature(as_zones(l, b), s);
  CHECK(static_cast<const LabelGrid&>(enforce_min_feature(once, s)) == static_cast<const LabelGrid&>(once));
  int removed = 0;
  for (std::size_t c = 0; c < l.cells.size(); ++c) {
    if (once.cells[c] != l.cells[c]) {
      ++removed;
      CHECK(once.cells[c] == kGap);
      const int i = g.col(c), j = g.row(c);
      const int to_corner_x = std::min({i, std::abs(i - 8), std::abs(i - 11), 19 - i});
      const int to_corner_y = std::min(j, 9 - j);
      CHECK(to_corner_x + to_corner_y <= 2);
    }
  }
  CHECK(removed > 0);
  for (int j = 2; j < 8; ++j) CHECK(once.at(4, j) == 0);
  const LabelGrid empty(g, kGap);
  CHECK(static_cast<const LabelGrid&>(enforce_min_feature(as_zones(empty, b), seeds_with(g, {}))) == empty);
}

TEST_CASE("zone connectivity") {
  const Board b = grid_board(10, 10, 1, 2, 2);
  const GridSpec g = GridSpec::for_board(b);
  LabelGrid l(g, 0);
  const SeedGrid s = seeds_with(g, {{1, 1, 0}, {8, 8, 0}});
  CHECK(check_zone_connectivity(as_zones(l, b), s.sources) == std::map<int, bool>{{0, true}});
  for (int i = 0; i < 10; ++i) l.at(i, 5) = kGap;
  CHECK(check_zone_connectivity(as_zones(l, b), s.sources) == std::map<int, bool>{{0, false}});
}

TEST_CASE("connectivity agrees with the union-find oracle on random maps") {
  Rng rng(77);
  std::uniform_int_distribution<int> pick(0, 4);
  for (int k = 0; k < 40; ++k) {
    const SeedGrid s = random_seed_grid(rng, 30, 3, 0.0);
    LabelGrid l = geodesic_partition(s);
    for (auto& c : l.cells) {
      if (pick(rng) == 0) c = kGap;
    }
    for (const auto& src : s.sources) {
      for (std::size_t c : src.cells) l.cells[c] = src.net;
    }
    const Board b = grid_board(l.grid.nx, l.grid.ny, 1, 2, 2);
    CHECK(check_zone_connectivity(as_zones(l, b), s.sources) == oracle_connectivity(l, s.sources));
  }
}

TEST_CASE("debug dump round-trips and checks the board") {
  const Board b = grid_board(8, 4, 1, 2, 2);
  LabelGrid l(GridSpec::for_board(b), kGap);
  l.at(0, 0) = 0;
  l.at(1, 0) = 250;
  l.at(2, 0) = kOutside;
  l.at(3, 0) = kKeepout;
  l.at(4, 0) = kEmpty;
  const std::string bytes = dump_zonemap(l);
  CHECK(bytes.substr(0, bytes.find('\n')) == "8 4 1");
  CHECK(static_cast<unsigned char>(bytes[bytes.find('\n') + 2]) == 250);
  CHECK(static_cast<unsigned char>(bytes[bytes.find('\n') + 6]) == 251);
  CHECK(parse_zonemap_dump(bytes) == l);
  CHECK(zonemap_for_board(parse_zonemap_dump(bytes), b).board == b);
  CHECK(code_of([&] { zonemap_for_board(parse_zonemap_dump(bytes), grid_board(9, 4, 1, 2, 2)); }) ==
        ErrorCode::Validation);
  CHECK(code_of([&] { parse_zonemap_dump("8 4 1\nabc"); }) == ErrorCode::Parse);
  CHECK(code_of([&] { parse_zonemap_dump("nonsense"); }) == ErrorCode::Parse);
}
