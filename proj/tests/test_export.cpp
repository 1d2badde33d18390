#include <doctest.h>

#include "oracles.hpp"
#include "papercad/error.hpp"
#include "papercad/export.hpp"

using namespace papercad;
using namespace papercad::testing;

namespace {

ZoneMap zones_from(int nx, int ny, double gap, auto label_of) {
  ZoneMap z;
  z.board = Board(BoardParams{static_cast<double>(nx), static_cast<double>(ny), 0, 1, gap, gap});
  static_cast<LabelGrid&>(z) = LabelGrid(GridSpec::for_board(z.board), kGap);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) z.at(i, j) = label_of(i, j);
  }
  return z;
}

ZoneMap two_zone() {
  return zones_from(20, 10, 2, [](int i, int) { return i < 10 ? 0 : i >= 12 ? 1 : kGap; });
}

ZoneMap four_zone() {
  return zones_from(30, 30, 2, [](int i, int j) {
    if (i == 14 || i == 15 || j == 14 || j == 15) return kGap;
    return (i > 15 ? 1 : 0) + (j > 15 ? 2 : 0);
  });
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) | b[at + 3];
}

ExportOptions finetape(double t) {
  ExportOptions o;
  o.mode = ExportMode::FineTape;
  o.tape_width = t;
  return o;
}

}  // namespace

TEST_CASE("an empty layout exports only the outline") {
  const ZoneMap z = zones_from(10, 10, 2, [](int, int) { return kGap; });
  const ZoneLayout l = vectorize(z);
  const auto paths = svg_paths(export_cut_svg(l, {}));
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].id == "outline");
}

TEST_CASE("cut svg has one path per cut plus the outline, outline last") {
  const ZoneLayout l = vectorize(four_zone());
  const std::string svg = export_cut_svg(l, {});
  const auto paths = svg_paths(svg);
  REQUIRE(paths.size() == l.cut_paths.size() + 1);
  CHECK(l.cut_paths.size() >= 2);
  CHECK(paths.back().id == "outline");
  for (std::size_t k = 1; k + 1 < paths.size(); ++k) {
    const Point a = paths[k - 1].line.points.front();
    const Point b = paths[k].line.points.front();
    CHECK((a.y < b.y || (a.y == b.y && a.x <= b.x)));
  }
  for (const auto& p : paths) {
    for (const Point& q : p.line.points) {
      CHECK(q.x >= 0);
      CHECK(q.y >= 0);
      CHECK(q.x <= 30);
      CHECK(q.y <= 30);
    }
  }
  CHECK(svg.find("width=\"30.000mm\"") != std::string::npos);
  CHECK(export_cut_svg(l, {}) == svg);
}

TEST_CASE("export modes are checked") {
  const ZoneMap z = two_zone();
  const ZoneLayout l = vectorize(z);
  CHECK(code_of([&] { export_cut_svg(l, finetape(2)); }) == ErrorCode::ModeMismatch);
  CHECK(code_of([&] { export_finetape_svg(z, l, {}); }) == ErrorCode::ModeMismatch);
  CHECK(code_of([&] { export_finetape_svg(z, l, finetape(2.5)); }) == ErrorCode::TapeWidthMismatch);
  CHECK_NOTHROW(export_finetape_svg(z, l, finetape(2)));
}

TEST_CASE("fine-tape template layers") {
  const ZoneMap z = four_zone();
  const ZoneLayout l = vectorize(z);
  ExportOptions o = finetape(2);
  o.include_labels = true;
  o.include_registration_marks = true;
  o.net_names = {"A", "B", "C", "D"};
  const std::string svg = export_finetape_svg(z, l, o);
  CHECK(svg.find(kFineTapeWarning) != std::string::npos);
  CHECK(svg.find("stroke-width:2.000;") != std::string::npos);
  CHECK(svg.find(">C<") != std::string::npos);
  CHECK(svg.find("id=\"registration\"") != std::string::npos);
  std::size_t zones = 0, corridors = 0;
  std::vector<Polyline> guides;
  for (const auto& p : svg_paths(svg)) {
    if (p.group == "zones") ++zones;
    if (p.group == "tape-corridors") ++corridors;
    if (p.group == "tape-guides") guides.push_back(p.line);
  }
  CHECK(zones == 4);
  CHECK(corridors == l.cut_paths.size());
  std::vector<Polyline> cuts;
  for (const auto& p : svg_paths(export_cut_svg(l, {}))) {
    if (p.id != "outline") cuts.push_back(p.line);
  }
  REQUIRE(cuts.size() == guides.size());
  for (std::size_t k = 0; k < cuts.size(); ++k) CHECK(hausdorff_distance(cuts[k], guides[k]) < 1e-9);
}

TEST_CASE("a single zone has no tape corridors") {
  const ZoneMap z = zones_from(10, 10, 2, [](int, int) { return 0; });
  std::size_t corridors = 0;
  for (const auto& p : svg_paths(export_finetape_svg(z, vectorize(z), finetape(2)))) {
    if (p.group == "tape-corridors") ++corridors;
  }
  CHECK(corridors == 0);
}

TEST_CASE("preview png has one pixel per cell") {
  const ZoneMap z = two_zone();
  const auto png = export_zone_preview(z);
  REQUIRE(png.size() > 24);
  CHECK(png[1] == 'P');
  CHECK(png[2] == 'N');
  CHECK(png[3] == 'G');
  CHECK(be32(png, 16) == 20);
  CHECK(be32(png, 20) == 10);
}

TEST_CASE("preview colours") {
  const Rgb white{255, 255, 255};
  CHECK(preview_color(kGap) == white);
  CHECK(preview_color(kEmpty) == white);
  CHECK(preview_color(kOutside) == Rgb{160, 160, 160});
  CHECK(preview_color(kKeepout) == Rgb{64, 64, 64});
  for (Label a = 0; a < 12; ++a) {
    CHECK_FALSE(preview_color(a) == white);
    for (Label b = 0; b < a; ++b) CHECK_FALSE(preview_color(a) == preview_color(b));
  }
}
