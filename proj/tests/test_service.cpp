#include <doctest.h>

#include <httplib.h>

#include <filesystem>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "oracles.hpp"
#include "papercad/export.hpp"
#include "papercad/placement.hpp"
#include "papercad/service.hpp"

using namespace papercad;
using namespace papercad::testing;
using nlohmann::json;

namespace {

const BoardParams kBoard{100, 70, 2, 0.2, 1.0, 2.0};

void load_rgb(ProjectSession& s, std::optional<std::pair<std::string, Placement>> override_part = {}) {
  Netlist n = parse_netlist_xml(read_text(fixture_path("rgb_led.xml")));
  PlacementSet pl = load_placement(read_text(fixture_path("rgb_led.place")), n);
  if (override_part) pl[override_part->first] = override_part->second;
  s.load(std::move(n), FootprintLibrary::builtin(), Board(kBoard), std::move(pl));
}

std::string expected_cut_svg() {
  const Netlist n = parse_netlist_xml(read_text(fixture_path("rgb_led.xml")));
  const PlacementSet pl = load_placement(read_text(fixture_path("rgb_led.place")), n);
  return export_cut_svg(run_pad_pipeline(n, FootprintLibrary::builtin(), pl, Board(kBoard)).layout, {});
}

}  // namespace

TEST_CASE("an empty session answers 404") {
  ProjectSession s;
  CHECK_FALSE(s.loaded());
  CHECK(s.get_project().status == 404);
  CHECK(s.recompute().status == 404);
  CHECK(s.put_placement("R1", R"({"x":1,"y":2,"rot":0})").status == 404);
}

TEST_CASE("project description") {
  ProjectSession s;
  load_rgb(s);
  const ApiResponse r = s.get_project();
  REQUIRE(r.status == 200);
  const json j = json::parse(r.body);
  CHECK(j["parts"].size() == 5);
  CHECK(j["nets"].size() == 5);
  CHECK(j["board"]["width"] == 100);
  CHECK(j["revision"] == 1);
}

TEST_CASE("placement updates are validated and snapped") {
  ProjectSession s;
  load_rgb(s);
  const ApiResponse ok = s.put_placement("R3", R"({"x":82.04,"y":20.04,"rot":270})");
  REQUIRE(ok.status == 200);
  const json j = json::parse(ok.body);
  CHECK(j["x"] == 82.0);
  CHECK(j["y"] == 20.0);
  CHECK(j["revision"] == 2);
  CHECK(s.placement().at("R3").y == doctest::Approx(20.0));

  CHECK(s.put_placement("R3", R"({"x":82,"y":30,"rot":45})").status == 422);
  CHECK(s.put_placement("R3", R"({"x":82,"y":30,"rot":1e300})").status == 422);
  CHECK(s.put_placement("R3", R"({"x":"a","y":30})").status == 400);
  CHECK(s.put_placement("R3", "not json").status == 400);
  CHECK(s.put_placement("Q9", R"({"x":82,"y":30,"rot":0})").status == 404);
  CHECK(s.put_placement("R3", R"({"x":99,"y":30,"rot":270})").status == 422);
  CHECK(s.put_placement("R3", R"({"x":67,"y":30,"rot":270})").status == 422);
  CHECK(s.revision() == 2);

  CHECK(s.put_placement("R3", R"({"x":82,"y":30,"rot":270})").status == 200);
  CHECK(s.revision() == 3);
}

TEST_CASE("recompute is cached per revision and exports match the direct pipeline") {
  ProjectSession s;
  load_rgb(s);
  CHECK(s.get_drc().status == 409);
  CHECK(s.export_file("cut", std::nullopt).status == 409);
  const ApiResponse a = s.recompute();
  REQUIRE(a.status == 200);
  const json j = json::parse(a.body);
  CHECK(j["zones"].size() == 5);
  CHECK(j["pass"] == true);
  CHECK(s.recompute().body == a.body);
  CHECK(s.get_drc().status == 200);

  const ApiResponse cut = s.export_file("cut", std::nullopt);
  REQUIRE(cut.status == 200);
  CHECK(cut.body == expected_cut_svg());
  CHECK(s.export_file("finetape", std::nullopt).status == 200);
  CHECK(s.export_file("finetape", "2.0").status == 422);
  CHECK(s.export_file("laser", std::nullopt).status == 400);
  const ApiResponse png = s.preview_png();
  CHECK(png.status == 200);
  CHECK(png.content_type == "image/png");

  REQUIRE(s.put_placement("R3", R"({"x":82,"y":31,"rot":270})").status == 200);
  CHECK(s.export_file("cut", std::nullopt).status == 409);
  CHECK(s.recompute().body != a.body);
}

TEST_CASE("stacked parts are reported as a seed conflict naming both") {
  ProjectSession s;
  load_rgb(s, std::make_pair(std::string("R2"), Placement{25, 30, Rotation::R270}));
  const ApiResponse r = s.recompute();
  CHECK(r.status == 422);
  const json j = json::parse(r.body);
  CHECK(j["error"] == "SeedConflict");
  const std::string parts = j["parts"].dump();
  CHECK(parts.find("R1") != std::string::npos);
  CHECK(parts.find("R2") != std::string::npos);
}

TEST_CASE("a missing placement blocks recompute") {
  ProjectSession s;
  Netlist n = parse_netlist_xml(read_text(fixture_path("rgb_led.xml")));
  s.load(std::move(n), FootprintLibrary::builtin(), Board(kBoard), {});
  CHECK(s.recompute().status == 409);
}

TEST_CASE("concurrent updates lose no revisions") {
  ProjectSession s;
  load_rgb(s);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&s, t] {
      for (int k = 0; k < 10; ++k) {
        const std::string body = R"({"x":82,"y":)" + std::to_string(25 + t + k % 3) + R"(,"rot":270})";
        s.put_placement("R3", body);
        if (k % 4 == 0) s.recompute();
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(s.revision() == 41);
}

TEST_CASE("the HTTP front end serves the session") {
  ProjectSession s;
  load_rgb(s);
  ApiServer server(s);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  server.start();
  httplib::Client c("127.0.0.1", port);
  auto project = c.Get("/api/project");
  REQUIRE(project);
  CHECK(project->status == 200);
  auto put = c.Put("/api/placement/R3", R"({"x":82,"y":32,"rot":270})", "application/json");
  REQUIRE(put);
  CHECK(put->status == 200);
  auto bad = c.Put("/api/placement/R3", R"({"x":82,"y":32,"rot":45})", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 422);
  auto stale = c.Get("/api/export?mode=cut");
  REQUIRE(stale);
  CHECK(stale->status == 409);
  auto re = c.Post("/api/recompute", "", "application/json");
  REQUIRE(re);
  CHECK(re->status == 200);
  auto drc = c.Get("/api/drc");
  REQUIRE(drc);
  CHECK(json::parse(drc->body)["pass"] == true);
  auto svg = c.Get("/api/export?mode=cut");
  REQUIRE(svg);
  CHECK(svg->status == 200);
  CHECK(svg->body.rfind("<?xml", 0) == 0);
  auto png = c.Get("/api/preview.png");
  REQUIRE(png);
  CHECK(png->status == 200);
  server.stop();
}
