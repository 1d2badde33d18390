#include <doctest.h>

#include "oracles.hpp"
#include "papercad/error.hpp"
#include "papercad/footprint.hpp"
#include "papercad/netmodel.hpp"

using namespace papercad;
using papercad::testing::fixture_path;
using papercad::testing::read_text;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("rgb_led netlist parses into five parts and five nets") {
  const Netlist n = parse_netlist_xml(read_text(fixture_path("rgb_led.xml")));
  REQUIRE(n.parts.size() == 5);
  REQUIRE(n.nets.size() == 5);
  CHECK(n.nets[0].name == "VCC");
  CHECK(n.nets[4].name == "GND");
  CHECK(n.nets[4].pins.size() == 4);
  CHECK(n.find_part("BT1")->footprint_key == "cr2032_clip");
  // connector ids are zero-based, pins one-based
  CHECK(n.net_of({"LED1", 2}) == 0);
  CHECK(n.net_of({"LED1", 1}) == 1);
  CHECK(n.net_of({"R1", 2}) == 4);
  CHECK(n.net_of({"R1", 9}) == -1);
  for (std::size_t k = 0; k < n.nets.size(); ++k) CHECK(n.nets[k].id == static_cast<int>(k));
}

TEST_CASE("serialisation round-trips") {
  const Netlist n = parse_netlist_xml(read_text(fixture_path("rgb_led.xml")));
  CHECK(parse_netlist_xml(serialize_netlist(n)) == n);
  const Netlist c = parse_netlist_xml(read_text(fixture_path("chain4.xml")));
  CHECK(parse_netlist_xml(serialize_netlist(c)) == c);
}

TEST_CASE("malformed XML reports line and column") {
  try {
    parse_netlist_xml("<netlist>\n  <net name=\"A\">\n</netlist>");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(e.detail().line == 3);
    CHECK(e.detail().column > 0);
  }
}

TEST_CASE("a pin in two nets is rejected") {
  const char* xml = R"(<netlist>
    <net name="A"><connector id="connector0"><part id="R1" footprint="r_axial"/></connector></net>
    <net name="B"><connector id="connector0"><part id="R1"/></connector></net>
  </netlist>)";
  CHECK(code_of([&] { parse_netlist_xml(xml); }) == ErrorCode::Parse);
}

TEST_CASE("conflicting footprints for one part are rejected") {
  const char* xml = R"(<netlist><parts>
    <part id="R1" footprint="r_axial"/><part id="R1" footprint="led_5mm"/>
  </parts></netlist>)";
  CHECK(code_of([&] { parse_netlist_xml(xml); }) == ErrorCode::Parse);
}

TEST_CASE("undeclared parts: lenient placeholder, strict rejection") {
  const char* xml = R"(<netlist>
    <net name="A"><connector id="connector0"><part id="Q1"/></connector>
                  <connector id="connector0"><part id="R1" footprint="r_axial"/></connector></net>
  </netlist>)";
  const Netlist n = parse_netlist_xml(xml);
  CHECK(n.find_part("Q1")->footprint_key == kUndeclaredFootprint);
  CHECK(code_of([&] { parse_netlist_xml(xml, {.strict = true}); }) == ErrorCode::Parse);
}

TEST_CASE("validation flags unknown footprints, bad pins and dangling parts") {
  const char* xml = R"(<netlist><parts>
      <part id="U1" footprint="mystery"/><part id="R1" footprint="r_axial"/><part id="D1" footprint="led_5mm"/>
    </parts>
    <net name="A"><connector id="connector0"><part id="U1"/></connector>
                  <connector id="connector4"><part id="R1"/></connector></net>
  </netlist>)";
  const auto issues = validate_netlist(parse_netlist_xml(xml), FootprintLibrary::builtin());
  auto count = [&](IssueKind k) {
    return std::count_if(issues.begin(), issues.end(), [&](const Issue& i) { return i.kind == k; });
  };
  CHECK(count(IssueKind::UnknownFootprint) == 1);
  CHECK(count(IssueKind::PinOutOfRange) == 1);
  CHECK(count(IssueKind::UnconnectedPart) == 1);
  CHECK(has_blocking_issue(issues));
  CHECK(to_string(IssueKind::UnknownFootprint) == "UNKNOWN_FOOTPRINT");
}

TEST_CASE("fixture netlist validates cleanly") {
  const auto issues =
      validate_netlist(parse_netlist_xml(read_text(fixture_path("rgb_led.xml"))), FootprintLibrary::builtin());
  CHECK(issues.empty());
}

TEST_CASE("trace layer groups geometry by net attribute") {
  const TraceLayer t = parse_trace_layer(read_text(fixture_path("two_trace.svg")));
  CHECK(t.width == doctest::Approx(100));
  CHECK(t.height == doctest::Approx(70));
  REQUIRE(t.nets.size() == 2);
  CHECK(t.nets[0].name == "VCC");
  CHECK(t.nets[1].name == "GND");
  REQUIRE(t.nets[0].geometry.size() == 1);
  const auto& g = t.nets[0].geometry[0];
  CHECK(g.stroke_width == doctest::Approx(1.0));
  CHECK_FALSE(g.filled);
  CHECK(g.path.points.front() == Point{10, 20});
  CHECK(g.path.points.back() == Point{90, 20});
  CHECK(t.unassigned.empty());
}

TEST_CASE("trace layer honours units, transforms and unassigned geometry") {
  const char* svg = R"svg(<svg xmlns="http://www.w3.org/2000/svg" width="4in" height="2in" viewBox="0 0 400 200">
    <g transform="translate(10,0)" stroke="#000" stroke-width="10" fill="none">
      <line data-net="A" x1="0" y1="50" x2="100" y2="50"/>
      <polyline points="0,150 100,150"/>
    </g>
    <rect data-net="B" x="300" y="20" width="50" height="50" fill="#000"/>
  </svg>)svg";
  const TraceLayer t = parse_trace_layer(svg);
  CHECK(t.width == doctest::Approx(101.6));
  CHECK(t.height == doctest::Approx(50.8));
  REQUIRE(t.nets.size() == 2);
  const double s = 101.6 / 400;
  CHECK(t.nets[0].geometry[0].path.points[0].x == doctest::Approx(10 * s));
  CHECK(t.nets[0].geometry[0].stroke_width == doctest::Approx(10 * s));
  CHECK(t.nets[1].geometry[0].filled);
  CHECK(t.unassigned.size() == 1);
  CHECK_FALSE(t.warnings.empty());
}

TEST_CASE("trace layer needs physical units and a viewBox") {
  CHECK(code_of([] { parse_trace_layer(R"(<svg width="100" height="70" viewBox="0 0 100 70"/>)"); }) ==
        ErrorCode::Unit);
  CHECK(code_of([] { parse_trace_layer(R"(<svg width="100mm" height="70mm"/>)"); }) == ErrorCode::Unit);
  CHECK(code_of([] { parse_trace_layer("<svg"); }) == ErrorCode::Parse);
}
