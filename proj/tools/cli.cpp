#include "cli.hpp"

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "papercad/drc.hpp"
#include "papercad/error.hpp"
#include "papercad/export.hpp"
#include "papercad/pipeline.hpp"
#include "papercad/placement.hpp"
#include "papercad/service.hpp"

namespace papercad::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::optional<std::string> config;
  std::optional<std::string> board;  // "WxH"
  std::optional<double> resolution;
  std::optional<double> gap;
  std::optional<double> min_feature;
  std::optional<double> margin;
  std::optional<std::string> mode;
  std::optional<double> tape_width;
  std::optional<std::uint64_t> seed;
  bool debug = false;
  bool strict = false;
  std::optional<std::string> out;
  std::optional<std::string> input;
  std::optional<std::string> placement;
  std::vector<std::string> libraries;
  std::string net_attr = "data-net";
  int port = 8080;
};

// Settings after merging defaults, the config file and flags (flags win).
struct Settings {
  std::string input;
  std::optional<std::string> placement;
  std::vector<std::string> libraries;
  BoardParams board;
  bool board_size_given = false;
  bool gap_given = false;
  ExportMode mode = ExportMode::VinylCut;
  std::optional<double> tape_width;
  std::uint64_t seed = 1;
  bool debug = false;
  bool strict = false;
  fs::path out = "out";
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& path, std::string_view bytes) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    o.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    o.flush();
    if (!o) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot replace " + path.string());
  }
}

std::pair<double, double> parse_board_size(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0, b = 0;
    const double w = std::stod(text.substr(0, x), &a);
    const double h = std::stod(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1) throw std::invalid_argument(text);
    return {w, h};
  } catch (const std::exception&) {
    throw Error(ErrorCode::Validation, "--board expects WIDTHxHEIGHT in mm, got '" + text + "'");
  }
}

ExportMode parse_mode(const std::string& text) {
  if (text == "cut") return ExportMode::VinylCut;
  if (text == "finetape") return ExportMode::FineTape;
  throw Error(ErrorCode::Validation, "--mode must be cut or finetape, got '" + text + "'");
}

void apply_config(const fs::path& file, Settings& s) {
  YAML::Node root;
  try {
    root = YAML::Load(read_file(file));
  } catch (const YAML::Exception& e) {
    throw ParseError(file.string() + ": " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  const fs::path base = file.parent_path();
  auto path = [&](const YAML::Node& n) { return (base / n.as<std::string>()).string(); };
  try {
    if (root["netlist"]) s.input = path(root["netlist"]);
    if (root["input"]) s.input = path(root["input"]);
    if (root["placement"]) s.placement = path(root["placement"]);
    if (const auto libs = root["libraries"]) {
      for (const auto& l : libs) s.libraries.push_back(path(l));
    }
    if (const auto b = root["board"]) {
      if (b["width"]) s.board.width = b["width"].as<double>(), s.board_size_given = true;
      if (b["height"]) s.board.height = b["height"].as<double>(), s.board_size_given = true;
      if (b["margin"]) s.board.margin = b["margin"].as<double>();
      if (b["resolution"]) s.board.resolution = b["resolution"].as<double>();
      if (b["gap"]) s.board.gap = b["gap"].as<double>(), s.gap_given = true;
      if (b["min_feature"]) s.board.min_feature = b["min_feature"].as<double>();
    }
    if (const auto e = root["export"]) {
      if (e["mode"]) s.mode = parse_mode(e["mode"].as<std::string>());
      if (e["tape_width"]) s.tape_width = e["tape_width"].as<double>();
    }
    if (root["seed"]) s.seed = root["seed"].as<std::uint64_t>();
    if (root["out"]) s.out = base / root["out"].as<std::string>();
  } catch (const YAML::Exception& e) {
    throw ParseError(file.string() + ": " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
}

Settings merge(const Options& o) {
  Settings s;
  if (o.config) apply_config(*o.config, s);
  if (o.input) s.input = *o.input;
  if (o.placement) s.placement = *o.placement;
  s.libraries.insert(s.libraries.end(), o.libraries.begin(), o.libraries.end());
  if (o.board) {
    std::tie(s.board.width, s.board.height) = parse_board_size(*o.board);
    s.board_size_given = true;
  }
  if (o.resolution) s.board.resolution = *o.resolution;
  if (o.gap) s.board.gap = *o.gap, s.gap_given = true;
  if (o.min_feature) s.board.min_feature = *o.min_feature;
  if (o.margin) s.board.margin = *o.margin;
  if (o.mode) s.mode = parse_mode(*o.mode);
  if (o.tape_width) s.tape_width = *o.tape_width;
  if (o.seed) s.seed = *o.seed;
  if (o.out) s.out = *o.out;
  s.debug = o.debug;
  s.strict = o.strict;

  if (s.mode == ExportMode::FineTape) {
    if (!s.tape_width) {
      s.tape_width = s.board.gap;
    } else if (!s.gap_given) {
      s.board.gap = *s.tape_width;
    }
    if (std::abs(*s.tape_width - s.board.gap) > 1e-9) {
      throw Error(ErrorCode::TapeWidthMismatch, "tape width " + format_mm(*s.tape_width) + " mm differs from gap " +
                                                    format_mm(s.board.gap) + " mm; fine tape needs gap == tape width");
    }
    if (s.board.min_feature < s.board.gap) s.board.min_feature = s.board.gap;
  }
  return s;
}

Netlist load_netlist(const Settings& s) {
  NetlistParseOptions opts;
  opts.strict = s.strict;
  return parse_netlist_xml(read_file(s.input), opts);
}

FootprintLibrary load_library(const Settings& s) {
  FootprintLibrary lib = FootprintLibrary::builtin();
  for (const auto& path : s.libraries) lib = load_footprint_library(read_file(path), std::move(lib));
  return lib;
}

void report_issues(const std::vector<Issue>& issues, std::ostream& err) {
  for (const auto& issue : issues) err << "warning: " << to_string(issue.kind) << ": " << issue.message << '\n';
}

// Writes the DRC report and, on a pass, the fabrication files.
int emit(const PipelineResult& r, const Settings& s, std::ostream& out, std::ostream& err) {
  write_atomic(s.out / "drc.txt", format_drc_report(r.drc, r.net_names));
  if (s.debug) {
    write_atomic(s.out / "zonemap.zmap", dump_zonemap(r.zones));
    const auto png = export_zone_preview(r.zones);
    write_atomic(s.out / "preview.png", std::string_view(reinterpret_cast<const char*>(png.data()), png.size()));
  }
  if (!r.drc.pass) {
    err << "DRC failed with " << r.drc.violations.size() << " violation(s):\n";
    for (const auto& v : r.drc.violations) err << "  " << to_string(v.kind) << ": " << explain_violation(v, r.net_names) << '\n';
    return kExitViolations;
  }
  ExportOptions opts;
  write_atomic(s.out / "cut.svg", export_cut_svg(r.layout, opts));
  out << "wrote " << (s.out / "cut.svg").string() << '\n';
  if (s.mode == ExportMode::FineTape) {
    opts.mode = ExportMode::FineTape;
    opts.tape_width = *s.tape_width;
    write_atomic(s.out / "finetape.svg", export_finetape_svg(r.zones, r.layout, opts));
    out << "wrote " << (s.out / "finetape.svg").string() << '\n';
    err << "warning: " << kFineTapeWarning << '\n';
  }
  out << r.layout.zones.size() << " zones, " << r.layout.cut_paths.size() << " cut paths, DRC pass\n";
  return kExitClean;
}

int cmd_convert(const Options& o, std::ostream& out, std::ostream& err) {
  const Settings s = merge(o);
  const Netlist netlist = load_netlist(s);
  const FootprintLibrary library = load_library(s);
  const Board board(s.board);
  PlacementSet placement;
  if (s.placement) {
    placement = load_placement(read_file(*s.placement), netlist);
  } else {
    placement = auto_place(netlist, library, board, s.seed);
    write_atomic(s.out / "placement.txt", format_placement(placement));
    out << "no placement given; auto-placed with seed " << s.seed << '\n';
  }
  const PipelineResult r = run_pad_pipeline(netlist, library, placement, board);
  report_issues(r.issues, err);
  return emit(r, s, out, err);
}

int cmd_trace_convert(const Options& o, std::ostream& out, std::ostream& err) {
  Settings s = merge(o);
  const TraceLayer traces = parse_trace_layer(read_file(s.input), o.net_attr);
  for (const auto& w : traces.warnings) err << "warning: " << w << '\n';
  if (!s.board_size_given) {
    s.board.width = traces.width;
    s.board.height = traces.height;
  }
  const PipelineResult r = run_trace_pipeline(traces, Board(s.board));
  return emit(r, s, out, err);
}

int cmd_place(const Options& o, std::ostream& out, std::ostream&) {
  const Settings s = merge(o);
  const Netlist netlist = load_netlist(s);
  const FootprintLibrary library = load_library(s);
  const Board board(s.board);
  const PlacementSet placement = auto_place(netlist, library, board, s.seed);
  write_atomic(s.out / "placement.txt", format_placement(placement));
  const PlacementCost cost = placement_cost(netlist, library, board, placement);
  out << "wrote " << (s.out / "placement.txt").string() << " (wirelength " << format_mm(cost.wirelength)
      << " mm)\n";
  return kExitClean;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  const Settings s = merge(o);
  const ZoneMap zones = zonemap_for_board(parse_zonemap_dump(read_file(s.input)), Board(s.board));
  const DrcReport report = run_drc(zones, std::span<const SeedSource>{});
  out << format_drc_report(report);
  if (!report.pass) {
    for (const auto& v : report.violations) err << to_string(v.kind) << ": " << explain_violation(v) << '\n';
    return kExitViolations;
  }
  return kExitClean;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream&) {
  const Settings s = merge(o);
  Netlist netlist = load_netlist(s);
  FootprintLibrary library = load_library(s);
  const Board board(s.board);
  PlacementSet placement;
  if (s.placement) placement = load_placement(read_file(*s.placement), netlist);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ProjectSession session;
  session.load(std::move(netlist), std::move(library), board, std::move(placement));
  ApiServer server(session);
  const int port = server.bind("127.0.0.1", o.port);
  server.start();
  out << "serving on http://127.0.0.1:" << port << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  return kExitClean;
}

void add_common(CLI::App& cmd, Options& o) {
  cmd.add_option("--config", o.config, "YAML project file; flags override it");
  cmd.add_option("--board", o.board, "Board size WIDTHxHEIGHT in mm");
  cmd.add_option("--resolution", o.resolution, "Raster cell size in mm");
  cmd.add_option("--gap", o.gap, "Cut channel width g in mm");
  cmd.add_option("--min-feature", o.min_feature, "Minimum zone width in mm");
  cmd.add_option("--margin", o.margin, "Uncoppered border in mm");
  cmd.add_option("--mode", o.mode, "cut or finetape");
  cmd.add_option("--tape-width", o.tape_width, "Fine tape width in mm");
  cmd.add_option("--seed", o.seed, "Auto-placement seed");
  cmd.add_flag("--debug", o.debug, "Also write zonemap.zmap and preview.png");
  cmd.add_flag("--strict", o.strict, "Reject undeclared parts in the netlist");
  cmd.add_option("--out", o.out, "Output directory");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"papercad: paper circuit layouts from netlists and traces"};
  app.require_subcommand(1);
  Options o;

  auto* convert = app.add_subcommand("convert", "Netlist + placement to cut layout");
  add_common(*convert, o);
  convert->add_option("netlist", o.input, "Netlist XML");
  convert->add_option("--placement", o.placement, "Placement file");
  convert->add_option("--library", o.libraries, "Extra footprint library (YAML), repeatable");

  auto* trace = app.add_subcommand("trace-convert", "PCB trace layer SVG to cut layout");
  add_common(*trace, o);
  trace->add_option("svg", o.input, "Trace layer SVG");
  trace->add_option("--net-attr", o.net_attr, "Attribute carrying the net name");

  auto* place = app.add_subcommand("place", "Auto-place parts");
  add_common(*place, o);
  place->add_option("netlist", o.input, "Netlist XML");
  place->add_option("--library", o.libraries, "Extra footprint library (YAML), repeatable");

  auto* check = app.add_subcommand("check", "DRC on a debug zone map dump");
  add_common(*check, o);
  check->add_option("zonemap", o.input, "zonemap.zmap file")->required();

  auto* serve = app.add_subcommand("serve", "Serve the local editing API");
  add_common(*serve, o);
  serve->add_option("netlist", o.input, "Netlist XML");
  serve->add_option("--placement", o.placement, "Placement file");
  serve->add_option("--library", o.libraries, "Extra footprint library (YAML), repeatable");
  serve->add_option("--port", o.port, "TCP port on 127.0.0.1 (0 picks one)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitClean;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitClean;
  } catch (const CLI::ParseError& e) {
    err << "papercad: " << e.what() << '\n';
    return kExitFailed;
  }

  try {
    if (!o.input && !o.config) throw Error(ErrorCode::Validation, "no input file given");
    if (convert->parsed()) return cmd_convert(o, out, err);
    if (trace->parsed()) return cmd_trace_convert(o, out, err);
    if (place->parsed()) return cmd_place(o, out, err);
    if (check->parsed()) return cmd_check(o, out, err);
    return cmd_serve(o, out, err);
  } catch (const Error& e) {
    err << "papercad: " << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::PadClearanceViolation ? kExitViolations : kExitFailed;
  } catch (const std::exception& e) {
    err << "papercad: " << e.what() << '\n';
    return kExitFailed;
  }
}

}  // namespace papercad::cli
