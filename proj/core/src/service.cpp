#include "papercad/service.hpp"

#include <charconv>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "papercad/error.hpp"
#include "papercad/export.hpp"
#include "papercad/placement.hpp"

namespace papercad {

namespace {

using json = nlohmann::ordered_json;

double round3(double v) { return std::round(v * 1000.0) / 1000.0 + 0.0; }

json point_json(Point p) { return json::array({round3(p.x), round3(p.y)}); }

json points_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (Point p : pts) a.push_back(point_json(p));
  return a;
}

ApiResponse reply(int status, const json& body) { return {status, body.dump(), "application/json"}; }

ApiResponse error_reply(int status, const std::string& error, const std::string& message,
                        const std::vector<std::string>& parts = {}, const std::vector<int>& nets = {}) {
  json j;
  j["error"] = error;
  j["message"] = message;
  j["parts"] = parts;
  j["nets"] = nets;
  return reply(status, j);
}

ApiResponse error_reply(int status, const Error& e) {
  return error_reply(status, std::string(to_string(e.code())), e.what(), e.detail().parts, e.detail().nets);
}

json board_json(const Board& b) {
  json j;
  j["width"] = round3(b.width());
  j["height"] = round3(b.height());
  j["margin"] = round3(b.margin());
  j["resolution"] = round3(b.resolution());
  j["gap"] = round3(b.gap());
  j["min_feature"] = round3(b.min_feature());
  return j;
}

json placement_json(const Placement& p) {
  json j;
  j["x"] = round3(p.x);
  j["y"] = round3(p.y);
  j["rot"] = degrees(p.rotation);
  return j;
}

json layout_json(const PipelineResult& r, std::uint64_t revision) {
  json j;
  j["revision"] = revision;
  json zones = json::array();
  for (const auto& [net, polys] : r.layout.zones) {
    json z;
    z["net"] = net;
    z["name"] = static_cast<std::size_t>(net) < r.net_names.size() ? r.net_names[static_cast<std::size_t>(net)] : "";
    json arr = json::array();
    for (const auto& poly : polys) {
      json p;
      p["outer"] = points_json(poly.outer);
      json holes = json::array();
      for (const auto& h : poly.holes) holes.push_back(points_json(h));
      p["holes"] = std::move(holes);
      arr.push_back(std::move(p));
    }
    z["polygons"] = std::move(arr);
    zones.push_back(std::move(z));
  }
  j["zones"] = std::move(zones);
  json cuts = json::array();
  for (const auto& c : r.layout.cut_paths) {
    json p;
    p["closed"] = c.closed;
    p["points"] = points_json(c.points);
    cuts.push_back(std::move(p));
  }
  j["cut_paths"] = std::move(cuts);
  j["outline"] = points_json(r.layout.outline.points);
  json drc = json::parse(drc_report_json(r.drc, r.net_names));
  j["pass"] = drc["pass"];
  j["violations"] = drc["violations"];
  return j;
}

std::optional<double> number_field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_number()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

void ProjectSession::load(Netlist netlist, FootprintLibrary library, Board board, PlacementSet placement) {
  std::lock_guard writer(writer_);
  std::unique_lock lock(state_);
  netlist_ = std::move(netlist);
  library_ = std::make_shared<const FootprintLibrary>(std::move(library));
  board_ = board;
  placement_ = std::move(placement);
  loaded_ = true;
  ++revision_;
  cache_.reset();
}

bool ProjectSession::loaded() const {
  std::shared_lock lock(state_);
  return loaded_;
}

std::uint64_t ProjectSession::revision() const {
  std::shared_lock lock(state_);
  return revision_;
}

PlacementSet ProjectSession::placement() const {
  std::shared_lock lock(state_);
  return placement_;
}

ApiResponse ProjectSession::get_project() const {
  std::shared_lock lock(state_);
  if (!loaded_) return error_reply(404, "NotFound", "no project loaded");
  json j;
  json parts = json::array();
  for (const auto& part : netlist_.parts) {
    json p;
    p["id"] = part.id;
    p["footprint"] = part.footprint_key;
    p["label"] = part.label;
    if (const Footprint* fp = library_->find(part.footprint_key)) {
      p["courtyard"] = {{"w", round3(fp->courtyard_w)}, {"h", round3(fp->courtyard_h)}};
      json pads = json::array();
      for (std::size_t k = 0; k < fp->pads.size(); ++k) {
        const Pad& pad = fp->pads[k];
        pads.push_back({{"pin", k + 1},
                        {"x", round3(pad.offset.x)},
                        {"y", round3(pad.offset.y)},
                        {"shape", pad.shape.kind == PadKind::Circle ? "circle" : "rect"},
                        {"w", round3(pad.shape.w)},
                        {"h", round3(pad.shape.h)}});
      }
      p["pads"] = std::move(pads);
    }
    parts.push_back(std::move(p));
  }
  j["parts"] = std::move(parts);
  json nets = json::array();
  for (const auto& net : netlist_.nets) {
    json pins = json::array();
    for (const auto& pin : net.pins) pins.push_back(pin.part_id + "." + std::to_string(pin.pin));
    nets.push_back({{"id", net.id}, {"name", net.name}, {"pins", std::move(pins)}});
  }
  j["nets"] = std::move(nets);
  j["board"] = board_json(board_);
  json placement = json::object();
  for (const auto& [id, p] : placement_) placement[id] = placement_json(p);
  j["placement"] = std::move(placement);
  j["revision"] = revision_;
  return reply(200, j);
}

ApiResponse ProjectSession::put_placement(std::string_view part_id, std::string_view body) {
  std::lock_guard writer(writer_);
  Netlist netlist;
  std::shared_ptr<const FootprintLibrary> library;
  Board board;
  PlacementSet placement;
  {
    std::shared_lock lock(state_);
    if (!loaded_) return error_reply(404, "NotFound", "no project loaded");
    if (netlist_.find_part(part_id) == nullptr) {
      return error_reply(404, "UnknownPart", "no part '" + std::string(part_id) + "' in the netlist");
    }
    netlist = netlist_;
    library = library_;
    board = board_;
    placement = placement_;
  }
  const json request = json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object()) {
    return error_reply(400, "BadRequest", "body must be a JSON object {\"x\", \"y\", \"rot\"}");
  }
  const auto x = number_field(request, "x");
  const auto y = number_field(request, "y");
  const auto rot = number_field(request, "rot");
  if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
    return error_reply(400, "BadRequest", "x and y must be numbers in mm");
  }
  const double deg = rot.value_or(0.0);
  if (!(deg >= 0 && deg <= 270) || deg != std::floor(deg) || !is_cardinal(static_cast<int>(deg))) {
    return error_reply(422, "BadRotation", "rotation must be 0, 90, 180 or 270 degrees");
  }
  const std::string id(part_id);
  const Placement snapped{snap(*x, 0.1), snap(*y, 0.1), rotation_from_cardinal(static_cast<int>(deg))};
  placement[id] = snapped;

  const Part& part = *netlist.find_part(id);
  const Footprint* fp = library->find(part.footprint_key);
  if (fp == nullptr) {
    return error_reply(422, "UnknownFootprint", "part " + id + " uses unknown footprint '" + part.footprint_key + "'",
                       {id});
  }
  const Rect court = fp->placed_courtyard(snapped);
  if (!board.usable_area().contains(court)) {
    return error_reply(422, "OutOfBoard", "courtyard of " + id + " leaves the usable board area", {id});
  }
  const double halo = board.gap() / 2;
  for (const auto& other : netlist.parts) {
    if (other.id == id) continue;
    auto it = placement.find(other.id);
    const Footprint* ofp = library->find(other.footprint_key);
    if (it == placement.end() || ofp == nullptr) continue;
    const double area = intersection_area(court.expanded(halo), ofp->placed_courtyard(it->second).expanded(halo));
    if (area > 1e-9) {
      return error_reply(422, "Overlap", "courtyard of " + id + " overlaps " + other.id, {id, other.id});
    }
  }

  std::uint64_t revision = 0;
  {
    std::unique_lock lock(state_);
    placement_[id] = snapped;
    revision = ++revision_;
    cache_.reset();
  }
  json j;
  j["part"] = id;
  j["x"] = round3(snapped.x);
  j["y"] = round3(snapped.y);
  j["rot"] = degrees(snapped.rotation);
  j["revision"] = revision;
  return reply(200, j);
}

ApiResponse ProjectSession::recompute() {
  std::lock_guard writer(writer_);
  Netlist netlist;
  std::shared_ptr<const FootprintLibrary> library;
  Board board;
  PlacementSet placement;
  std::uint64_t revision = 0;
  {
    std::shared_lock lock(state_);
    if (!loaded_) return error_reply(404, "NotFound", "no project loaded");
    if (cache_ && cache_->revision == revision_) return cache_->response;
    netlist = netlist_;
    library = library_;
    board = board_;
    placement = placement_;
    revision = revision_;
  }
  for (const auto& part : netlist.parts) {
    if (!placement.contains(part.id)) {
      return error_reply(409, "MissingPlacement", "part " + part.id + " is not placed", {part.id});
    }
  }
  Cached cached;
  cached.revision = revision;
  try {
    auto result = std::make_shared<PipelineResult>(run_pad_pipeline(netlist, *library, placement, board));
    cached.response = reply(200, layout_json(*result, revision));
    cached.result = std::move(result);
  } catch (const Error& e) {
    cached.response = error_reply(422, e);
  }
  std::unique_lock lock(state_);
  cache_ = cached;
  return cached.response;
}

ApiResponse ProjectSession::get_drc() const {
  std::shared_lock lock(state_);
  if (!loaded_) return error_reply(404, "NotFound", "no project loaded");
  if (!cache_ || cache_->revision != revision_) {
    return error_reply(409, "Stale", "no layout for the current revision; POST /api/recompute first");
  }
  if (!cache_->result) return cache_->response;
  json j;
  j["revision"] = cache_->revision;
  json drc = json::parse(drc_report_json(cache_->result->drc, cache_->result->net_names));
  j["pass"] = drc["pass"];
  j["violations"] = drc["violations"];
  return reply(200, j);
}

ApiResponse ProjectSession::export_file(std::string_view mode, std::optional<std::string_view> tape_width) const {
  std::shared_lock lock(state_);
  if (!loaded_) return error_reply(404, "NotFound", "no project loaded");
  if (mode != "cut" && mode != "finetape") return error_reply(400, "BadRequest", "mode must be cut or finetape");
  if (!cache_ || cache_->revision != revision_) {
    return error_reply(409, "Stale", "layout is stale; POST /api/recompute first");
  }
  if (!cache_->result || !cache_->result->drc.pass) {
    return error_reply(409, "DrcFailed", "the current layout does not pass DRC");
  }
  const PipelineResult& r = *cache_->result;
  ExportOptions opts;
  try {
    if (mode == "cut") {
      opts.mode = ExportMode::VinylCut;
      return {200, export_cut_svg(r.layout, opts), "image/svg+xml"};
    }
    opts.mode = ExportMode::FineTape;
    opts.tape_width = r.zones.board.gap();
    if (tape_width) {
      double t = 0;
      const auto* end = tape_width->data() + tape_width->size();
      const auto [ptr, ec] = std::from_chars(tape_width->data(), end, t);
      if (ec != std::errc() || ptr != end) return error_reply(400, "BadRequest", "tape_width must be a number in mm");
      opts.tape_width = t;
    }
    return {200, export_finetape_svg(r.zones, r.layout, opts), "image/svg+xml"};
  } catch (const Error& e) {
    return error_reply(422, e);
  }
}

ApiResponse ProjectSession::preview_png() const {
  std::shared_lock lock(state_);
  if (!loaded_) return error_reply(404, "NotFound", "no project loaded");
  if (!cache_ || cache_->revision != revision_ || !cache_->result) {
    return error_reply(409, "Stale", "no layout for the current revision; POST /api/recompute first");
  }
  const auto png = export_zone_preview(cache_->result->zones);
  return {200, std::string(png.begin(), png.end()), "image/png"};
}

struct ApiServer::Impl {
  ProjectSession& session;
  httplib::Server server;
  std::thread thread;
  bool bound = false;

  explicit Impl(ProjectSession& s) : session(s) {
    auto send = [](httplib::Response& res, const ApiResponse& r) {
      res.status = r.status;
      res.set_content(r.body, r.content_type);
    };
    server.Get("/api/project", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, session.get_project());
    });
    server.Put(R"(/api/placement/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, session.put_placement(req.matches[1].str(), req.body));
    });
    server.Post("/api/recompute", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, session.recompute());
    });
    server.Get("/api/drc", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, session.get_drc());
    });
    server.Get("/api/export", [this, send](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> tape;
      if (req.has_param("tape_width") && !req.get_param_value("tape_width").empty()) {
        tape = req.get_param_value("tape_width");
      }
      const std::string mode = req.get_param_value("mode");
      send(res, session.export_file(mode, tape ? std::optional<std::string_view>(*tape) : std::nullopt));
    });
    server.Get("/api/preview.png", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, session.preview_png());
    });
  }
};

ApiServer::ApiServer(ProjectSession& session) : impl_(std::make_unique<Impl>(session)) {}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound;
}

void ApiServer::run() {
  if (!impl_->bound) bind();
  impl_->server.listen_after_bind();
}

void ApiServer::start() {
  if (!impl_->bound) bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void ApiServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace papercad
