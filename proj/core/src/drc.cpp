#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "grid_ops.hpp"
#include "papercad/drc.hpp"

namespace papercad {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

Violation make_violation(ViolationKind kind, const GridSpec& g, std::vector<std::size_t> cells) {
  std::sort(cells.begin(), cells.end());
  Violation v;
  v.kind = kind;
  double sx = 0, sy = 0;
  double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
  for (std::size_t c : cells) {
    const Point p = g.center(c);
    sx += p.x;
    sy += p.y;
    const int i = g.col(c), j = g.row(c);
    x0 = std::min(x0, i * g.resolution);
    y0 = std::min(y0, j * g.resolution);
    x1 = std::max(x1, (i + 1) * g.resolution);
    y1 = std::max(y1, (j + 1) * g.resolution);
  }
  const double n = static_cast<double>(cells.size());
  v.location = {sx / n, sy / n};
  v.bounds = {x0, y0, x1, y1};
  v.cells = std::move(cells);
  return v;
}

// Groups flagged cells into blobs: 8-adjacent flagged cells share a blob, as
// do cells related by `extra` links.
std::vector<std::vector<std::size_t>> blobs(const GridSpec& g, const std::vector<bool>& flagged,
                                            const std::vector<std::pair<std::size_t, std::size_t>>& extra,
                                            const std::function<bool(std::size_t, std::size_t)>& same) {
  UnionFind uf(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!flagged[c]) continue;
    const int i = g.col(c), j = g.row(c);
    for (int dj = 0; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (dj == 0 && di <= 0) continue;
        if (!g.in_bounds(i + di, j + dj)) continue;
        const std::size_t n = g.index(i + di, j + dj);
        if (flagged[n] && same(c, n)) uf.join(c, n);
      }
    }
  }
  for (const auto& [a, b] : extra) uf.join(a, b);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (flagged[c]) groups[uf.find(c)].push_back(c);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& [_, cells] : groups) out.push_back(std::move(cells));
  return out;
}

std::vector<int> nets_of(const ZoneMap& zones, const std::vector<std::size_t>& cells) {
  std::vector<int> nets;
  for (std::size_t c : cells) {
    if (is_net(zones.cells[c])) nets.push_back(zones.cells[c]);
  }
  std::sort(nets.begin(), nets.end());
  nets.erase(std::unique(nets.begin(), nets.end()), nets.end());
  return nets;
}

void clearance_rule(const ZoneMap& zones, std::vector<Violation>& out) {
  const GridSpec& g = zones.grid;
  const double limit = zones.board.gap() - 2 * g.resolution;
  if (limit <= 0) return;
  const auto near = detail::disk_offsets(limit / g.resolution, false);
  std::vector<bool> flagged(g.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Label k = zones.cells[c];
    if (!is_net(k)) continue;
    const int i = g.col(c), j = g.row(c);
    for (const auto& o : near) {
      if (!g.in_bounds(i + o.di, j + o.dj)) continue;
      const std::size_t n = g.index(i + o.di, j + o.dj);
      const Label other = zones.cells[n];
      if (!is_net(other) || other == k) continue;
      flagged[c] = true;
      if (c < n) pairs.emplace_back(c, n);
    }
  }
  const std::string detail = "cells of different nets closer than " + format_mm(limit) + " mm";
  for (auto& cells : blobs(g, flagged, pairs, [](std::size_t, std::size_t) { return true; })) {
    Violation v = make_violation(ViolationKind::Clearance, g, std::move(cells));
    v.nets = nets_of(zones, v.cells);
    v.detail = detail;
    out.push_back(std::move(v));
  }
}

void per_net_rule(const ZoneMap& zones, ViolationKind kind, const std::vector<bool>& flagged, const std::string& detail,
                  std::vector<Violation>& out) {
  const auto same = [&](std::size_t a, std::size_t b) { return zones.cells[a] == zones.cells[b]; };
  for (auto& cells : blobs(zones.grid, flagged, {}, same)) {
    Violation v = make_violation(kind, zones.grid, std::move(cells));
    v.nets = nets_of(zones, v.cells);
    v.detail = detail;
    out.push_back(std::move(v));
  }
}

void seed_rules(const ZoneMap& zones, std::span<const SeedSource> seeds, std::vector<Violation>& out) {
  const GridSpec& g = zones.grid;
  for (const auto& s : seeds) {
    if (!is_net(s.net)) continue;
    std::vector<std::size_t> bare;
    for (std::size_t c : s.cells) {
      if (zones.cells[c] != s.net) bare.push_back(c);
    }
    if (bare.empty()) continue;
    Violation v = make_violation(ViolationKind::PadUncovered, g, std::move(bare));
    v.nets = {s.net};
    v.parts = {s.name};
    v.detail = s.name + " has " + std::to_string(v.cells.size()) + " of " + std::to_string(s.cells.size()) +
               " seed cells outside its zone";
    out.push_back(std::move(v));
  }
  for (const auto& [net, ok] : check_zone_connectivity(zones, seeds)) {
    if (ok) continue;
    std::vector<std::size_t> cells;
    std::vector<std::string> parts;
    for (const auto& s : seeds) {
      if (s.net != net) continue;
      cells.insert(cells.end(), s.cells.begin(), s.cells.end());
      parts.push_back(s.name);
    }
    Violation v = make_violation(ViolationKind::DisconnectedNet, g, std::move(cells));
    v.location = g.center(v.cells.front());
    v.nets = {net};
    v.parts = std::move(parts);
    v.detail = "seeds of the net lie in separate regions";
    out.push_back(std::move(v));
  }
}

DrcReport finish(std::vector<Violation> violations) {
  std::stable_sort(violations.begin(), violations.end(), [](const Violation& a, const Violation& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.location.y != b.location.y) return a.location.y < b.location.y;
    if (a.location.x != b.location.x) return a.location.x < b.location.x;
    return a.nets < b.nets;
  });
  DrcReport r;
  r.violations = std::move(violations);
  r.pass = r.violations.empty();
  return r;
}

std::string net_name(int net, const std::vector<std::string>& names) {
  if (net >= 0 && static_cast<std::size_t>(net) < names.size()) return names[static_cast<std::size_t>(net)];
  return "net " + std::to_string(net);
}

std::string join_names(const std::vector<int>& nets, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t k = 0; k < nets.size(); ++k) {
    if (k > 0) s += k + 1 == nets.size() ? " and " : ", ";
    s += net_name(nets[k], names);
  }
  return s.empty() ? "no net" : s;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0 + 0.0; }

}  // namespace

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Clearance: return "CLEARANCE";
    case ViolationKind::DisconnectedNet: return "DISCONNECTED_NET";
    case ViolationKind::ThinFeature: return "THIN_FEATURE";
    case ViolationKind::PadUncovered: return "PAD_UNCOVERED";
    case ViolationKind::OutOfBoard: return "OUT_OF_BOARD";
    case ViolationKind::SeedConflict: return "SEED_CONFLICT";
  }
  return "UNKNOWN";
}

std::vector<std::size_t> clearance_violating_cells(const ZoneMap& zones) {
  std::vector<Violation> found;
  clearance_rule(zones, found);
  std::vector<std::size_t> cells;
  for (const auto& v : found) cells.insert(cells.end(), v.cells.begin(), v.cells.end());
  std::sort(cells.begin(), cells.end());
  return cells;
}

DrcReport run_drc(const ZoneMap& zones, std::span<const SeedSource> seeds) {
  const GridSpec& g = zones.grid;
  std::vector<Violation> out;
  clearance_rule(zones, out);
  seed_rules(zones, seeds, out);

  const auto kept = detail::opening_survivors(zones, zones.board.min_feature() / 2 / g.resolution);
  std::vector<bool> thin(g.size(), false);
  std::vector<bool> margin(g.size(), false);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!is_net(zones.cells[c])) continue;
    thin[c] = !kept[c];
    margin[c] = in_margin(g, zones.board, c);
  }
  per_net_rule(zones, ViolationKind::ThinFeature, thin,
               "zone narrower than the " + format_mm(zones.board.min_feature()) + " mm minimum feature", out);
  per_net_rule(zones, ViolationKind::OutOfBoard, margin,
               "copper inside the " + format_mm(zones.board.margin()) + " mm margin", out);
  return finish(std::move(out));
}

DrcReport run_drc(const ZoneMap& zones, std::span<const PadInstance> pads) {
  std::vector<SeedSource> sources;
  for (const auto& pad : pads) {
    if (pad.net_id < 0) continue;
    sources.push_back({pad.net_id, pad.part_id + "." + std::to_string(pad.pin), pad_cells(pad, zones.grid)});
  }
  return run_drc(zones, sources);
}

std::string explain_violation(const Violation& v, const std::vector<std::string>& net_names) {
  const std::string at = " at (" + format_mm(v.location.x) + ", " + format_mm(v.location.y) + ")";
  const std::string nets = join_names(v.nets, net_names);
  switch (v.kind) {
    case ViolationKind::Clearance:
      return "clearance violated between " + nets + at + ": " + v.detail + "; move the parts apart";
    case ViolationKind::DisconnectedNet:
      return nets + " is disconnected" + at + ": " + v.detail + "; move its parts closer together or clear a path";
    case ViolationKind::ThinFeature:
      return "thin feature in " + nets + at + ": " + v.detail + "; give the zone more room";
    case ViolationKind::PadUncovered:
      return "pad not covered by " + nets + at + ": " + v.detail + "; move neighbouring parts away";
    case ViolationKind::OutOfBoard:
      return nets + " leaves the usable board" + at + ": " + v.detail + "; move the part inwards";
    case ViolationKind::SeedConflict:
      return "seed conflict between " + nets + at + ": " + v.detail + "; parts overlap, separate them";
  }
  return v.detail;
}

std::string drc_report_json(const DrcReport& report, const std::vector<std::string>& net_names) {
  nlohmann::ordered_json doc;
  doc["pass"] = report.pass;
  doc["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : report.violations) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(v.kind);
    j["x"] = round3(v.location.x);
    j["y"] = round3(v.location.y);
    j["nets"] = v.nets;
    j["parts"] = v.parts;
    j["detail"] = v.detail;
    j["message"] = explain_violation(v, net_names);
    doc["violations"].push_back(std::move(j));
  }
  return doc.dump(2);
}

std::string format_drc_report(const DrcReport& report, const std::vector<std::string>& net_names) {
  std::ostringstream os;
  os << "# drc " << (report.pass ? "PASS" : "FAIL") << ", " << report.violations.size() << " violation"
     << (report.violations.size() == 1 ? "" : "s") << '\n';
  for (const auto& v : report.violations) {
    os << to_string(v.kind) << ' ' << format_mm(v.location.x) << ' ' << format_mm(v.location.y) << ' ';
    if (v.nets.empty()) os << '-';
    for (std::size_t k = 0; k < v.nets.size(); ++k) os << (k ? "," : "") << v.nets[k];
    os << ' ' << v.detail << '\n';
  }
  os << "# json\n" << drc_report_json(report, net_names) << '\n';
  return os.str();
}

}  // namespace papercad
