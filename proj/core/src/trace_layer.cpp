#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>

#include "papercad/error.hpp"
#include "papercad/netmodel.hpp"
#include "xml_document.hpp"

namespace papercad {

namespace {

struct Affine {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  Point apply(Point p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }
  Affine then(const Affine& inner) const {
    // this * inner: inner is applied first.
    return {a * inner.a + c * inner.b,     b * inner.a + d * inner.b,
            a * inner.c + c * inner.d,     b * inner.c + d * inner.d,
            a * inner.e + c * inner.f + e, b * inner.e + d * inner.f + f};
  }
  double linear_scale() const { return std::sqrt(std::abs(a * d - b * c)); }
};

class Scanner {
 public:
  explicit Scanner(std::string_view s) : s_(s) {}

  void skip_separators() {
    while (pos_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == ','))
      ++pos_;
  }
  bool at_end() {
    skip_separators();
    return pos_ >= s_.size();
  }
  bool next_is_number() {
    skip_separators();
    if (pos_ >= s_.size()) return false;
    const char ch = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '.';
  }
  std::optional<char> command() {
    skip_separators();
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) return s_[pos_++];
    return std::nullopt;
  }
  double number() {
    skip_separators();
    const std::string rest(s_.substr(pos_, std::min<std::size_t>(64, s_.size() - pos_)));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) throw ParseError("expected a number in '" + std::string(s_) + "'");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return v;
  }
  // Arc flags may be written without separators ("a1 1 0 01 5 5").
  bool flag() {
    skip_separators();
    if (pos_ < s_.size() && (s_[pos_] == '0' || s_[pos_] == '1')) return s_[pos_++] == '1';
    throw ParseError("expected an arc flag in '" + std::string(s_) + "'");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::vector<double> numbers(std::string_view text) {
  Scanner sc(text);
  std::vector<double> out;
  while (sc.next_is_number()) out.push_back(sc.number());
  return out;
}

// Parses "12.5mm" style lengths into millimetres.
double physical_length(const std::optional<std::string>& value, std::string_view what) {
  if (!value) throw Error(ErrorCode::Unit, "SVG root lacks a " + std::string(what) + " attribute");
  std::size_t idx = 0;
  double v = 0;
  try {
    v = std::stod(*value, &idx);
  } catch (const std::exception&) {
    throw ParseError("invalid " + std::string(what) + " '" + *value + "'");
  }
  std::string unit = value->substr(idx);
  while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.back()))) unit.pop_back();
  if (unit == "mm") return v;
  if (unit == "cm") return v * 10.0;
  if (unit == "in") return v * 25.4;
  if (unit == "pt") return v * 25.4 / 72.0;
  throw Error(ErrorCode::Unit, "cannot resolve " + std::string(what) + " '" + *value +
                                   "' to millimetres (use mm, cm, in or pt)");
}

Affine parse_transform(std::string_view text) {
  Affine result;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find('(', pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find(')', open);
    if (close == std::string_view::npos) throw ParseError("unterminated transform '" + std::string(text) + "'");
    std::string name(text.substr(pos, open - pos));
    std::erase_if(name, [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) || ch == ','; });
    const auto args = numbers(text.substr(open + 1, close - open - 1));
    Affine t;
    if (name == "translate" && !args.empty()) {
      t.e = args[0];
      t.f = args.size() > 1 ? args[1] : 0.0;
    } else if (name == "scale" && !args.empty()) {
      t.a = args[0];
      t.d = args.size() > 1 ? args[1] : args[0];
    } else if (name == "matrix" && args.size() == 6) {
      t = {args[0], args[1], args[2], args[3], args[4], args[5]};
    } else if (name == "rotate" && !args.empty()) {
      const double rad = args[0] * std::numbers::pi / 180.0;
      Affine r{std::cos(rad), std::sin(rad), -std::sin(rad), std::cos(rad), 0, 0};
      if (args.size() == 3) {
        Affine to{1, 0, 0, 1, args[1], args[2]};
        Affine back{1, 0, 0, 1, -args[1], -args[2]};
        r = to.then(r).then(back);
      }
      t = r;
    } else {
      throw ParseError("unsupported transform '" + name + "'");
    }
    result = result.then(t);
    pos = close + 1;
  }
  return result;
}

struct Style {
  Affine transform;
  std::optional<std::string> net;
  std::string fill = "#000";
  std::string stroke = "none";
  double stroke_width = 1.0;  // user units
};

void apply_presentation(Style& style, std::string_view key, std::string value) {
  while (!value.empty() && std::isspace(static_cast<unsigned char>(value.front()))) value.erase(0, 1);
  while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.pop_back();
  if (key == "fill") {
    style.fill = value;
  } else if (key == "stroke") {
    style.stroke = value;
  } else if (key == "stroke-width") {
    const auto v = numbers(value);
    if (!v.empty()) style.stroke_width = v[0];
  }
}

Style derive_style(const Style& parent, const xml::Element& el, std::string_view net_attr) {
  Style s = parent;
  for (const char* key : {"fill", "stroke", "stroke-width"}) {
    if (auto v = el.attribute(key)) apply_presentation(s, key, *v);
  }
  if (auto css = el.attribute("style")) {
    std::string_view rest = *css;
    while (!rest.empty()) {
      const auto semi = rest.find(';');
      const auto decl = rest.substr(0, semi);
      const auto colon = decl.find(':');
      if (colon != std::string_view::npos) {
        std::string key(decl.substr(0, colon));
        std::erase_if(key, [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
        apply_presentation(s, key, std::string(decl.substr(colon + 1)));
      }
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
  }
  if (auto t = el.attribute("transform")) s.transform = s.transform.then(parse_transform(*t));
  if (auto n = el.attribute(net_attr)) s.net = *n;
  return s;
}

constexpr int kCurveSegments = 16;
constexpr int kCircleSegments = 64;

void append_arc(std::vector<Point>& pts, Point from, double rx, double ry, double phi_deg,
                bool large, bool sweep, Point to) {
  if (from == to) return;
  rx = std::abs(rx);
  ry = std::abs(ry);
  if (rx == 0 || ry == 0) {
    pts.push_back(to);
    return;
  }
  const double phi = phi_deg * std::numbers::pi / 180.0;
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double dx = (from.x - to.x) / 2, dy = (from.y - to.y) / 2;
  const double x1 = cp * dx + sp * dy, y1 = -sp * dx + cp * dy;
  const double lambda = (x1 * x1) / (rx * rx) + (y1 * y1) / (ry * ry);
  if (lambda > 1) {
    rx *= std::sqrt(lambda);
    ry *= std::sqrt(lambda);
  }
  const double num = rx * rx * ry * ry - rx * rx * y1 * y1 - ry * ry * x1 * x1;
  const double den = rx * rx * y1 * y1 + ry * ry * x1 * x1;
  double coef = std::sqrt(std::max(0.0, num / den));
  if (large == sweep) coef = -coef;
  const double cxp = coef * rx * y1 / ry, cyp = -coef * ry * x1 / rx;
  const double cx = cp * cxp - sp * cyp + (from.x + to.x) / 2;
  const double cy = sp * cxp + cp * cyp + (from.y + to.y) / 2;
  auto angle = [](double ux, double uy, double vx, double vy) {
    return std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
  };
  const double theta = angle(1, 0, (x1 - cxp) / rx, (y1 - cyp) / ry);
  double delta = angle((x1 - cxp) / rx, (y1 - cyp) / ry, (-x1 - cxp) / rx, (-y1 - cyp) / ry);
  if (!sweep && delta > 0) delta -= 2 * std::numbers::pi;
  if (sweep && delta < 0) delta += 2 * std::numbers::pi;
  const int n = std::max(4, static_cast<int>(std::ceil(std::abs(delta) / (2 * std::numbers::pi) * kCircleSegments)));
  for (int i = 1; i <= n; ++i) {
    const double t = theta + delta * i / n;
    const double ex = rx * std::cos(t), ey = ry * std::sin(t);
    pts.push_back({cp * ex - sp * ey + cx, sp * ex + cp * ey + cy});
  }
  pts.back() = to;
}

std::vector<Polyline> parse_path_data(std::string_view d) {
  std::vector<Polyline> out;
  Polyline current;
  Point pen, start, last_ctrl;
  char prev = 0;
  auto flush = [&] {
    if (current.points.size() >= 2 || (current.closed && !current.points.empty())) out.push_back(current);
    current = {};
  };
  Scanner sc(d);
  char cmd = 0;
  while (!sc.at_end()) {
    if (auto c = sc.command()) {
      cmd = *c;
    } else if (cmd == 0) {
      throw ParseError("path data must start with a command: '" + std::string(d) + "'");
    }
    const bool rel = std::islower(static_cast<unsigned char>(cmd)) != 0;
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(cmd)));
    auto pt = [&] {
      const double x = sc.number();
      const double y = sc.number();
      return rel ? Point{pen.x + x, pen.y + y} : Point{x, y};
    };
    switch (up) {
      case 'M': {
        flush();
        pen = start = pt();
        current.points.push_back(pen);
        cmd = rel ? 'l' : 'L';  // implicit lineto for further pairs
        break;
      }
      case 'L':
        pen = pt();
        current.points.push_back(pen);
        break;
      case 'H': {
        const double x = sc.number();
        pen.x = rel ? pen.x + x : x;
        current.points.push_back(pen);
        break;
      }
      case 'V': {
        const double y = sc.number();
        pen.y = rel ? pen.y + y : y;
        current.points.push_back(pen);
        break;
      }
      case 'Z':
        current.closed = true;
        flush();
        pen = start;
        current.points.push_back(pen);
        break;
      case 'C':
      case 'S':
      case 'Q':
      case 'T': {
        Point c1, c2, end;
        const char pu = static_cast<char>(std::toupper(static_cast<unsigned char>(prev)));
        const Point reflected{2 * pen.x - last_ctrl.x, 2 * pen.y - last_ctrl.y};
        if (up == 'C') {
          c1 = pt();
          c2 = pt();
          end = pt();
        } else if (up == 'S') {
          c1 = (pu == 'C' || pu == 'S') ? reflected : pen;
          c2 = pt();
          end = pt();
        } else if (up == 'Q') {
          c1 = pt();
          end = pt();
        } else {
          c1 = (pu == 'Q' || pu == 'T') ? reflected : pen;
          end = pt();
        }
        const bool cubic = (up == 'C' || up == 'S');
        for (int i = 1; i <= kCurveSegments; ++i) {
          const double t = static_cast<double>(i) / kCurveSegments, u = 1 - t;
          Point p;
          if (cubic) {
            p = {u * u * u * pen.x + 3 * u * u * t * c1.x + 3 * u * t * t * c2.x + t * t * t * end.x,
                 u * u * u * pen.y + 3 * u * u * t * c1.y + 3 * u * t * t * c2.y + t * t * t * end.y};
          } else {
            p = {u * u * pen.x + 2 * u * t * c1.x + t * t * end.x,
                 u * u * pen.y + 2 * u * t * c1.y + t * t * end.y};
          }
          current.points.push_back(p);
        }
        last_ctrl = cubic ? c2 : c1;
        pen = end;
        break;
      }
      case 'A': {
        const double rx = sc.number();
        const double ry = sc.number();
        const double rot = sc.number();
        const bool large = sc.flag();
        const bool sweep = sc.flag();
        const Point end = pt();
        append_arc(current.points, pen, rx, ry, rot, large, sweep, end);
        pen = end;
        break;
      }
      default:
        throw ParseError(std::string("unsupported path command '") + cmd + "'");
    }
    prev = cmd;
    if (up == 'Z') cmd = 0;
    if (up == 'Z' && sc.next_is_number()) throw ParseError("numbers after closepath in '" + std::string(d) + "'");
  }
  flush();
  return out;
}

std::vector<Point> points_attribute(const xml::Element& el) {
  const auto v = numbers(el.attribute("points").value_or(""));
  std::vector<Point> pts;
  for (std::size_t i = 0; i + 1 < v.size(); i += 2) pts.push_back({v[i], v[i + 1]});
  return pts;
}

double num_attr(const xml::Element& el, const char* key, double fallback = 0.0) {
  const auto v = el.attribute(key);
  if (!v) return fallback;
  const auto n = numbers(*v);
  if (n.empty()) throw ParseError(std::string("invalid ") + key + " '" + *v + "'", el.line, el.column);
  return n[0];
}

std::vector<Polyline> element_geometry(const xml::Element& el) {
  const std::string& n = el.name;
  if (n == "path") return parse_path_data(el.attribute("d").value_or(""));
  if (n == "line") {
    return {Polyline{{{num_attr(el, "x1"), num_attr(el, "y1")}, {num_attr(el, "x2"), num_attr(el, "y2")}}, false}};
  }
  if (n == "polyline") return {Polyline{points_attribute(el), false}};
  if (n == "polygon") return {Polyline{points_attribute(el), true}};
  if (n == "rect") {
    const double x = num_attr(el, "x"), y = num_attr(el, "y");
    const double w = num_attr(el, "width"), h = num_attr(el, "height");
    return {Polyline{{{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}, true}};
  }
  if (n == "circle" || n == "ellipse") {
    const double cx = num_attr(el, "cx"), cy = num_attr(el, "cy");
    const double rx = n == "circle" ? num_attr(el, "r") : num_attr(el, "rx");
    const double ry = n == "circle" ? rx : num_attr(el, "ry");
    Polyline ring{{}, true};
    for (int i = 0; i < kCircleSegments; ++i) {
      const double t = 2 * std::numbers::pi * i / kCircleSegments;
      ring.points.push_back({cx + rx * std::cos(t), cy + ry * std::sin(t)});
    }
    return {ring};
  }
  return {};
}

bool is_container_skipped(const std::string& name) {
  return name == "defs" || name == "clipPath" || name == "mask" || name == "symbol" ||
         name == "title" || name == "desc" || name == "metadata" || name == "style";
}

class TraceCollector {
 public:
  TraceCollector(TraceLayer& layer, std::string_view net_attr) : layer_(layer), net_attr_(net_attr) {}

  void visit(const xml::Element& el, const Style& parent) {
    if (is_container_skipped(el.name)) return;
    const Style style = derive_style(parent, el, net_attr_);
    if (el.name == "g" || el.name == "svg" || el.name == "a") {
      for (const auto& child : el.children) visit(*child, style);
      return;
    }
    const auto shapes = element_geometry(el);
    if (shapes.empty()) return;
    const bool stroked = style.stroke != "none" && style.stroke_width > 0;
    const double stroke_mm = stroked ? style.stroke_width * style.transform.linear_scale() : 0.0;
    for (const auto& shape : shapes) {
      TraceGeometry g;
      g.filled = shape.closed && style.fill != "none";
      g.stroke_width = stroke_mm;
      g.path.closed = shape.closed;
      for (const Point& p : shape.points) g.path.points.push_back(style.transform.apply(p));
      if (!g.filled && g.stroke_width <= 0) {
        layer_.warnings.push_back("<" + el.name + "> at line " + std::to_string(el.line) +
                                  " is neither filled nor stroked; ignored");
        continue;
      }
      if (style.net && !style.net->empty()) {
        net_bucket(*style.net).geometry.push_back(std::move(g));
      } else {
        layer_.warnings.push_back("<" + el.name + "> at line " + std::to_string(el.line) + " has no " +
                                  std::string(net_attr_) + " attribute; treated as unassigned");
        layer_.unassigned.push_back(std::move(g));
      }
    }
  }

 private:
  TraceNet& net_bucket(const std::string& name) {
    for (auto& n : layer_.nets) {
      if (n.name == name) return n;
    }
    layer_.nets.push_back(TraceNet{name, {}});
    return layer_.nets.back();
  }

  TraceLayer& layer_;
  std::string_view net_attr_;
};

}  // namespace

TraceLayer parse_trace_layer(std::string_view svg_text, std::string_view net_attr) {
  const auto root = xml::parse(svg_text);
  if (root->name != "svg") {
    throw ParseError("expected root element <svg>, found <" + root->name + ">", root->line, root->column);
  }
  TraceLayer layer;
  layer.width = physical_length(root->attribute("width"), "width");
  layer.height = physical_length(root->attribute("height"), "height");
  const auto vb_text = root->attribute("viewBox");
  if (!vb_text) throw Error(ErrorCode::Unit, "SVG root lacks a viewBox; user units cannot be resolved to mm");
  const auto vb = numbers(*vb_text);
  if (vb.size() != 4 || vb[2] <= 0 || vb[3] <= 0) throw ParseError("invalid viewBox '" + *vb_text + "'");

  Style base;
  base.transform = Affine{layer.width / vb[2], 0, 0, layer.height / vb[3], 0, 0}.then(
      Affine{1, 0, 0, 1, -vb[0], -vb[1]});
  // The root's own transform-free attributes (style, net) still apply.
  Style root_style = base;
  if (auto n = root->attribute(net_attr)) root_style.net = *n;
  TraceCollector collector(layer, net_attr);
  for (const auto& child : root->children) collector.visit(*child, root_style);
  return layer;
}

}  // namespace papercad
