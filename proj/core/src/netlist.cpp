#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "papercad/error.hpp"
#include "papercad/footprint.hpp"
#include "papercad/netmodel.hpp"
#include "xml_document.hpp"

namespace papercad {

const Part* Netlist::find_part(std::string_view id) const {
  for (const auto& p : parts) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

int Netlist::net_of(const PinRef& pin) const {
  for (const auto& n : nets) {
    if (std::find(n.pins.begin(), n.pins.end(), pin) != n.pins.end()) return n.id;
  }
  return -1;
}

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

int pin_from_connector_id(const std::string& id, const xml::Element& el) {
  std::size_t end = id.size();
  std::size_t begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(id[begin - 1])) != 0) --begin;
  if (begin == end) {
    throw ParseError("connector id '" + id + "' has no trailing pin index", el.line, el.column);
  }
  return std::stoi(id.substr(begin)) + 1;
}

class NetlistBuilder {
 public:
  explicit NetlistBuilder(const NetlistParseOptions& options) : options_(options) {}

  void declare(const xml::Element& el) {
    const auto id = el.attribute("id");
    if (!id || id->empty()) throw ParseError("part without id", el.line, el.column);
    auto label = el.attribute("label").value_or("");
    if (is_blank(label)) label.clear();
    const auto footprint = el.attribute("footprint");

    auto it = index_.find(*id);
    if (it == index_.end()) {
      index_[*id] = parts_.size();
      parts_.push_back(Part{*id, footprint.value_or(std::string(kUndeclaredFootprint)), label});
      declared_.push_back(footprint.has_value());
      return;
    }
    // Repeated declarations collapse; the first footprint and label win
    // unless they were missing.
    Part& part = parts_[it->second];
    if (footprint) {
      if (declared_[it->second] && part.footprint_key != *footprint) {
        throw ParseError("part '" + *id + "' declared with footprints '" + part.footprint_key +
                             "' and '" + *footprint + "'",
                         el.line, el.column);
      }
      part.footprint_key = *footprint;
      declared_[it->second] = true;
    }
    if (part.label.empty()) part.label = label;
  }

  void add_net(const xml::Element& net_el) {
    Net net;
    net.name = net_el.attribute("name").value_or("");
    for (const auto& child : net_el.children) {
      if (child->name != "connector") continue;
      const auto cid = child->attribute("id");
      if (!cid) throw ParseError("connector without id", child->line, child->column);
      const int pin = pin_from_connector_id(*cid, *child);
      const xml::Element* part_el = nullptr;
      for (const auto& c : child->children) {
        if (c->name == "part") part_el = c.get();
      }
      if (part_el == nullptr) {
        throw ParseError("connector '" + *cid + "' has no part", child->line, child->column);
      }
      declare(*part_el);
      PinRef ref{*part_el->attribute("id"), pin};
      if (std::find(net.pins.begin(), net.pins.end(), ref) != net.pins.end()) continue;
      auto [owner, inserted] = pin_owner_.emplace(ref, net_count());
      if (!inserted) {
        throw ParseError("pin " + ref.part_id + "." + std::to_string(ref.pin) + " appears in nets '" +
                             nets_[owner->second].name + "' and '" + net.name + "'",
                         child->line, child->column);
      }
      net.pins.push_back(std::move(ref));
    }
    if (net.pins.empty()) return;
    net.id = net_count();
    nets_.push_back(std::move(net));
  }

  void check_declarations() const {
    if (!options_.strict) return;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (!declared_[i]) {
        throw ParseError("connector references undeclared part '" + parts_[i].id + "'");
      }
    }
  }

  Netlist finish() && { return Netlist{std::move(parts_), std::move(nets_)}; }

 private:
  int net_count() const { return static_cast<int>(nets_.size()); }

  NetlistParseOptions options_;
  std::vector<Part> parts_;
  std::vector<bool> declared_;
  std::map<std::string, std::size_t> index_;
  std::vector<Net> nets_;
  std::map<PinRef, int> pin_owner_;
};

}  // namespace

Netlist parse_netlist_xml(std::string_view xml_text, const NetlistParseOptions& options) {
  const auto root = xml::parse(xml_text);
  if (root->name != "netlist") {
    throw ParseError("expected root element <netlist>, found <" + root->name + ">", root->line,
                     root->column);
  }
  NetlistBuilder builder(options);
  for (const auto& child : root->children) {
    if (child->name == "parts") {
      for (const auto& p : child->children) {
        if (p->name == "part") builder.declare(*p);
      }
    } else if (child->name == "net") {
      builder.add_net(*child);
    }
  }
  builder.check_declarations();
  return std::move(builder).finish();
}

std::string serialize_netlist(const Netlist& netlist) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<netlist>\n  <parts>\n";
  for (const auto& p : netlist.parts) {
    out << "    <part id=\"" << xml::escape(p.id) << "\" footprint=\"" << xml::escape(p.footprint_key)
        << "\" label=\"" << xml::escape(p.label) << "\"/>\n";
  }
  out << "  </parts>\n";
  for (const auto& n : netlist.nets) {
    out << "  <net name=\"" << xml::escape(n.name) << "\">\n";
    for (const auto& pin : n.pins) {
      out << "    <connector id=\"connector" << (pin.pin - 1) << "\"><part id=\""
          << xml::escape(pin.part_id) << "\"/></connector>\n";
    }
    out << "  </net>\n";
  }
  out << "</netlist>\n";
  return out.str();
}

std::string_view to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::UnknownFootprint: return "UNKNOWN_FOOTPRINT";
    case IssueKind::PinOutOfRange: return "PIN_OUT_OF_RANGE";
    case IssueKind::SinglePinNet: return "SINGLE_PIN_NET";
    case IssueKind::UnconnectedPart: return "UNCONNECTED_PART";
  }
  return "ISSUE";
}

std::vector<Issue> validate_netlist(const Netlist& netlist, const FootprintLibrary& library) {
  std::vector<Issue> issues;
  std::set<std::string> connected;
  for (const auto& part : netlist.parts) {
    if (library.find(part.footprint_key) == nullptr) {
      issues.push_back({IssueKind::UnknownFootprint, Severity::Error, part.id, -1,
                        "part " + part.id + " uses unknown footprint '" + part.footprint_key + "'"});
    }
  }
  for (const auto& net : netlist.nets) {
    for (const auto& pin : net.pins) {
      connected.insert(pin.part_id);
      const Part* part = netlist.find_part(pin.part_id);
      const Footprint* fp = part ? library.find(part->footprint_key) : nullptr;
      if (fp != nullptr && (pin.pin < 1 || pin.pin > static_cast<int>(fp->pads.size()))) {
        issues.push_back({IssueKind::PinOutOfRange, Severity::Error, pin.part_id, net.id,
                          "pin " + pin.part_id + "." + std::to_string(pin.pin) + " exceeds the " +
                              std::to_string(fp->pads.size()) + " pads of footprint '" + fp->key +
                              "'"});
      }
    }
    if (net.pins.size() == 1) {
      issues.push_back({IssueKind::SinglePinNet, Severity::Warning, net.pins[0].part_id, net.id,
                        "net '" + net.name + "' connects a single pin"});
    }
  }
  for (const auto& part : netlist.parts) {
    if (!connected.contains(part.id)) {
      issues.push_back({IssueKind::UnconnectedPart, Severity::Warning, part.id, -1,
                        "part " + part.id + " has no connected pins"});
    }
  }
  return issues;
}

bool has_blocking_issue(const std::vector<Issue>& issues) {
  return std::any_of(issues.begin(), issues.end(),
                     [](const Issue& i) { return i.severity == Severity::Error; });
}

}  // namespace papercad
