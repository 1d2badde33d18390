#include "xml_document.hpp"

#include <expat.h>

#include "papercad/error.hpp"

namespace papercad::xml {

std::optional<std::string> Element::attribute(std::string_view key) const {
  auto it = attributes.find(std::string(key));
  if (it == attributes.end()) return std::nullopt;
  return it->second;
}

namespace {

struct Builder {
  XML_Parser parser = nullptr;
  std::unique_ptr<Element> root;
  std::vector<Element*> stack;
};

void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto* b = static_cast<Builder*>(user);
  auto el = std::make_unique<Element>();
  el->name = name;
  el->line = static_cast<int>(XML_GetCurrentLineNumber(b->parser));
  el->column = static_cast<int>(XML_GetCurrentColumnNumber(b->parser)) + 1;
  for (int i = 0; attrs[i] != nullptr; i += 2) el->attributes[attrs[i]] = attrs[i + 1];
  Element* raw = el.get();
  if (b->stack.empty()) {
    b->root = std::move(el);
  } else {
    b->stack.back()->children.push_back(std::move(el));
  }
  b->stack.push_back(raw);
}

void on_end(void* user, const XML_Char*) { static_cast<Builder*>(user)->stack.pop_back(); }

}  // namespace

std::unique_ptr<Element> parse(std::string_view text) {
  Builder b;
  b.parser = XML_ParserCreate("UTF-8");
  if (b.parser == nullptr) throw Error(ErrorCode::Io, "cannot allocate XML parser");
  XML_SetUserData(b.parser, &b);
  XML_SetElementHandler(b.parser, on_start, on_end);
  const auto status = XML_Parse(b.parser, text.data(), static_cast<int>(text.size()), XML_TRUE);
  if (status != XML_STATUS_OK) {
    const std::string message = XML_ErrorString(XML_GetErrorCode(b.parser));
    const int line = static_cast<int>(XML_GetCurrentLineNumber(b.parser));
    const int column = static_cast<int>(XML_GetCurrentColumnNumber(b.parser)) + 1;
    XML_ParserFree(b.parser);
    throw ParseError("malformed XML: " + message, line, column);
  }
  XML_ParserFree(b.parser);
  if (!b.root) throw ParseError("document has no root element");
  return std::move(b.root);
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace papercad::xml
