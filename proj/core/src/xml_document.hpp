#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace papercad::xml {

// Minimal element tree built on expat. Text content is not retained; none
// of the accepted formats carry data in character data.
struct Element {
  std::string name;
  std::map<std::string, std::string> attributes;
  std::vector<std::unique_ptr<Element>> children;
  int line = 0;
  int column = 0;

  std::optional<std::string> attribute(std::string_view key) const;
};

// Throws ParseError with the expat line/column on malformed input.
std::unique_ptr<Element> parse(std::string_view text);

std::string escape(std::string_view text);

}  // namespace papercad::xml
