#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "papercad/partition.hpp"

namespace papercad {

enum class ExportMode { VinylCut, FineTape };

struct ExportOptions {
  ExportMode mode = ExportMode::VinylCut;
  double tape_width = 0.0;  // mm, fine tape only
  bool include_labels = false;
  bool include_registration_marks = false;
  std::vector<std::string> net_names;  // indexed by net id, for labels
};

inline constexpr const char* kFineTapeWarning =
    "fine-tape template: the top conductive layer must be peelable (copper foil tape); "
    "conductive fabric tape is not supported";

// Blade paths as stroke-only <path> elements ordered by first vertex
// (y, then x), the board outline last. Throws ModeMismatch.
std::string export_cut_svg(const ZoneLayout& layout, const ExportOptions& opts);

// Print template: zone fills, white tape corridors of width t along the cut
// paths, dashed guide centre lines in group "tape-guides" (same polylines
// and order as the cut SVG). Throws ModeMismatch, TapeWidthMismatch (t != g).
std::string export_finetape_svg(const ZoneMap& zones, const ZoneLayout& layout, const ExportOptions& opts);

// PNG, one pixel per cell. Net colours come from a fixed sequence indexed by
// net id; GAP and EMPTY are white, OUTSIDE gray, KEEPOUT dark gray.
std::vector<std::uint8_t> export_zone_preview(const LabelGrid& zones);

struct Rgb {
  std::uint8_t r, g, b;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};
Rgb preview_color(Label label);

}  // namespace papercad
