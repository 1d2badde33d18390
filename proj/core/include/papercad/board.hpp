#pragma once

#include <map>
#include <string>

#include "papercad/geometry.hpp"

namespace papercad {

// Defaults: 0.2 mm raster, 1.0 mm cut channel, 2.0 mm minimum zone width,
// 2.0 mm uncoppered margin.
struct BoardParams {
  double width = 100.0;
  double height = 70.0;
  double margin = 2.0;
  double resolution = 0.2;
  double gap = 1.0;
  double min_feature = 2.0;
};

// Validated board parameters. Construction enforces
//   width, height, resolution > 0;  margin >= 0;
//   gap >= 2 * resolution;  min_feature >= gap;  2 * margin < min(width, height).
class Board {
 public:
  Board() : Board(BoardParams{}) {}
  explicit Board(const BoardParams& params);

  double width() const { return p_.width; }
  double height() const { return p_.height; }
  double margin() const { return p_.margin; }
  double resolution() const { return p_.resolution; }
  double gap() const { return p_.gap; }
  double min_feature() const { return p_.min_feature; }
  const BoardParams& params() const { return p_; }

  Rect outline() const { return {0.0, 0.0, p_.width, p_.height}; }
  Rect usable_area() const {
    return {p_.margin, p_.margin, p_.width - p_.margin, p_.height - p_.margin};
  }

  friend bool operator==(const Board& a, const Board& b) {
    const auto& x = a.p_;
    const auto& y = b.p_;
    return x.width == y.width && x.height == y.height && x.margin == y.margin &&
           x.resolution == y.resolution && x.gap == y.gap && x.min_feature == y.min_feature;
  }

 private:
  BoardParams p_;
};

struct Placement {
  double x = 0.0;  // mm, board frame
  double y = 0.0;
  Rotation rotation = Rotation::R0;

  friend bool operator==(const Placement&, const Placement&) = default;
};

// part id -> placement. Ordered so that iteration (and every file written
// from it) is deterministic.
using PlacementSet = std::map<std::string, Placement>;

}  // namespace papercad
