#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "papercad/error.hpp"
#include "papercad/partition.hpp"

namespace papercad {

namespace {

constexpr unsigned char kByteGap = 251;
constexpr unsigned char kByteOutside = 252;
constexpr unsigned char kByteKeepout = 253;
constexpr unsigned char kByteEmpty = 254;

unsigned char encode(Label l) {
  if (is_net(l)) {
    if (l >= kMaxNets) throw Error(ErrorCode::Validation, "net id " + std::to_string(l) + " does not fit the dump format");
    return static_cast<unsigned char>(l);
  }
  switch (l) {
    case kGap: return kByteGap;
    case kOutside: return kByteOutside;
    case kKeepout: return kByteKeepout;
    default: return kByteEmpty;
  }
}

Label decode(unsigned char b) {
  switch (b) {
    case kByteGap: return kGap;
    case kByteOutside: return kOutside;
    case kByteKeepout: return kKeepout;
    case kByteEmpty: return kEmpty;
    default: break;
  }
  if (b >= kMaxNets) throw ParseError("invalid cell byte " + std::to_string(b), 1, 1);
  return static_cast<Label>(b);
}

}  // namespace

std::string dump_zonemap(const LabelGrid& zones) {
  char header[96];
  std::snprintf(header, sizeof header, "%d %d %.17g\n", zones.grid.nx, zones.grid.ny, zones.grid.resolution);
  std::string out = header;
  out.reserve(out.size() + zones.cells.size());
  for (Label l : zones.cells) out.push_back(static_cast<char>(encode(l)));
  return out;
}

LabelGrid parse_zonemap_dump(std::string_view bytes) {
  const auto eol = bytes.find('\n');
  if (eol == std::string_view::npos) throw ParseError("zone map dump has no header line", 1, 1);
  std::istringstream header{std::string(bytes.substr(0, eol))};
  GridSpec g;
  std::string extra;
  if (!(header >> g.nx >> g.ny >> g.resolution) || (header >> extra) || g.nx <= 0 || g.ny <= 0 ||
      !(g.resolution > 0) || !std::isfinite(g.resolution)) {
    throw ParseError("zone map header must be \"nx ny resolution\"", 1, 1);
  }
  const auto body = bytes.substr(eol + 1);
  if (body.size() != g.size()) {
    throw ParseError("zone map dump holds " + std::to_string(body.size()) + " cells, header promises " +
                         std::to_string(g.size()),
                     2, 1);
  }
  LabelGrid out(g, kEmpty);
  for (std::size_t k = 0; k < body.size(); ++k) out.cells[k] = decode(static_cast<unsigned char>(body[k]));
  return out;
}

ZoneMap zonemap_for_board(LabelGrid grid, const Board& board) {
  const GridSpec expected = GridSpec::for_board(board);
  if (!(grid.grid.nx == expected.nx && grid.grid.ny == expected.ny &&
        std::abs(grid.grid.resolution - expected.resolution) < 1e-12)) {
    throw Error(ErrorCode::Validation, "zone map raster " + std::to_string(grid.grid.nx) + "x" +
                                           std::to_string(grid.grid.ny) + " does not match the board raster " +
                                           std::to_string(expected.nx) + "x" + std::to_string(expected.ny));
  }
  grid.grid = expected;
  ZoneMap out;
  static_cast<LabelGrid&>(out) = std::move(grid);
  out.board = board;
  return out;
}

}  // namespace papercad
