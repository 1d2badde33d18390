#include <png.h>

#include <cmath>
#include <stdexcept>

#include "papercad/error.hpp"
#include "papercad/export.hpp"

namespace papercad {

namespace {

Rgb hsv(double h, double s, double v) {
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1 - std::abs(std::fmod(hp, 2.0) - 1));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = v - c;
  auto byte = [&](double u) { return static_cast<std::uint8_t>(std::lround((u + m) * 255)); };
  return {byte(r), byte(g), byte(b)};
}

void append(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void flush(png_structp) {}

[[noreturn]] void fail(png_structp, png_const_charp msg) { throw Error(ErrorCode::Io, std::string("png: ") + msg); }

}  // namespace

Rgb preview_color(Label label) {
  if (is_net(label)) {
    // Golden-angle hue steps keep neighbouring ids far apart on the wheel.
    const double hue = std::fmod(label * 137.50776405, 360.0);
    const double value = label % 2 == 0 ? 0.85 : 0.65;
    return hsv(hue, 0.75, value);
  }
  switch (label) {
    case kOutside: return {160, 160, 160};
    case kKeepout: return {64, 64, 64};
    default: return {255, 255, 255};
  }
}

std::vector<std::uint8_t> export_zone_preview(const LabelGrid& zones) {
  const GridSpec& g = zones.grid;
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, fail, nullptr);
  if (png == nullptr) throw Error(ErrorCode::Io, "png: cannot create writer");
  png_infop info = png_create_info_struct(png);
  try {
    if (info == nullptr) throw Error(ErrorCode::Io, "png: cannot create info");
    png_set_write_fn(png, &out, append, flush);
    png_set_IHDR(png, info, static_cast<png_uint_32>(g.nx), static_cast<png_uint_32>(g.ny), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_byte> row(static_cast<std::size_t>(g.nx) * 3);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const Rgb c = preview_color(zones.at(i, j));
        row[i * 3 + 0] = c.r;
        row[i * 3 + 1] = c.g;
        row[i * 3 + 2] = c.b;
      }
      png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace papercad
