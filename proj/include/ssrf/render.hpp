#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssrf/filter_grid.hpp"

namespace ssrf {

/// Linear diverging blue-white-red map: 0 -> white (255,255,255),
/// +max|grid| -> (178,24,43), -max|grid| -> (33,102,172).
struct Rgb {
  std::uint8_t r = 255;
  std::uint8_t g = 255;
  std::uint8_t b = 255;
};

/// Color of a coefficient value given the grid's max absolute value.
Rgb diverging_color(double value, double max_abs);

/// The binary PPM (P6) image bytes of a grid, nearest-neighbor upscaled.
/// An all-zero grid renders all white.
std::vector<std::uint8_t> render_ppm_bytes(const FilterGrid& grid, int upscale);

/// Write the P6 image to a file.  Throws std::runtime_error on I/O failure
/// or upscale < 1.
void render_ppm(const FilterGrid& grid, const std::string& path, int upscale);

}  // namespace ssrf
