#include "ssrf/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace ssrf {

namespace {

// Endpoint colors of the diverging map; 0 maps to white.
constexpr int kPos[3] = {178, 24, 43};
constexpr int kNeg[3] = {33, 102, 172};

std::uint8_t mix(double t, int end) {
  const double v = 255.0 + t * (end - 255.0);
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

}  // namespace

Rgb diverging_color(double value, double max_abs) {
  if (!(max_abs > 0.0) || value == 0.0) return {255, 255, 255};
  const double t = std::clamp(value / max_abs, -1.0, 1.0);
  Rgb c;
  if (t >= 0.0) {
    c.r = mix(t, kPos[0]);
    c.g = mix(t, kPos[1]);
    c.b = mix(t, kPos[2]);
  } else {
    c.r = mix(-t, kNeg[0]);
    c.g = mix(-t, kNeg[1]);
    c.b = mix(-t, kNeg[2]);
  }
  return c;
}

std::vector<std::uint8_t> render_ppm_bytes(const FilterGrid& grid, int upscale) {
  if (upscale < 1) throw std::runtime_error("render_ppm: upscale must be >= 1");

  double max_abs = 0.0;
  for (double v : grid.data()) max_abs = std::max(max_abs, std::abs(v));

  const int w = grid.cols() * upscale;
  const int h = grid.rows() * upscale;
  const std::string header = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";

  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(bytes.size() + static_cast<std::size_t>(w) * h * 3);
  for (int y = grid.radius_y(); y >= -grid.radius_y(); --y) {
    for (int ry = 0; ry < upscale; ++ry) {
      for (int x = -grid.radius_x(); x <= grid.radius_x(); ++x) {
        const Rgb c = diverging_color(grid.at(x, y), max_abs);
        for (int rx = 0; rx < upscale; ++rx) {
          bytes.push_back(c.r);
          bytes.push_back(c.g);
          bytes.push_back(c.b);
        }
      }
    }
  }
  return bytes;
}

void render_ppm(const FilterGrid& grid, const std::string& path, int upscale) {
  const std::vector<std::uint8_t> bytes = render_ppm_bytes(grid, upscale);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ssrf
