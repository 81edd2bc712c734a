#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "seamkit/image.hpp"
#include "seamkit/rng.hpp"

namespace seamkit {

/// Free-form mask generator settings. Lengths are fractions of the
/// smaller image side so the same settings work at any resolution.
struct MaskGenParams {
  IntRange strokes{1, 4};
  IntRange vertices{4, 10};
  Range stroke_width{0.03, 0.10};
  Range step_length{0.05, 0.20};
  IntRange rectangles{0, 2};
  Range rect_size{0.10, 0.35};
  Range coverage{0.10, 0.50};
  int max_retries = 100;

  void validate() const {
    strokes.validate("strokes");
    vertices.validate("vertices");
    stroke_width.validate("stroke_width");
    step_length.validate("step_length");
    rectangles.validate("rectangles");
    rect_size.validate("rect_size");
    coverage.validate("coverage");
    if (strokes.lo < 0 || rectangles.lo < 0 || vertices.lo < 1)
      throw ConfigError("mask generator counts must be non-negative");
    if (coverage.lo < 0.0 || coverage.hi > 1.0) throw ConfigError("coverage must lie in [0,1]");
    if (max_retries < 1) throw ConfigError("max_retries must be positive");
  }
};

namespace detail {

/// Marks every pixel centre within `radius` of segment (y0,x0)-(y1,x1).
inline void draw_thick_segment(Mask& m, double y0, double x0, double y1, double x1, double radius) {
  const int ymin = std::max(0, static_cast<int>(std::floor(std::min(y0, y1) - radius)));
  const int ymax = std::min(m.height() - 1, static_cast<int>(std::ceil(std::max(y0, y1) + radius)));
  const int xmin = std::max(0, static_cast<int>(std::floor(std::min(x0, x1) - radius)));
  const int xmax = std::min(m.width() - 1, static_cast<int>(std::ceil(std::max(x0, x1) + radius)));
  const double dy = y1 - y0;
  const double dx = x1 - x0;
  const double len2 = dy * dy + dx * dx;
  for (int y = ymin; y <= ymax; ++y) {
    for (int x = xmin; x <= xmax; ++x) {
      double t = len2 > 0.0 ? ((y - y0) * dy + (x - x0) * dx) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double py = y0 + t * dy - y;
      const double px = x0 + t * dx - x;
      if (py * py + px * px <= radius * radius) m.at(y, x) = 1.0;
    }
  }
}

inline Mask draw_free_form(int height, int width, const MaskGenParams& p, Rng& rng) {
  Mask m(height, width);
  const double side = std::min(height, width);
  const int strokes = rng.uniform_int(p.strokes);
  for (int s = 0; s < strokes; ++s) {
    double y = rng.uniform(0.0, height - 1.0);
    double x = rng.uniform(0.0, width - 1.0);
    const double radius = 0.5 * side * rng.uniform(p.stroke_width);
    double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const int n = rng.uniform_int(p.vertices);
    for (int v = 0; v < n; ++v) {
      angle += rng.uniform(-0.4 * std::numbers::pi, 0.4 * std::numbers::pi);
      if (v % 2 == 1) angle += std::numbers::pi;  // zig-zag, as in free-form brush masks
      const double len = side * rng.uniform(p.step_length);
      const double ny = std::clamp(y + len * std::sin(angle), 0.0, height - 1.0);
      const double nx = std::clamp(x + len * std::cos(angle), 0.0, width - 1.0);
      draw_thick_segment(m, y, x, ny, nx, radius);
      y = ny;
      x = nx;
    }
  }
  const int rects = rng.uniform_int(p.rectangles);
  for (int r = 0; r < rects; ++r) {
    const int rh = std::max(1, static_cast<int>(std::lround(height * rng.uniform(p.rect_size))));
    const int rw = std::max(1, static_cast<int>(std::lround(width * rng.uniform(p.rect_size))));
    const int y0 = rng.uniform_int(0, std::max(0, height - rh));
    const int x0 = rng.uniform_int(0, std::max(0, width - rw));
    for (int y = y0; y < std::min(height, y0 + rh); ++y)
      for (int x = x0; x < std::min(width, x0 + rw); ++x) m.at(y, x) = 1.0;
  }
  return m;
}

}  // namespace detail

/// Random binary mask of brush strokes and rectangles whose coverage lies in
/// params.coverage; redrawn up to max_retries times.
inline Mask generate_mask(int height, int width, const MaskGenParams& params, Rng& rng) {
  params.validate();
  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    Mask m = detail::draw_free_form(height, width, params, rng);
    const double cov = mean(m);
    if (cov >= params.coverage.lo && cov <= params.coverage.hi) return m;
  }
  throw GenerationError("mask coverage range unattainable",
                        "retries=" + std::to_string(params.max_retries));
}

}  // namespace seamkit
