#pragma once

#include <cmath>
#include <vector>

#include "seamkit/image.hpp"

namespace seamkit {

namespace detail {

/// Half-widths of a Euclidean disk of the given radius, one per row offset.
inline std::vector<int> disk_half_widths(int radius) {
  std::vector<int> hw(2 * radius + 1);
  for (int dy = -radius; dy <= radius; ++dy)
    hw[dy + radius] = static_cast<int>(std::floor(std::sqrt(static_cast<double>(radius * radius - dy * dy))));
  return hw;
}

/// Sets out = 1 wherever the disk around a pixel hits any pixel with
/// m == target. Out-of-image positions never match.
inline Mask disk_hit(const Mask& m, int radius, double target) {
  const int h = m.height();
  const int w = m.width();
  // prefix[y][x] = count of target pixels in row y, columns [0, x)
  std::vector<int> prefix(static_cast<std::size_t>(h) * (w + 1), 0);
  for (int y = 0; y < h; ++y) {
    int* row = &prefix[static_cast<std::size_t>(y) * (w + 1)];
    for (int x = 0; x < w; ++x) row[x + 1] = row[x] + (m.at(y, x) == target ? 1 : 0);
  }
  const std::vector<int> hw = disk_half_widths(radius);
  Mask out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool hit = false;
      for (int dy = -radius; dy <= radius && !hit; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        const int x0 = std::max(0, x - hw[dy + radius]);
        const int x1 = std::min(w - 1, x + hw[dy + radius]);
        const int* row = &prefix[static_cast<std::size_t>(yy) * (w + 1)];
        hit = row[x1 + 1] - row[x0] > 0;
      }
      out.at(y, x) = hit ? 1.0 : 0.0;
    }
  }
  return out;
}

}  // namespace detail

/// Binary dilation with a Euclidean disk of the given radius.
inline Mask dilate(const Mask& mask, int radius) {
  require_binary(mask, "dilate");
  if (radius < 0) throw PreconditionError("morphology radius must be non-negative");
  if (radius == 0) return mask;
  return detail::disk_hit(mask, radius, 1.0);
}

/// Binary erosion with a Euclidean disk; pixels outside the image are
/// ignored, so erode(m, r) == 1 - dilate(1 - m, r).
inline Mask erode(const Mask& mask, int radius) {
  require_binary(mask, "erode");
  if (radius < 0) throw PreconditionError("morphology radius must be non-negative");
  if (radius == 0) return mask;
  return invert(detail::disk_hit(mask, radius, 0.0));
}

}  // namespace seamkit
