#pragma once

#include <cmath>
#include <vector>

#include "seamkit/image.hpp"

namespace seamkit {

/// Detail bands of one decomposition level.
struct HaarLevel {
  Image horizontal;  // low-pass rows, high-pass columns
  Image vertical;    // high-pass rows, low-pass columns
  Image diagonal;
};

/// Orthonormal 2-D Haar pyramid; details[0] is the finest level.
struct HaarPyramid {
  Image approx;
  std::vector<HaarLevel> details;

  int levels() const { return static_cast<int>(details.size()); }
};

inline HaarPyramid haar_forward(const Image& img, int levels) {
  if (levels < 0) throw ShapeError("haar levels must be non-negative");
  const int f = 1 << levels;
  if (img.height() % f != 0 || img.width() % f != 0)
    throw ShapeError("image size must be divisible by 2^levels",
                     std::to_string(img.height()) + "x" + std::to_string(img.width()) +
                         " levels=" + std::to_string(levels));
  HaarPyramid p;
  p.approx = img;
  for (int l = 0; l < levels; ++l) {
    const Image& a = p.approx;
    const int h = a.height() / 2;
    const int w = a.width() / 2;
    Image lo(h, w), dh(h, w), dv(h, w), dd(h, w);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < 3; ++c) {
          const double p00 = a.at(2 * y, 2 * x, c);
          const double p01 = a.at(2 * y, 2 * x + 1, c);
          const double p10 = a.at(2 * y + 1, 2 * x, c);
          const double p11 = a.at(2 * y + 1, 2 * x + 1, c);
          lo.at(y, x, c) = 0.5 * (p00 + p01 + p10 + p11);
          dh.at(y, x, c) = 0.5 * (p00 - p01 + p10 - p11);
          dv.at(y, x, c) = 0.5 * (p00 + p01 - p10 - p11);
          dd.at(y, x, c) = 0.5 * (p00 - p01 - p10 + p11);
        }
      }
    }
    p.details.push_back({std::move(dh), std::move(dv), std::move(dd)});
    p.approx = std::move(lo);
  }
  return p;
}

inline Image haar_inverse(const HaarPyramid& p) {
  Image a = p.approx;
  for (int l = p.levels() - 1; l >= 0; --l) {
    const HaarLevel& d = p.details[l];
    require_same_shape(a, d.horizontal, "haar level");
    Image up(2 * a.height(), 2 * a.width());
    for (int y = 0; y < a.height(); ++y) {
      for (int x = 0; x < a.width(); ++x) {
        for (int c = 0; c < 3; ++c) {
          const double s = a.at(y, x, c);
          const double h = d.horizontal.at(y, x, c);
          const double v = d.vertical.at(y, x, c);
          const double g = d.diagonal.at(y, x, c);
          up.at(2 * y, 2 * x, c) = 0.5 * (s + h + v + g);
          up.at(2 * y, 2 * x + 1, c) = 0.5 * (s - h + v - g);
          up.at(2 * y + 1, 2 * x, c) = 0.5 * (s + h - v - g);
          up.at(2 * y + 1, 2 * x + 1, c) = 0.5 * (s - h - v + g);
        }
      }
    }
    a = std::move(up);
  }
  return a;
}

/// low_weight * L1(approximation) + high_weight * L1(details). Each term is
/// the band's summed |difference| divided by the total coefficient count,
/// so equal unit weights give the mean L1 over the full pyramid.
inline double haar_weighted_l1(const Image& x_pred, const Image& x_gt, double low_weight, double high_weight,
                               int levels) {
  require_same_shape(x_pred, x_gt, "haar_weighted_l1");
  if (!(low_weight >= high_weight && high_weight >= 0.0))
    throw ConfigError("haar weights need low_weight >= high_weight >= 0");
  const HaarPyramid a = haar_forward(x_pred, levels);
  const HaarPyramid b = haar_forward(x_gt, levels);
  auto band_sum = [](const Image& u, const Image& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += std::abs(u[i] - v[i]);
    return s;
  };
  const double low = band_sum(a.approx, b.approx);
  double high = 0.0;
  for (int l = 0; l < levels; ++l) {
    high += band_sum(a.details[l].horizontal, b.details[l].horizontal);
    high += band_sum(a.details[l].vertical, b.details[l].vertical);
    high += band_sum(a.details[l].diagonal, b.details[l].diagonal);
  }
  const double n = static_cast<double>(x_pred.size());
  return (low_weight * low + high_weight * high) / n;
}

}  // namespace seamkit
