#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "seamkit/image.hpp"
#include "seamkit/jitter.hpp"
#include "seamkit/rng.hpp"

namespace seamkit {

/// Settings shared by the three color-shift schemes.
struct ColorShiftParams {
  JitterParams jitter;
  IntRange blob_count{1, 3};
  Range blob_axis_fraction{0.1, 0.5};  // semi-axes as a fraction of the image side
  double uniform_ratio = 0.7;          // jitter weight of the uniform scheme

  void validate() const {
    jitter.validate();
    blob_count.validate("blob_count");
    blob_axis_fraction.validate("blob_axis_fraction");
    if (blob_count.lo < 1) throw ConfigError("blob count must be >= 1");
    if (uniform_ratio < 0.0 || uniform_ratio > 1.0) throw ConfigError("uniform_ratio must lie in [0,1]");
  }
};

/// out = w * jittered + (1 - w) * img with w = weight * region. This is the
/// alpha blend x_sim = a * x_img + (1 - a) * x_jit with a = 1 - w.
inline Image blend_jittered(const Image& img, const Image& jittered, const Mask& weight, const Mask& region) {
  require_same_shape(img, weight, "color shift weight");
  require_same_shape(img, region, "color shift region");
  Mask w(img.height(), img.width());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = weight[i] * region[i];
  return alpha_blend(jittered, img, w);
}

/// Jitter weight rising linearly along `angle` (radians, 0 = +x), computed
/// on normalized coordinates and min-max scaled to [0,1].
inline Mask linear_gradient_weight(int height, int width, double angle) {
  Mask w(height, width);
  const double ux = std::cos(angle);
  const double uy = std::sin(angle);
  double lo = INFINITY, hi = -INFINITY;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double nx = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
      const double ny = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
      const double t = nx * ux + ny * uy;
      w.at(y, x) = t;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  for (double& v : w.values()) v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
  return w;
}

struct Ellipse {
  double cy = 0.0;
  double cx = 0.0;
  double ry = 0.0;  // semi-axes in pixels
  double rx = 0.0;
  double angle = 0.0;
};

/// Soft ellipse: (1 - rho^2)^2 inside (1 at the centre), 0 outside, where
/// rho is the normalized elliptical radius.
inline double blob_weight(const Ellipse& e, double y, double x) {
  if (e.ry <= 0.0 || e.rx <= 0.0) return 0.0;
  const double dy = y - e.cy;
  const double dx = x - e.cx;
  const double cs = std::cos(e.angle), sn = std::sin(e.angle);
  const double u = (dx * cs + dy * sn) / e.rx;
  const double v = (-dx * sn + dy * cs) / e.ry;
  const double rho2 = u * u + v * v;
  if (rho2 >= 1.0) return 0.0;
  return (1.0 - rho2) * (1.0 - rho2);
}

/// Overlapping blobs merge by a pointwise maximum.
inline Mask blob_weight_map(int height, int width, std::span<const Ellipse> blobs) {
  Mask w(height, width);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double v = 0.0;
      for (const auto& e : blobs) v = std::max(v, blob_weight(e, y, x));
      w.at(y, x) = v;
    }
  return w;
}

inline std::vector<Ellipse> sample_blobs(int height, int width, const ColorShiftParams& p, Rng& rng) {
  const double side = std::min(height, width);
  std::vector<Ellipse> blobs(static_cast<std::size_t>(rng.uniform_int(p.blob_count)));
  for (auto& e : blobs) {
    e.cy = rng.uniform(0.0, height - 1.0);
    e.cx = rng.uniform(0.0, width - 1.0);
    e.ry = side * rng.uniform(p.blob_axis_fraction);
    e.rx = side * rng.uniform(p.blob_axis_fraction);
    e.angle = rng.uniform(0.0, std::numbers::pi);
  }
  return blobs;
}

inline Image color_shift_linear_gradient(const Image& img, const Mask& mask, const ColorShiftParams& p, Rng& rng) {
  p.validate();
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const JitterFactors f = sample_jitter(p.jitter, rng);
  return blend_jittered(img, apply_jitter(img, f), linear_gradient_weight(img.height(), img.width(), angle), mask);
}

inline Image color_shift_blobs(const Image& img, const Mask& mask, const ColorShiftParams& p, Rng& rng) {
  p.validate();
  const auto blobs = sample_blobs(img.height(), img.width(), p, rng);
  const JitterFactors f = sample_jitter(p.jitter, rng);
  return blend_jittered(img, apply_jitter(img, f), blob_weight_map(img.height(), img.width(), blobs), mask);
}

inline Image color_shift_uniform(const Image& img, const Mask& mask, const ColorShiftParams& p, Rng& rng) {
  p.validate();
  const JitterFactors f = sample_jitter(p.jitter, rng);
  return blend_jittered(img, apply_jitter(img, f), Mask(img.height(), img.width(), p.uniform_ratio), mask);
}

}  // namespace seamkit
