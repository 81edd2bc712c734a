#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "seamkit/image.hpp"
#include "seamkit/rng.hpp"

namespace seamkit {

/// Sampling ranges for the four jitter factors. Gains are multiplicative
/// (1 = identity); hue is a rotation about the gray axis in degrees.
struct JitterParams {
  Range brightness{0.85, 1.15};
  Range contrast{0.85, 1.15};
  Range saturation{0.85, 1.15};
  Range hue_degrees{-12.0, 12.0};

  void validate() const {
    brightness.validate("brightness");
    contrast.validate("contrast");
    saturation.validate("saturation");
    hue_degrees.validate("hue_degrees");
  }

  static JitterParams identity() { return {{1, 1}, {1, 1}, {1, 1}, {0, 0}}; }
};

struct JitterFactors {
  double brightness = 1.0;
  double contrast = 1.0;
  double saturation = 1.0;
  double hue_degrees = 0.0;
};

inline JitterFactors sample_jitter(const JitterParams& params, Rng& rng) {
  params.validate();
  JitterFactors f;
  f.brightness = rng.uniform(params.brightness);
  f.contrast = rng.uniform(params.contrast);
  f.saturation = rng.uniform(params.saturation);
  f.hue_degrees = rng.uniform(params.hue_degrees);
  return f;
}

inline double luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

namespace detail {

inline std::array<double, 9> hue_rotation(double degrees) {
  const double a = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(a);
  const double sn = std::sin(a);
  const double k = (1.0 - cs) / 3.0;
  const double s = std::sqrt(1.0 / 3.0) * sn;
  return {cs + k, k - s, k + s,
          k + s, cs + k, k - s,
          k - s, k + s, cs + k};
}

}  // namespace detail

/// Applies brightness gain, contrast pull toward the image's mean luma,
/// saturation blend with per-pixel luma and hue rotation, then clamps.
/// Identity factors are skipped so they leave values untouched.
inline Image apply_jitter(const Image& img, const JitterFactors& f) {
  Image out = img;
  auto& v = out;
  const std::size_t n = out.pixel_count();
  if (f.brightness != 1.0)
    for (double& x : v.values()) x *= f.brightness;
  if (f.contrast != 1.0) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += luma(v[3 * i], v[3 * i + 1], v[3 * i + 2]);
    m /= static_cast<double>(n);
    for (double& x : v.values()) x = m + f.contrast * (x - m);
  }
  if (f.saturation != 1.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double l = luma(v[3 * i], v[3 * i + 1], v[3 * i + 2]);
      for (int c = 0; c < 3; ++c) v[3 * i + c] = l + f.saturation * (v[3 * i + c] - l);
    }
  }
  if (f.hue_degrees != 0.0) {
    const auto rot = detail::hue_rotation(f.hue_degrees);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = v[3 * i], g = v[3 * i + 1], b = v[3 * i + 2];
      for (int c = 0; c < 3; ++c) v[3 * i + c] = rot[3 * c] * r + rot[3 * c + 1] * g + rot[3 * c + 2] * b;
    }
  }
  return clamped(std::move(out));
}

/// Jitter restricted to `region` (soft weights blend); region == 0 is untouched.
inline Image color_jitter(const Image& img, const Mask& region, const JitterFactors& f) {
  require_same_shape(img, region, "color_jitter region");
  return alpha_blend(apply_jitter(img, f), img, region);
}

inline Image color_jitter(const Image& img, const Mask& region, const JitterParams& params, Rng& rng) {
  const JitterFactors f = sample_jitter(params, rng);
  return color_jitter(img, region, f);
}

}  // namespace seamkit
