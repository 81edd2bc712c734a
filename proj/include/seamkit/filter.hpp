#pragma once

#include <cmath>
#include <vector>

#include "seamkit/image.hpp"
#include "seamkit/rng.hpp"

namespace seamkit {

namespace detail {

/// Symmetric reflection without edge repetition (..., 2, 1 | 0, 1, 2, ...).
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

}  // namespace detail

/// Normalized 1-D Gaussian taps, radius ceil(3 sigma). sigma = 0 yields {1}.
inline std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0)) throw ConfigError("gaussian sigma must be non-negative", std::to_string(sigma));
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

/// Separable Gaussian blur with reflect padding; channels are independent.
template <int C>
Raster<C> gaussian_blur(const Raster<C>& img, double sigma) {
  const std::vector<double> k = gaussian_kernel(sigma);
  if (k.size() == 1) return img;
  const int r = static_cast<int>(k.size() / 2);
  const int h = img.height();
  const int w = img.width();

  Raster<C> tmp(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) acc += k[i + r] * img.at(y, detail::reflect_index(x + i, w), c);
        tmp.at(y, x, c) = acc;
      }
    }
  }
  Raster<C> out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp.at(detail::reflect_index(y + i, h), x, c);
        out.at(y, x, c) = acc;
      }
    }
  }
  return out;
}

/// Feathered mask: Gaussian blur kept inside [0,1].
inline Mask soften_mask(const Mask& mask, double sigma) {
  if (sigma == 0.0) return mask;
  return clamped(gaussian_blur(mask, sigma));
}

/// out = clamp01(img + region * n), n ~ N(0, sigma^2) i.i.d. per element.
/// A noise value is drawn for every element regardless of region so the
/// stream position does not depend on the mask.
inline Image gaussian_noise(const Image& img, double sigma, const Mask& region, Rng& rng) {
  require_same_shape(img, region, "gaussian_noise region");
  if (!(sigma >= 0.0)) throw ConfigError("noise sigma must be non-negative", std::to_string(sigma));
  Image out = img;
  if (sigma == 0.0) return out;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double wgt = region.at(y, x);
      for (int c = 0; c < 3; ++c) {
        const double n = rng.normal(0.0, sigma);
        if (wgt != 0.0) out.at(y, x, c) = clamp01(img.at(y, x, c) + wgt * n);
      }
    }
  }
  return out;
}

}  // namespace seamkit
