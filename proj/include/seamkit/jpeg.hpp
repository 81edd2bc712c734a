#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "seamkit/image.hpp"

namespace seamkit {

namespace jpeg {

// ITU-T T.81 Annex K example tables, natural (row-major) order.
inline constexpr std::array<int, 64> kLumaTable = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

inline constexpr std::array<int, 64> kChromaTable = {
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

/// IJG quality scaling: q < 50 -> 5000/q percent, else 200 - 2q; floor 1.
inline std::array<int, 64> scaled_table(const std::array<int, 64>& base, int quality) {
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> out{};
  for (int i = 0; i < 64; ++i) out[i] = std::clamp((base[i] * scale + 50) / 100, 1, 255);
  return out;
}

namespace detail {

struct DctBasis {
  std::array<double, 64> c{};  // c[u * 8 + x] = C(u)/2 * cos((2x+1) u pi / 16)
  DctBasis() {
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? std::sqrt(0.5) : 1.0;
      for (int x = 0; x < 8; ++x) c[u * 8 + x] = 0.5 * cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
    }
  }
};

inline const DctBasis& basis() {
  static const DctBasis b;
  return b;
}

inline void forward_dct(const std::array<double, 64>& in, std::array<double, 64>& out) {
  const auto& c = basis().c;
  std::array<double, 64> tmp{};
  for (int y = 0; y < 8; ++y)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += c[u * 8 + x] * in[y * 8 + x];
      tmp[y * 8 + u] = s;
    }
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += c[v * 8 + y] * tmp[y * 8 + u];
      out[v * 8 + u] = s;
    }
}

inline void inverse_dct(const std::array<double, 64>& in, std::array<double, 64>& out) {
  const auto& c = basis().c;
  std::array<double, 64> tmp{};
  for (int v = 0; v < 8; ++v)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += c[u * 8 + x] * in[v * 8 + u];
      tmp[v * 8 + x] = s;
    }
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += c[v * 8 + y] * tmp[v * 8 + x];
      out[y * 8 + x] = s;
    }
}

}  // namespace detail
}  // namespace jpeg

/// Block-DCT JPEG round trip (4:4:4, no entropy coding): JFIF YCbCr,
/// 8x8 quantization with quality-scaled Annex K tables, reconstruction,
/// clamp. The block grid starts at (-offset_y, -offset_x); partial blocks
/// are padded by edge replication.
inline Image jpeg_simulate(const Image& img, int quality, int offset_y = 0, int offset_x = 0) {
  if (quality < 1 || quality > 100) throw ConfigError("JPEG quality must lie in [1,100]", std::to_string(quality));
  const int h = img.height();
  const int w = img.width();
  offset_y = ((offset_y % 8) + 8) % 8;
  offset_x = ((offset_x % 8) + 8) % 8;

  // planes on the 0..255 scale, centred at 0
  std::array<std::vector<double>, 3> planes;
  for (auto& p : planes) p.resize(img.pixel_count());
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double r = 255.0 * img[3 * i], g = 255.0 * img[3 * i + 1], b = 255.0 * img[3 * i + 2];
    planes[0][i] = 0.299 * r + 0.587 * g + 0.114 * b - 128.0;
    planes[1][i] = -0.168735892 * r - 0.331264108 * g + 0.5 * b;
    planes[2][i] = 0.5 * r - 0.418687589 * g - 0.081312411 * b;
  }

  const std::array<std::array<int, 64>, 3> tables = {jpeg::scaled_table(jpeg::kLumaTable, quality),
                                                     jpeg::scaled_table(jpeg::kChromaTable, quality),
                                                     jpeg::scaled_table(jpeg::kChromaTable, quality)};
  std::array<double, 64> block{}, coef{};
  for (int c = 0; c < 3; ++c) {
    std::vector<double>& plane = planes[c];
    const std::vector<double> src = plane;
    for (int by = -offset_y; by < h; by += 8) {
      for (int bx = -offset_x; bx < w; bx += 8) {
        for (int y = 0; y < 8; ++y)
          for (int x = 0; x < 8; ++x) {
            const int yy = std::clamp(by + y, 0, h - 1);
            const int xx = std::clamp(bx + x, 0, w - 1);
            block[y * 8 + x] = src[static_cast<std::size_t>(yy) * w + xx];
          }
        jpeg::detail::forward_dct(block, coef);
        for (int k = 0; k < 64; ++k) {
          const double q = tables[c][k];
          coef[k] = std::round(coef[k] / q) * q;
        }
        jpeg::detail::inverse_dct(coef, block);
        for (int y = 0; y < 8; ++y)
          for (int x = 0; x < 8; ++x) {
            const int yy = by + y, xx = bx + x;
            if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
            plane[static_cast<std::size_t>(yy) * w + xx] = block[y * 8 + x];
          }
      }
    }
  }

  Image out(h, w);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double yv = planes[0][i] + 128.0, cb = planes[1][i], cr = planes[2][i];
    out[3 * i] = clamp01((yv + 1.402 * cr) / 255.0);
    out[3 * i + 1] = clamp01((yv - 0.344136286 * cb - 0.714136286 * cr) / 255.0);
    out[3 * i + 2] = clamp01((yv + 1.772 * cb) / 255.0);
  }
  return out;
}

}  // namespace seamkit
