#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seamkit/error.hpp"

namespace seamkit {

/// Interleaved row-major floating-point raster with a fixed channel count.
/// Nominal range is [0,1]; intermediate results may leave it until clamped.
template <int Channels>
class Raster {
  static_assert(Channels >= 1);

 public:
  static constexpr int channels = Channels;

  Raster() = default;

  Raster(int height, int width, double fill = 0.0) : height_(height), width_(width) {
    if (height < 1 || width < 1)
      throw ShapeError("raster dimensions must be positive",
                       std::to_string(height) + "x" + std::to_string(width));
    data_.assign(static_cast<std::size_t>(height) * width * Channels, fill);
  }

  Raster(int height, int width, std::vector<double> data) : Raster(height, width) {
    if (data.size() != data_.size())
      throw ShapeError("raster data length does not match dimensions",
                       std::to_string(data.size()) + " != " + std::to_string(data_.size()));
    data_ = std::move(data);
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(height_) * width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t index(int y, int x, int c = 0) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * Channels + c;
  }

  double& at(int y, int x, int c = 0) noexcept { return data_[index(y, x, c)]; }
  double at(int y, int x, int c = 0) const noexcept { return data_[index(y, x, c)]; }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<double> values() & noexcept { return data_; }
  std::span<const double> values() const& noexcept { return data_; }
  std::span<const double> values() && = delete;

  template <int Other>
  bool same_shape(const Raster<Other>& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  bool operator==(const Raster& other) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

using Image = Raster<3>;
using Mask = Raster<1>;

template <int A, int B>
void require_same_shape(const Raster<A>& a, const Raster<B>& b, const char* what) {
  if (!a.same_shape(b))
    throw ShapeError(std::string("dimension mismatch: ") + what,
                     std::to_string(a.height()) + "x" + std::to_string(a.width()) + " vs " +
                         std::to_string(b.height()) + "x" + std::to_string(b.width()));
}

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

template <int C>
Raster<C> clamped(Raster<C> r) {
  for (double& v : r.values()) v = clamp01(v);
  return r;
}

inline bool is_binary(const Mask& m) {
  return std::all_of(m.values().begin(), m.values().end(),
                     [](double v) { return v == 0.0 || v == 1.0; });
}

inline void require_binary(const Mask& m, const char* what) {
  if (!is_binary(m)) throw PreconditionError(std::string("mask must be binary: ") + what);
}

/// Number of pixels with weight > 0.
inline std::size_t support_size(const Mask& m) {
  return static_cast<std::size_t>(
      std::count_if(m.values().begin(), m.values().end(), [](double v) { return v > 0.0; }));
}

inline double mean(const Mask& m) {
  double s = 0.0;
  for (double v : m.values()) s += v;
  return s / static_cast<double>(m.size());
}

/// Binary mask of pixels whose weight exceeds `threshold`.
inline Mask binarize(const Mask& m, double threshold = 0.0) {
  Mask out(m.height(), m.width());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] > threshold ? 1.0 : 0.0;
  return out;
}

inline Mask invert(const Mask& m) {
  Mask out(m.height(), m.width());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = 1.0 - m[i];
  return out;
}

/// out = alpha * a + (1 - alpha) * b per channel. alpha of exactly 0 or 1
/// copies the corresponding input bit-exactly.
inline Image alpha_blend(const Image& a, const Image& b, const Mask& alpha) {
  require_same_shape(a, b, "alpha_blend inputs");
  require_same_shape(a, alpha, "alpha_blend alpha");
  Image out = b;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      const double w = alpha.at(y, x);
      if (w == 0.0) continue;
      for (int c = 0; c < 3; ++c) {
        // b + w (a - b) keeps equal inputs bit-exact
        out.at(y, x, c) = w == 1.0 ? a.at(y, x, c) : b.at(y, x, c) + w * (a.at(y, x, c) - b.at(y, x, c));
      }
    }
  }
  return out;
}

/// Restores the unmasked region from `ori`; generated pixels survive only
/// inside the binary mask.
inline Image paste_back(const Image& gen, const Image& ori, const Mask& mask) {
  require_same_shape(gen, ori, "paste_back images");
  require_same_shape(gen, mask, "paste_back mask");
  require_binary(mask, "paste_back");
  return alpha_blend(gen, ori, mask);
}

}  // namespace seamkit
