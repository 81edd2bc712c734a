#pragma once

#include <png.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "seamkit/image.hpp"

namespace seamkit {

namespace detail {

inline std::vector<unsigned char> read_png(const std::string& path, int format, int& height, int& width) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw IoError(std::string("cannot read PNG: ") + image.message, path);
  image.format = static_cast<png_uint_32>(format);
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError(std::string("cannot decode PNG: ") + image.message, path);
  }
  height = static_cast<int>(image.height);
  width = static_cast<int>(image.width);
  return buf;
}

inline void write_png(const std::string& path, int format, int height, int width,
                      const std::vector<unsigned char>& buf) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = static_cast<png_uint_32>(format);
  if (!png_image_write_to_file(&image, path.c_str(), 0, buf.data(), 0, nullptr))
    throw IoError(std::string("cannot write PNG: ") + image.message, path);
}

inline unsigned char to_byte(double v) {
  return static_cast<unsigned char>(std::lround(clamp01(v) * 255.0));
}

}  // namespace detail

/// 8-bit RGB or RGBA PNG; alpha is dropped, values map by v/255.
inline Image load_image(const std::string& path) {
  int h = 0, w = 0;
  const auto buf = detail::read_png(path, PNG_FORMAT_RGBA, h, w);
  Image img(h, w);
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
    for (int c = 0; c < 3; ++c) img[3 * i + c] = buf[4 * i + c] / 255.0;
  return img;
}

inline void save_image(const std::string& path, const Image& img) {
  std::vector<unsigned char> buf(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) buf[i] = detail::to_byte(img[i]);
  detail::write_png(path, PNG_FORMAT_RGB, img.height(), img.width(), buf);
}

/// Grayscale PNG thresholded at 128 into a binary mask.
inline Mask load_mask(const std::string& path) {
  int h = 0, w = 0;
  const auto buf = detail::read_png(path, PNG_FORMAT_GRAY, h, w);
  Mask m(h, w);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = buf[i] >= 128 ? 1.0 : 0.0;
  return m;
}

inline void save_mask(const std::string& path, const Mask& mask) {
  std::vector<unsigned char> buf(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) buf[i] = detail::to_byte(mask[i]);
  detail::write_png(path, PNG_FORMAT_GRAY, mask.height(), mask.width(), buf);
}

}  // namespace seamkit
