#include <gtest/gtest.h>

#include <cmath>

#include "seamkit/haar.hpp"
#include "support/testing.hpp"

using namespace seamkit;
using seamkit::testing::random_image;

namespace {

// Brute-force coefficient of one Haar band from its 2^l x 2^l pixel block:
// the block sum with quadrant signs, scaled by 2^-l.
double block_coef(const Image& img, int level, int y, int x, int c, int band) {
  const int n = 1 << level, half = n / 2;
  double s = 0.0;
  for (int dy = 0; dy < n; ++dy)
    for (int dx = 0; dx < n; ++dx) {
      const int sy = band == 0 || band == 1 ? 1 : (dy < half ? 1 : -1);
      const int sx = band == 0 || band == 2 ? 1 : (dx < half ? 1 : -1);
      s += sy * sx * img.at(y * n + dy, x * n + dx, c);
    }
  return s / n;
}

}  // namespace

TEST(Haar, PerfectReconstructionAndEnergy) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Image img = random_image(32, 48, rng);
    for (int levels = 1; levels <= 3; ++levels) {
      const HaarPyramid p = haar_forward(img, levels);
      EXPECT_LE(seamkit::testing::max_abs_diff(haar_inverse(p), img), 1e-6);
      double e_img = 0.0, e_coef = 0.0;
      for (double v : img.values()) e_img += v * v;
      for (double v : p.approx.values()) e_coef += v * v;
      for (const auto& l : p.details)
        for (const Image* b : {&l.horizontal, &l.vertical, &l.diagonal})
          for (double v : b->values()) e_coef += v * v;
      EXPECT_NEAR(e_coef, e_img, 1e-4);
    }
  }
}

TEST(Haar, CoefficientsMatchBlockOracle) {
  Rng rng(2);
  const Image img = random_image(16, 16, rng);
  const HaarPyramid p = haar_forward(img, 3);
  for (int l = 1; l <= 3; ++l) {
    const HaarLevel& d = p.details[l - 1];
    for (int y = 0; y < d.horizontal.height(); ++y)
      for (int x = 0; x < d.horizontal.width(); ++x)
        for (int c = 0; c < 3; ++c) {
          EXPECT_NEAR(d.horizontal.at(y, x, c), block_coef(img, l, y, x, c, 1), 1e-12);
          EXPECT_NEAR(d.vertical.at(y, x, c), block_coef(img, l, y, x, c, 2), 1e-12);
          EXPECT_NEAR(d.diagonal.at(y, x, c), block_coef(img, l, y, x, c, 3), 1e-12);
        }
  }
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) EXPECT_NEAR(p.approx.at(y, x, 1), block_coef(img, 3, y, x, 1, 0), 1e-12);
}

TEST(Haar, ConstantHasNoDetail) {
  const HaarPyramid p = haar_forward(Image(16, 16, 0.4), 3);
  for (const auto& l : p.details)
    for (const Image* b : {&l.horizontal, &l.vertical, &l.diagonal})
      for (double v : b->values()) EXPECT_NEAR(v, 0.0, 1e-6);
}

TEST(Haar, DivisibilityChecked) {
  EXPECT_THROW(haar_forward(Image(12, 16), 3), ShapeError);
  EXPECT_NO_THROW(haar_forward(Image(12, 16), 2));
}

TEST(HaarWeightedL1, IdentityAndUnitWeights) {
  Rng rng(3);
  const Image a = random_image(16, 16, rng), b = random_image(16, 16, rng);
  EXPECT_EQ(haar_weighted_l1(a, a, 4.0, 1.0, 2), 0.0);
  const HaarPyramid pa = haar_forward(a, 2), pb = haar_forward(b, 2);
  double s = 0.0;
  for (std::size_t i = 0; i < pa.approx.size(); ++i) s += std::abs(pa.approx[i] - pb.approx[i]);
  for (int l = 0; l < 2; ++l) {
    const auto& x = pa.details[l];
    const auto& y = pb.details[l];
    for (std::size_t i = 0; i < x.horizontal.size(); ++i)
      s += std::abs(x.horizontal[i] - y.horizontal[i]) + std::abs(x.vertical[i] - y.vertical[i]) +
           std::abs(x.diagonal[i] - y.diagonal[i]);
  }
  EXPECT_NEAR(haar_weighted_l1(a, b, 1.0, 1.0, 2), s / a.size(), 1e-12);
  EXPECT_THROW(haar_weighted_l1(a, b, 1.0, 2.0, 2), ConfigError);
}

TEST(HaarWeightedL1, ConstantOffsetMatchesPyramidDifferencing) {
  Rng rng(4);
  const Image a = random_image(32, 32, rng);
  const double c = 0.05;
  Image b = a;
  for (double& v : b.values()) v += c;
  for (int levels = 1; levels <= 3; ++levels) {
    // every approximation coefficient differs by 2^levels * c, details by 0
    const int n = 1 << levels;
    double low = 0.0;
    for (int y = 0; y < 32 / n; ++y)
      for (int x = 0; x < 32 / n; ++x)
        for (int ch = 0; ch < 3; ++ch) {
          const double d = block_coef(b, levels, y, x, ch, 0) - block_coef(a, levels, y, x, ch, 0);
          EXPECT_NEAR(d, n * c, 1e-12);
          low += std::abs(d);
        }
    EXPECT_NEAR(haar_weighted_l1(b, a, 3.0, 1.0, levels), 3.0 * low / a.size(), 1e-12);
    EXPECT_NEAR(haar_weighted_l1(b, a, 3.0, 1.0, levels), 3.0 * c / n, 1e-12);
  }
}
