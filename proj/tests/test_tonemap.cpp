#include <gtest/gtest.h>

#include <cmath>

#include "seamkit/tonemap.hpp"
#include "support/testing.hpp"

using namespace seamkit;
using seamkit::testing::box_mask;
using seamkit::testing::random_image;

namespace {

// gt constant 0.5; pred 0.52 inside a centred box, 0.5 outside.
struct TwoLevel {
  Image gt{32, 32, 0.5};
  Image pred{32, 32, 0.5};
  Mask mask = box_mask(32, 32, 8, 8, 24, 24);
  TwoLevel() {
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i] == 1.0)
        for (int c = 0; c < 3; ++c) pred[3 * i + c] = 0.52;
  }
};

// Smooth gt with a small variation so inside and outside values separate.
Image smooth_gray(int h, int w, double amp) {
  Image gt(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        gt.at(y, x, c) = 0.5 + amp * std::sin(2 * std::numbers::pi * x / w + c) * std::cos(2 * std::numbers::pi * y / h);
  return gt;
}

Image shifted(const Image& gt, const Mask& m, double delta) {
  Image out = gt;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] == 1.0)
      for (int c = 0; c < 3; ++c) out[3 * i + c] += delta;
  return out;
}

}  // namespace

TEST(AmplifyTarget, Examples) {
  Rng rng(1);
  const Image gt = random_image(5, 5, rng);
  EXPECT_EQ(amplify_target(gt, gt, 20.0), gt);
  const Image y = amplify_target(Image(2, 2, 0.5), Image(2, 2, 0.52), 20.0);
  for (double v : y.values()) EXPECT_NEAR(v, 0.9, 1e-12);
  EXPECT_THROW(amplify_target(gt, gt, 1.0), PreconditionError);
  EXPECT_THROW(amplify_target(gt, Image(5, 4), 20.0), ShapeError);
}

TEST(AmplifyTarget, NotClamped) {
  const Image y = amplify_target(Image(1, 1, 0.5), Image(1, 1, 0.6), 20.0);
  EXPECT_NEAR(y[0], 2.5, 1e-12);
}

TEST(FitTonemap, IdentityDataReproducesInput) {
  Rng rng(2);
  const Image img = random_image(24, 24, rng);
  const Mask m = box_mask(24, 24, 4, 4, 16, 16);
  for (int degree : {1, 3, 5}) {
    Rng r(10);
    const ToneMap tm = fit_tonemap(img, img, m, {20, 40, 4096, degree}, r);
    EXPECT_LE(seamkit::testing::max_abs_diff(apply_tonemap(tm, img), clamped(img)), 1e-5) << "degree " << degree;
  }
}

TEST(FitTonemap, TwoPointInstanceMatchesHandSolution) {
  const TwoLevel t;
  Rng rng(3);
  const ToneMap tm = fit_tonemap(t.pred, t.gt, t.mask, AmplifyParams::pinned(20.0), rng);
  // Two distinct inputs, two targets: the minimal-norm fit interpolates both.
  for (int c = 0; c < 3; ++c) {
    EXPECT_NEAR(tm.eval(c, 0.5), 0.5, 1e-8);
    EXPECT_NEAR(tm.eval(c, 0.52), 0.9, 1e-8);
  }
  // minimal-norm coefficients in the centred basis: 0.5 + sum_d p_d 0.02^d = 0.9
  // with p proportional to (0.02, 0.02^2, ...)
  double s = 0.0;
  for (int d = 1; d <= 5; ++d) s += std::pow(0.02, 2 * d);
  for (int d = 1; d <= 5; ++d) EXPECT_NEAR(tm.coefficients[0][d], 0.4 * std::pow(0.02, d) / s, 1e-4 * std::abs(0.4 * std::pow(0.02, d) / s) + 1e-9);
  EXPECT_NEAR(tm.coefficients[0][0], 0.5, 1e-8);
}

TEST(FitTonemap, TwoPointInstanceDiscRatioIsBeta) {
  const TwoLevel t;
  Rng r1(4), r2(4);
  const double masked = disc_l1(t.pred, t.gt, t.mask, AmplifyParams::pinned(20.0), r1, &t.mask);
  EXPECT_NEAR(masked, 0.4, 1e-7);
  const double full = disc_l1(t.pred, t.gt, t.mask, AmplifyParams::pinned(20.0), r2);
  EXPECT_NEAR(full / detail::mean_abs_diff(t.pred, t.gt), 20.0, 1e-5);
}

TEST(FitTonemap, PseudoinverseMatchesNormalEquations) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int degree = 1 + trial % 5;
    std::vector<double> xs(50), ys(50);
    for (auto& x : xs) x = rng.canonical();
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = std::sin(3 * xs[i]) + rng.normal(0.0, 0.05);
    const auto p = fit_polynomial(xs, ys, degree, 0.5);
    const auto q = seamkit::testing::normal_equations_fit(xs, ys, degree, 0.5);
    for (double x : xs)
      EXPECT_NEAR(eval_polynomial(p, x, 0.5), seamkit::testing::eval_poly_direct(q, x, 0.5), 1e-6);
  }
}

TEST(FitTonemap, ResidualMonotoneInDegree) {
  Rng rng(6);
  std::vector<double> xs(80), ys(80);
  for (auto& x : xs) x = rng.canonical();
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = std::exp(xs[i]) * std::cos(5 * xs[i]);
  double prev = INFINITY;
  for (int d = 1; d <= 7; ++d) {
    const auto p = fit_polynomial(xs, ys, d, 0.5);
    double r = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) r += std::pow(eval_polynomial(p, xs[i], 0.5) - ys[i], 2);
    EXPECT_LE(r, prev + 1e-12);
    prev = r;
  }
}

TEST(FitTonemap, DegenerateMaskRejected) {
  Rng rng(7);
  const Image img = random_image(8, 8, rng);
  EXPECT_THROW(fit_tonemap(img, img, Mask(8, 8, 0.0), {}, rng), PreconditionError);
  EXPECT_THROW(fit_tonemap(img, img, Mask(8, 8, 1.0), {}, rng), PreconditionError);
  EXPECT_THROW(fit_tonemap(img, img, Mask(8, 8, 1.0), AmplifyParams::pinned(1.0), rng), PreconditionError);
}

TEST(FitTonemap, SmallSidesSampleWithReplacement) {
  Rng rng(8);
  const Image img = random_image(8, 8, rng);
  Mask m(8, 8);
  m.at(3, 3) = 1.0;
  Rng r(1);
  const ToneMapFit fit = fit_tonemap_detailed(img, img, m, {20, 40, 64, 3}, r);
  ASSERT_EQ(fit.samples.size(), 128u);
  for (int k = 0; k < 64; ++k) EXPECT_EQ(fit.samples[k], 3u * 8 + 3);
  EXPECT_GE(fit.beta, 20.0);
  EXPECT_LE(fit.beta, 40.0);
}

TEST(FitTonemap, Deterministic) {
  Rng rng(9);
  const Image a = random_image(16, 16, rng), b = random_image(16, 16, rng);
  const Mask m = box_mask(16, 16, 2, 2, 10, 10);
  Rng r1(5, 2), r2(5, 2);
  const ToneMap t1 = fit_tonemap(a, b, m, {}, r1), t2 = fit_tonemap(a, b, m, {}, r2);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(t1.coefficients[c], t2.coefficients[c]);
}

TEST(ApplyTonemap, IdentityAndConstant) {
  Image img(4, 4);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = -0.2 + 1.4 * static_cast<double>(i) / img.size();
  EXPECT_LE(seamkit::testing::max_abs_diff(apply_tonemap(ToneMap::identity(3), img), clamped(img)), 1e-15);
  ToneMap k;
  k.degree = 2;
  k.centering = 0.0;
  for (auto& c : k.coefficients) c = {0.3, 0.0, 0.0};
  const Image out = apply_tonemap(k, img);
  for (double v : out.values()) EXPECT_DOUBLE_EQ(v, 0.3);
}

TEST(ToneMapJson, RoundTrip) {
  Rng rng(10);
  const Image a = random_image(12, 12, rng), b = random_image(12, 12, rng);
  Rng r(1);
  const ToneMap tm = fit_tonemap(a, b, box_mask(12, 12, 0, 0, 6, 12), {}, r);
  const ToneMap back = nlohmann::json(tm).get<ToneMap>();
  EXPECT_EQ(back.degree, tm.degree);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(back.coefficients[c], tm.coefficients[c]);
  EXPECT_THROW(nlohmann::json::parse(R"({"degree":2,"coefficients":[[0,1],[0,1,0],[0,1,0]]})").get<ToneMap>(),
               ShapeError);
}

TEST(DiscL1, IdentityIsZero) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Image gt = seamkit::testing::synth_photo(32, 32, seed);
    Rng r(seed);
    EXPECT_NEAR(disc_l1(gt, gt, box_mask(32, 32, 8, 8, 20, 24), {}, r), 0.0, 1e-6);
  }
}

TEST(DiscL1, AmplifiesUniformShiftOnSmoothGt) {
  const Image gt = smooth_gray(64, 64, 0.004);
  const Mask m = box_mask(64, 64, 16, 16, 48, 48);
  const Image pred = shifted(gt, m, 0.02);
  Rng r1(1), r2(1);
  const double disc_masked = disc_l1(pred, gt, m, AmplifyParams::pinned(20.0), r1, &m);
  EXPECT_GE(disc_masked, 10.0 * detail::mean_abs_diff(pred, gt, &m));
  EXPECT_GE(disc_l1(pred, gt, m, AmplifyParams::pinned(20.0), r2), 10.0 * detail::mean_abs_diff(pred, gt));
}

TEST(DiscL1, MonotoneInShift) {
  const Image gt = smooth_gray(64, 64, 0.004);
  const Mask m = box_mask(64, 64, 16, 16, 48, 48);
  double prev = 0.0;
  for (double delta : {0.005, 0.01, 0.02}) {
    Rng r(3);
    const double d = disc_l1(shifted(gt, m, delta), gt, m, AmplifyParams::pinned(20.0), r);
    EXPECT_GT(d, prev);
    prev = d;
  }
}

TEST(DiscL1, NeverDeAmplifiesSeparableShift) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const double delta = rng.uniform(0.01, 0.04), amp = rng.uniform(0.0, 0.003);
    const Image gt = smooth_gray(32, 32, amp);
    const Mask m = box_mask(32, 32, 8, 8, 24, 24);
    const Image pred = shifted(gt, m, delta);
    Rng r(seed);
    EXPECT_GE(disc_l1(pred, gt, m, {}, r), detail::mean_abs_diff(pred, gt)) << "seed " << seed;
  }
}

TEST(CombinedLoss, IdentityAllZero) {
  const Image gt = seamkit::testing::synth_photo(32, 32, 4);
  Rng r(1);
  const FeatureFn phi = [](const Image& img) { return std::vector<double>(img.values().begin(), img.values().end()); };
  const LossReport rep = combined_loss(gt, gt, box_mask(32, 32, 4, 4, 12, 12), {}, {}, r, phi);
  EXPECT_EQ(rep.pixel_space_l1, 0.0);
  EXPECT_NEAR(rep.disc_space_l1, 0.0, 1e-6);
  ASSERT_TRUE(rep.perceptual.has_value());
  EXPECT_NEAR(*rep.perceptual, 0.0, 1e-6);
  EXPECT_NEAR(rep.combined, 0.0, 1e-4);
}

TEST(CombinedLoss, DefaultWeightsAndLinearity) {
  const LossConfig defaults = nlohmann::json::object().get<LossConfig>();
  EXPECT_EQ(defaults.w1, 64.0);
  EXPECT_EQ(defaults.w2, 5.0);
  EXPECT_EQ(defaults.w3, 1.0);
  const TwoLevel t;
  Rng r1(2), r2(2);
  LossConfig doubled;
  doubled.w1 = 128.0;
  const LossReport a = combined_loss(t.pred, t.gt, t.mask, {}, AmplifyParams::pinned(20.0), r1);
  const LossReport b = combined_loss(t.pred, t.gt, t.mask, doubled, AmplifyParams::pinned(20.0), r2);
  EXPECT_FALSE(a.perceptual.has_value());
  EXPECT_NEAR(b.combined, 2.0 * a.combined, 1e-9);
  EXPECT_NEAR(a.combined, 64.0 * (a.pixel_space_l1 + a.disc_space_l1), 1e-12);
  EXPECT_THROW(combined_loss(t.pred, t.gt, t.mask, {-1.0, 5.0, 1.0}, {}, r1), ConfigError);
}
