#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "seamkit/image.hpp"
#include "seamkit/polyfit.hpp"
#include "seamkit/rng.hpp"

namespace seamkit {

/// Per-channel polynomial y_c = sum_d coef[c][d] * (x_c - centering)^d.
struct ToneMap {
  int degree = 1;
  double centering = 0.5;
  std::array<std::vector<double>, 3> coefficients;

  static ToneMap identity(int degree = 1) {
    ToneMap tm;
    tm.degree = degree;
    for (auto& c : tm.coefficients) {
      c.assign(degree + 1, 0.0);
      c[0] = tm.centering;
      if (degree >= 1) c[1] = 1.0;
    }
    return tm;
  }

  void validate() const {
    if (degree < 1) throw ConfigError("tone map degree must be >= 1");
    for (const auto& c : coefficients) {
      if (c.size() != static_cast<std::size_t>(degree + 1))
        throw ShapeError("tone map needs degree+1 coefficients per channel");
      for (double v : c)
        if (!std::isfinite(v)) throw NumericError("tone map coefficient is not finite");
    }
  }

  double eval(int channel, double x) const { return eval_polynomial(coefficients[channel], x, centering); }
};

inline void to_json(nlohmann::json& j, const ToneMap& tm) {
  j = nlohmann::json{{"degree", tm.degree},
                     {"centering", tm.centering},
                     {"coefficients", {tm.coefficients[0], tm.coefficients[1], tm.coefficients[2]}}};
}

inline void from_json(const nlohmann::json& j, ToneMap& tm) {
  tm.degree = j.at("degree").get<int>();
  tm.centering = j.value("centering", 0.5);
  const auto& c = j.at("coefficients");
  if (!c.is_array() || c.size() != 3) throw ShapeError("tone map JSON needs 3 coefficient rows");
  for (int i = 0; i < 3; ++i) tm.coefficients[i] = c[i].get<std::vector<double>>();
  tm.validate();
}

/// Settings of the amplified regression. beta is drawn from [beta_min,
/// beta_max] per fit; equal bounds pin it.
struct AmplifyParams {
  double beta_min = 20.0;
  double beta_max = 40.0;
  int samples_per_side = 4096;
  int degree = 5;

  void validate() const {
    if (!(beta_min > 1.0)) throw PreconditionError("beta must exceed 1", std::to_string(beta_min));
    if (!(beta_min <= beta_max)) throw ConfigError("beta range is empty");
    if (degree < 1) throw ConfigError("degree must be >= 1");
    if (samples_per_side < degree + 1) throw ConfigError("samples per side must be >= degree + 1");
  }

  static AmplifyParams pinned(double beta, int degree = 5, int samples = 4096) {
    return {beta, beta, samples, degree};
  }
};

inline void to_json(nlohmann::json& j, const AmplifyParams& p) {
  j = nlohmann::json{{"beta_min", p.beta_min},
                     {"beta_max", p.beta_max},
                     {"samples_per_side", p.samples_per_side},
                     {"degree", p.degree}};
}

/// y_amp = x_gt + beta * (x_pred - x_gt); deliberately not clamped.
inline Image amplify_target(const Image& x_gt, const Image& x_pred, double beta) {
  require_same_shape(x_gt, x_pred, "amplify_target");
  if (!(beta > 1.0)) throw PreconditionError("beta must exceed 1", std::to_string(beta));
  Image out(x_gt.height(), x_gt.width());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x_gt[i] + beta * (x_pred[i] - x_gt[i]);
  return out;
}

/// Per-channel tone map followed by a clamp to [0,1].
inline Image apply_tonemap(const ToneMap& tm, const Image& img) {
  Image out(img.height(), img.width());
  for (std::size_t i = 0; i < img.pixel_count(); ++i)
    for (int c = 0; c < 3; ++c) out[3 * i + c] = clamp01(tm.eval(c, img[3 * i + c]));
  return out;
}

struct ToneMapFit {
  ToneMap tone_map;
  double beta = 0.0;
  std::vector<std::size_t> samples;  // pixel indices, inside half first
};

namespace detail {

/// K pixel indices from `pool`: without replacement when the pool is large
/// enough, otherwise with replacement.
inline std::vector<std::size_t> draw_indices(const std::vector<std::size_t>& pool, int k, Rng& rng) {
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(k));
  const int n = static_cast<int>(pool.size());
  if (n >= k) {
    std::vector<std::size_t> work = pool;
    for (int i = 0; i < k; ++i) {
      const int j = rng.uniform_int(i, n - 1);
      std::swap(work[i], work[j]);
      out.push_back(work[i]);
    }
  } else {
    for (int i = 0; i < k; ++i) out.push_back(pool[static_cast<std::size_t>(rng.uniform_int(0, n - 1))]);
  }
  return out;
}

}  // namespace detail

/// Fits the discriminative tone map: polynomial regression from x_pred to
/// the amplified target on a balanced inside/outside pixel sample.
/// Pixels with mask >= 0.5 count as inside.
inline ToneMapFit fit_tonemap_detailed(const Image& x_pred, const Image& x_gt, const Mask& mask,
                                       const AmplifyParams& params, Rng& rng) {
  require_same_shape(x_pred, x_gt, "fit_tonemap images");
  require_same_shape(x_pred, mask, "fit_tonemap mask");
  params.validate();

  std::vector<std::size_t> inside, outside;
  for (std::size_t i = 0; i < mask.size(); ++i) (mask[i] >= 0.5 ? inside : outside).push_back(i);
  if (inside.empty() || outside.empty())
    throw PreconditionError("tone map fit needs pixels both inside and outside the mask",
                            "inside=" + std::to_string(inside.size()));

  ToneMapFit fit;
  fit.beta = rng.uniform(params.beta_min, params.beta_max);
  fit.samples = detail::draw_indices(inside, params.samples_per_side, rng);
  const auto out_samples = detail::draw_indices(outside, params.samples_per_side, rng);
  fit.samples.insert(fit.samples.end(), out_samples.begin(), out_samples.end());

  fit.tone_map.degree = params.degree;
  fit.tone_map.centering = 0.5;
  std::vector<double> xs(fit.samples.size()), ys(fit.samples.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < fit.samples.size(); ++k) {
      const std::size_t e = 3 * fit.samples[k] + c;
      xs[k] = x_pred[e];
      ys[k] = x_gt[e] + fit.beta * (x_pred[e] - x_gt[e]);
    }
    fit.tone_map.coefficients[c] = fit_polynomial(xs, ys, params.degree, fit.tone_map.centering);
  }
  return fit;
}

inline ToneMap fit_tonemap(const Image& x_pred, const Image& x_gt, const Mask& mask,
                           const AmplifyParams& params, Rng& rng) {
  return fit_tonemap_detailed(x_pred, x_gt, mask, params, rng).tone_map;
}

namespace detail {

/// Mean |a - b| over all elements, or over pixels with region > 0.
inline double mean_abs_diff(const Image& a, const Image& b, const Mask* region = nullptr) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    if (region && !((*region)[i] > 0.0)) continue;
    for (int c = 0; c < 3; ++c) sum += std::abs(a[3 * i + c] - b[3 * i + c]);
    n += 3;
  }
  if (n == 0) throw PreconditionError("L1 region is empty");
  return sum / static_cast<double>(n);
}

}  // namespace detail

/// L1 distance in the discriminative space: fit a tone map, map both images
/// and average |f(x_pred) - f(x_gt)| over all pixels (or `region` support).
inline double disc_l1(const Image& x_pred, const Image& x_gt, const Mask& mask, const AmplifyParams& params,
                      Rng& rng, const Mask* region = nullptr) {
  const ToneMap tm = fit_tonemap(x_pred, x_gt, mask, params, rng);
  return detail::mean_abs_diff(apply_tonemap(tm, x_pred), apply_tonemap(tm, x_gt), region);
}

struct LossConfig {
  double w1 = 64.0;
  double w2 = 5.0;
  double w3 = 1.0;  // adversarial weight; carried but not evaluated

  void validate() const {
    if (w1 < 0.0 || w2 < 0.0 || w3 < 0.0) throw ConfigError("loss weights must be non-negative");
  }
};

inline void to_json(nlohmann::json& j, const LossConfig& c) {
  j = nlohmann::json{{"w1", c.w1}, {"w2", c.w2}, {"w3", c.w3}};
}

inline void from_json(const nlohmann::json& j, LossConfig& c) {
  c.w1 = j.value("w1", 64.0);
  c.w2 = j.value("w2", 5.0);
  c.w3 = j.value("w3", 1.0);
  c.validate();
}

struct LossReport {
  double pixel_space_l1 = 0.0;
  double disc_space_l1 = 0.0;
  std::optional<double> perceptual;
  double combined = 0.0;
};

/// Pluggable feature extractor standing in for a perceptual network.
using FeatureFn = std::function<std::vector<double>(const Image&)>;

namespace detail {

inline double feature_l1(const FeatureFn& phi, const Image& a, const Image& b) {
  const auto fa = phi(a);
  const auto fb = phi(b);
  if (fa.size() != fb.size() || fa.empty()) throw ShapeError("feature extractor output sizes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) s += std::abs(fa[i] - fb[i]);
  return s / static_cast<double>(fa.size());
}

}  // namespace detail

/// Pixel-space plus discriminative-space objective. Both spaces share the
/// weights; the adversarial terms are outside this library.
inline LossReport combined_loss(const Image& x_pred, const Image& x_gt, const Mask& mask, const LossConfig& cfg,
                                const AmplifyParams& params, Rng& rng, const FeatureFn& feature_fn = {}) {
  cfg.validate();
  require_same_shape(x_pred, x_gt, "combined_loss images");
  const ToneMap tm = fit_tonemap(x_pred, x_gt, mask, params, rng);
  const Image y_pred = apply_tonemap(tm, x_pred);
  const Image y_gt = apply_tonemap(tm, x_gt);

  LossReport r;
  r.pixel_space_l1 = detail::mean_abs_diff(x_pred, x_gt);
  r.disc_space_l1 = detail::mean_abs_diff(y_pred, y_gt);
  double feature_term = 0.0;
  if (feature_fn) {
    feature_term = detail::feature_l1(feature_fn, x_pred, x_gt) + detail::feature_l1(feature_fn, y_pred, y_gt);
    r.perceptual = feature_term;
  }
  r.combined = cfg.w1 * (r.pixel_space_l1 + r.disc_space_l1) + cfg.w2 * feature_term;
  return r;
}

}  // namespace seamkit
