#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seamkit/color_shift.hpp"
#include "seamkit/filter.hpp"
#include "seamkit/image.hpp"
#include "seamkit/jpeg.hpp"
#include "seamkit/morphology.hpp"
#include "seamkit/pblend.hpp"
#include "seamkit/rng.hpp"

namespace seamkit {

/// Artifact families in pipeline order of their gate draws.
enum class Family { ContentDiscontinuity, BackgroundColor, ForegroundColor, BoundaryMixing, NoiseJpegBlur, Codec };

inline constexpr std::array<Family, 6> kFamilies = {Family::ContentDiscontinuity, Family::BackgroundColor,
                                                    Family::ForegroundColor,      Family::BoundaryMixing,
                                                    Family::NoiseJpegBlur,        Family::Codec};

inline const char* family_tag(Family f) {
  switch (f) {
    case Family::ContentDiscontinuity: return "content_discontinuity";
    case Family::BackgroundColor: return "background_color_aug";
    case Family::ForegroundColor: return "foreground_color_aug";
    case Family::BoundaryMixing: return "boundary_mixing";
    case Family::NoiseJpegBlur: return "noise_jpeg_blur";
    case Family::Codec: return "codec_artifacts";
  }
  return "";
}

struct FamilyProbabilities {
  double content_discontinuity = 0.5;
  double background_color_aug = 0.8;
  double foreground_color_aug = 0.8;
  double boundary_mixing = 1.0;
  double noise_jpeg_blur = 0.5;
  double codec_artifacts = 0.5;

  double of(Family f) const {
    switch (f) {
      case Family::ContentDiscontinuity: return content_discontinuity;
      case Family::BackgroundColor: return background_color_aug;
      case Family::ForegroundColor: return foreground_color_aug;
      case Family::BoundaryMixing: return boundary_mixing;
      case Family::NoiseJpegBlur: return noise_jpeg_blur;
      case Family::Codec: return codec_artifacts;
    }
    return 0.0;
  }

  static FamilyProbabilities none() { return {0, 0, 0, 0, 0, 0}; }
};

/// Probabilities and parameter ranges for every degradation.
struct SimConfig {
  int version = 1;
  FamilyProbabilities probabilities;
  // each of noise / JPEG / blur fires with this conditional probability once
  // the family is selected; if none fires, one is picked uniformly
  double subop_probability = 0.5;
  ColorShiftParams color_shift;
  IntRange jpeg_quality{30, 90};
  Range blur_sigma{0.5, 2.0};
  Range noise_sigma{0.005, 0.03};
  Range codec_strength{0.2, 1.0};
  IntRange band_width{2, 6};
  IntRange morph_radius{1, 8};
  Range mask_blur_sigma{0.0, 4.0};
  double hard_boundary_probability = 0.3;
  SolverParams solver{1e-6, 10000, SolverMethod::ConjugateGradient};

  void validate() const {
    for (Family f : kFamilies) {
      const double p = probabilities.of(f);
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string("probability out of [0,1]: ") + family_tag(f));
    }
    if (!(subop_probability >= 0.0 && subop_probability <= 1.0)) throw ConfigError("subop_probability out of [0,1]");
    if (!(hard_boundary_probability >= 0.0 && hard_boundary_probability <= 1.0))
      throw ConfigError("hard_boundary_probability out of [0,1]");
    color_shift.validate();
    jpeg_quality.validate("jpeg_quality");
    if (jpeg_quality.lo < 1 || jpeg_quality.hi > 100) throw ConfigError("jpeg_quality must lie in [1,100]");
    blur_sigma.validate("blur_sigma");
    noise_sigma.validate("noise_sigma");
    codec_strength.validate("codec_strength");
    if (codec_strength.lo < 0.0 || codec_strength.hi > 1.0) throw ConfigError("codec_strength must lie in [0,1]");
    band_width.validate("band_width");
    if (band_width.lo < 1) throw ConfigError("band_width must be >= 1");
    morph_radius.validate("morph_radius");
    if (morph_radius.lo < 0) throw ConfigError("morph_radius must be >= 0");
    mask_blur_sigma.validate("mask_blur_sigma");
    if (blur_sigma.lo < 0.0 || noise_sigma.lo < 0.0 || mask_blur_sigma.lo < 0.0)
      throw ConfigError("sigmas must be non-negative");
    solver.validate();
  }

  /// Distance beyond the original mask support at which degraded and
  /// target are guaranteed identical.
  int guard_radius() const {
    return morph_radius.hi + static_cast<int>(std::ceil(3.0 * mask_blur_sigma.hi));
  }
};

inline void to_json(nlohmann::json& j, const Range& r) { j = nlohmann::json::array({r.lo, r.hi}); }
inline void from_json(const nlohmann::json& j, Range& r) {
  r.lo = j.at(0).get<double>();
  r.hi = j.at(1).get<double>();
}
inline void to_json(nlohmann::json& j, const IntRange& r) { j = nlohmann::json::array({r.lo, r.hi}); }
inline void from_json(const nlohmann::json& j, IntRange& r) {
  r.lo = j.at(0).get<int>();
  r.hi = j.at(1).get<int>();
}

inline void to_json(nlohmann::json& j, const JitterParams& p) {
  j = nlohmann::json{{"brightness", p.brightness},
                     {"contrast", p.contrast},
                     {"saturation", p.saturation},
                     {"hue_degrees", p.hue_degrees}};
}
inline void from_json(const nlohmann::json& j, JitterParams& p) {
  const JitterParams d;
  p.brightness = j.value("brightness", d.brightness);
  p.contrast = j.value("contrast", d.contrast);
  p.saturation = j.value("saturation", d.saturation);
  p.hue_degrees = j.value("hue_degrees", d.hue_degrees);
}

inline void to_json(nlohmann::json& j, const SimConfig& c) {
  const auto& p = c.probabilities;
  j = nlohmann::json{
      {"version", c.version},
      {"probabilities",
       {{"content_discontinuity", p.content_discontinuity},
        {"background_color_aug", p.background_color_aug},
        {"foreground_color_aug", p.foreground_color_aug},
        {"boundary_mixing", p.boundary_mixing},
        {"noise_jpeg_blur", p.noise_jpeg_blur},
        {"codec_artifacts", p.codec_artifacts}}},
      {"subop_probability", c.subop_probability},
      {"jitter", c.color_shift.jitter},
      {"blob_count", c.color_shift.blob_count},
      {"blob_axis_fraction", c.color_shift.blob_axis_fraction},
      {"uniform_ratio", c.color_shift.uniform_ratio},
      {"jpeg_quality", c.jpeg_quality},
      {"blur_sigma", c.blur_sigma},
      {"noise_sigma", c.noise_sigma},
      {"codec_strength", c.codec_strength},
      {"band_width", c.band_width},
      {"morph_radius", c.morph_radius},
      {"mask_blur_sigma", c.mask_blur_sigma},
      {"hard_boundary_probability", c.hard_boundary_probability},
      {"solver", {{"tolerance", c.solver.tolerance}, {"max_iterations", c.solver.max_iterations}}}};
}

/// Missing keys keep their defaults, so a config file may override a subset.
inline void from_json(const nlohmann::json& j, SimConfig& c) {
  const SimConfig d;
  c.version = j.value("version", d.version);
  if (c.version != 1) throw ConfigError("unsupported SimConfig version", std::to_string(c.version));
  if (j.contains("probabilities")) {
    const auto& p = j.at("probabilities");
    auto& o = c.probabilities;
    o.content_discontinuity = p.value("content_discontinuity", d.probabilities.content_discontinuity);
    o.background_color_aug = p.value("background_color_aug", d.probabilities.background_color_aug);
    o.foreground_color_aug = p.value("foreground_color_aug", d.probabilities.foreground_color_aug);
    o.boundary_mixing = p.value("boundary_mixing", d.probabilities.boundary_mixing);
    o.noise_jpeg_blur = p.value("noise_jpeg_blur", d.probabilities.noise_jpeg_blur);
    o.codec_artifacts = p.value("codec_artifacts", d.probabilities.codec_artifacts);
  }
  c.subop_probability = j.value("subop_probability", d.subop_probability);
  c.color_shift.jitter = j.value("jitter", d.color_shift.jitter);
  c.color_shift.blob_count = j.value("blob_count", d.color_shift.blob_count);
  c.color_shift.blob_axis_fraction = j.value("blob_axis_fraction", d.color_shift.blob_axis_fraction);
  c.color_shift.uniform_ratio = j.value("uniform_ratio", d.color_shift.uniform_ratio);
  c.jpeg_quality = j.value("jpeg_quality", d.jpeg_quality);
  c.blur_sigma = j.value("blur_sigma", d.blur_sigma);
  c.noise_sigma = j.value("noise_sigma", d.noise_sigma);
  c.codec_strength = j.value("codec_strength", d.codec_strength);
  c.band_width = j.value("band_width", d.band_width);
  c.morph_radius = j.value("morph_radius", d.morph_radius);
  c.mask_blur_sigma = j.value("mask_blur_sigma", d.mask_blur_sigma);
  c.hard_boundary_probability = j.value("hard_boundary_probability", d.hard_boundary_probability);
  if (j.contains("solver")) {
    c.solver.tolerance = j["solver"].value("tolerance", d.solver.tolerance);
    c.solver.max_iterations = j["solver"].value("max_iterations", d.solver.max_iterations);
  }
  c.validate();
}

/// Stand-in for a latent autoencoder round trip: JPEG at a quality falling
/// from 90 to 30 with strength, then blur rising from 0 to 1.5 px. The rng
/// picks the block-grid phase.
inline Image codec_stand_in(const Image& img, double strength, Rng& rng) {
  if (!(strength >= 0.0 && strength <= 1.0)) throw ConfigError("codec strength must lie in [0,1]");
  const int quality = static_cast<int>(std::lround(90.0 + (30.0 - 90.0) * strength));
  const double sigma = 1.5 * strength;
  const int oy = rng.uniform_int(0, 7);
  const int ox = rng.uniform_int(0, 7);
  return gaussian_blur(jpeg_simulate(img, quality, oy, ox), sigma);
}

/// Externally computed reconstruction passes through after a shape check.
inline Image codec_stand_in(const Image& img, const Image& external) {
  require_same_shape(img, external, "external codec reconstruction");
  return external;
}

/// Band of half-width `band_width` straddling the mask edge.
inline Mask boundary_band(const Mask& mask, int band_width) {
  const Mask outer = dilate(mask, band_width);
  const Mask inner = erode(mask, band_width);
  Mask band(mask.height(), mask.width());
  for (std::size_t i = 0; i < band.size(); ++i) band[i] = (outer[i] == 1.0 && inner[i] == 0.0) ? 1.0 : 0.0;
  return band;
}

/// Re-synthesizes the band around the mask edge by harmonic fill, then
/// restores every pixel outside the mask, leaving a seam at the boundary.
inline Image content_discontinuity(const Image& img, const Mask& mask, int band_width,
                                   const SolverParams& solver = {}) {
  require_same_shape(img, mask, "content_discontinuity mask");
  require_binary(mask, "content_discontinuity");
  if (band_width < 1) throw ConfigError("band_width must be >= 1");
  const Mask band = boundary_band(mask, band_width);
  if (support_size(band) == 0) return img;
  return paste_back(harmonic_fill(img, band, solver), img, mask);
}

struct BoundaryMixChoice {
  bool dilate = true;
  int radius = 0;
  double sigma = 0.0;
};

/// Dilates or erodes, then softens. The softened mask is cut to the disk of
/// radius ceil(3 sigma) around the moved support; the separable kernel's
/// square footprint would otherwise reach sqrt(2) further along diagonals.
inline Mask boundary_mix(const Mask& mask, const BoundaryMixChoice& choice) {
  require_binary(mask, "boundary_mix");
  const Mask moved = choice.dilate ? dilate(mask, choice.radius) : erode(mask, choice.radius);
  Mask soft = soften_mask(moved, choice.sigma);
  const Mask reach = dilate(moved, static_cast<int>(std::ceil(3.0 * choice.sigma)));
  for (std::size_t i = 0; i < soft.size(); ++i)
    if (reach[i] == 0.0) soft[i] = 0.0;
  return soft;
}

inline BoundaryMixChoice sample_boundary_mix(const SimConfig& cfg, Rng& rng) {
  BoundaryMixChoice c;
  c.dilate = rng.bernoulli(0.5);
  c.radius = rng.uniform_int(cfg.morph_radius);
  c.sigma = rng.bernoulli(cfg.hard_boundary_probability) ? 0.0 : rng.uniform(cfg.mask_blur_sigma);
  return c;
}

inline Mask boundary_mix(const Mask& mask, const SimConfig& cfg, Rng& rng) {
  return boundary_mix(mask, sample_boundary_mix(cfg, rng));
}

struct SimPair {
  Image degraded;
  Image target;
  Mask mask;
  std::vector<std::string> applied;
  nlohmann::json params = nlohmann::json::object();
};

namespace detail {

inline nlohmann::json to_json(const JitterFactors& f) {
  return {{"brightness", f.brightness}, {"contrast", f.contrast}, {"saturation", f.saturation}, {"hue_degrees", f.hue_degrees}};
}

enum class Scheme { Gradient, Blobs, Uniform };

/// Draws a scheme's parameters, records them and returns the jitter weight.
inline Mask sample_scheme_weight(Scheme s, int h, int w, const ColorShiftParams& p, Rng& rng, nlohmann::json& rec) {
  switch (s) {
    case Scheme::Gradient: {
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      rec["scheme"] = "linear_gradient";
      rec["angle"] = angle;
      return linear_gradient_weight(h, w, angle);
    }
    case Scheme::Blobs: {
      const auto blobs = sample_blobs(h, w, p, rng);
      rec["scheme"] = "blobs";
      rec["blobs"] = nlohmann::json::array();
      for (const auto& e : blobs) rec["blobs"].push_back({e.cy, e.cx, e.ry, e.rx, e.angle});
      return blob_weight_map(h, w, blobs);
    }
    case Scheme::Uniform:
      rec["scheme"] = "uniform";
      rec["ratio"] = p.uniform_ratio;
      return Mask(h, w, p.uniform_ratio);
  }
  return Mask(h, w);
}

}  // namespace detail

/// Builds a (degraded, target) pair from a clean image and a binary edit
/// mask. Context degradations (background color, JPEG) reach both images;
/// edit degradations reach the degraded image inside the mask only. The
/// final composite uses the boundary-mixed mask, so degraded == target
/// wherever that mask is 0.
inline SimPair simulate(const Image& clean, const Mask& mask, const SimConfig& cfg, Rng& rng,
                        const std::optional<Image>& external_codec = std::nullopt) {
  cfg.validate();
  require_same_shape(clean, mask, "simulate mask");
  require_binary(mask, "simulate");
  const std::size_t inside = support_size(mask);
  if (inside == 0 || inside == mask.size()) throw PreconditionError("simulate needs a non-trivial mask");

  const int h = clean.height();
  const int w = clean.width();
  const Mask full(h, w, 1.0);

  Rng gate = rng.child(0);
  std::array<bool, 6> on{};
  for (std::size_t i = 0; i < kFamilies.size(); ++i) on[i] = gate.bernoulli(cfg.probabilities.of(kFamilies[i]));
  auto enabled = [&](Family f) { return on[static_cast<std::size_t>(f)]; };

  SimPair out;
  out.params["seed"] = rng.seed();
  out.params["stream"] = rng.stream();
  auto mark = [&](Family f, nlohmann::json rec) {
    out.applied.emplace_back(family_tag(f));
    out.params[family_tag(f)] = std::move(rec);
  };

  Image target = clean;
  Image degraded = clean;

  if (enabled(Family::BackgroundColor)) {
    Rng r = rng.child(1 + static_cast<std::uint64_t>(Family::BackgroundColor));
    nlohmann::json rec;
    const auto scheme = r.bernoulli(0.5) ? detail::Scheme::Gradient : detail::Scheme::Blobs;
    const Mask weight = detail::sample_scheme_weight(scheme, h, w, cfg.color_shift, r, rec);
    const JitterFactors f = sample_jitter(cfg.color_shift.jitter, r);
    rec["jitter"] = detail::to_json(f);
    target = blend_jittered(target, apply_jitter(target, f), weight, full);
    degraded = target;
    mark(Family::BackgroundColor, std::move(rec));
  }

  if (enabled(Family::ForegroundColor)) {
    Rng r = rng.child(1 + static_cast<std::uint64_t>(Family::ForegroundColor));
    nlohmann::json rec;
    const auto scheme = static_cast<detail::Scheme>(r.uniform_int(0, 2));
    const Mask weight = detail::sample_scheme_weight(scheme, h, w, cfg.color_shift, r, rec);
    const JitterFactors f = sample_jitter(cfg.color_shift.jitter, r);
    rec["jitter"] = detail::to_json(f);
    degraded = blend_jittered(degraded, apply_jitter(degraded, f), weight, mask);
    mark(Family::ForegroundColor, std::move(rec));
  }

  if (enabled(Family::NoiseJpegBlur)) {
    Rng r = rng.child(1 + static_cast<std::uint64_t>(Family::NoiseJpegBlur));
    std::array<bool, 3> sub{r.bernoulli(cfg.subop_probability), r.bernoulli(cfg.subop_probability),
                            r.bernoulli(cfg.subop_probability)};
    if (!sub[0] && !sub[1] && !sub[2]) sub[static_cast<std::size_t>(r.uniform_int(0, 2))] = true;
    nlohmann::json rec;
    if (sub[0]) {
      const int q = r.uniform_int(cfg.jpeg_quality);
      target = jpeg_simulate(target, q);
      degraded = paste_back(degraded, jpeg_simulate(degraded, q), mask);
      rec["jpeg_quality"] = q;
    }
    if (sub[1]) {
      const double s = r.uniform(cfg.blur_sigma);
      degraded = paste_back(gaussian_blur(degraded, s), degraded, mask);
      rec["blur_sigma"] = s;
    }
    if (sub[2]) {
      const double s = r.uniform(cfg.noise_sigma);
      Rng noise_rng = r.child(7);
      degraded = gaussian_noise(degraded, s, mask, noise_rng);
      rec["noise_sigma"] = s;
    }
    mark(Family::NoiseJpegBlur, std::move(rec));
  }

  if (enabled(Family::Codec)) {
    Rng r = rng.child(1 + static_cast<std::uint64_t>(Family::Codec));
    nlohmann::json rec;
    if (external_codec) {
      degraded = paste_back(codec_stand_in(degraded, *external_codec), degraded, mask);
      rec["external"] = true;
    } else {
      const double s = r.uniform(cfg.codec_strength);
      degraded = paste_back(codec_stand_in(degraded, s, r), degraded, mask);
      rec["strength"] = s;
    }
    mark(Family::Codec, std::move(rec));
  }

  if (enabled(Family::ContentDiscontinuity)) {
    Rng r = rng.child(1 + static_cast<std::uint64_t>(Family::ContentDiscontinuity));
    const int bw = r.uniform_int(cfg.band_width);
    degraded = content_discontinuity(degraded, mask, bw, cfg.solver);
    mark(Family::ContentDiscontinuity, {{"band_width", bw}});
  }

  Mask emitted = mask;
  if (enabled(Family::BoundaryMixing)) {
    Rng r = rng.child(1 + static_cast<std::uint64_t>(Family::BoundaryMixing));
    const BoundaryMixChoice c = sample_boundary_mix(cfg, r);
    emitted = boundary_mix(mask, c);
    mark(Family::BoundaryMixing, {{"op", c.dilate ? "dilate" : "erode"}, {"radius", c.radius}, {"sigma", c.sigma}});
  }

  out.degraded = alpha_blend(degraded, target, emitted);
  out.target = std::move(target);
  out.mask = std::move(emitted);
  out.params["applied"] = out.applied;
  return out;
}

}  // namespace seamkit
