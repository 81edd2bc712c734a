#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "seamkit/filter.hpp"
#include "seamkit/image.hpp"
#include "seamkit/jitter.hpp"
#include "seamkit/morphology.hpp"
#include "seamkit/png_io.hpp"
#include "seamkit/polyfit.hpp"
#include "seamkit/rng.hpp"

namespace seamkit {

/// G(x_gen, m) -> x_pred. Must be deterministic, keep dimensions, clamp,
/// and leave pixels with mask == 0 untouched.
using Refiner = std::function<Image(const Image&, const Mask&)>;

struct ClassicalRefineParams {
  int degree = 3;
  int ring_width = 8;
  double feather_sigma = 2.0;
  int quantiles = 64;

  void validate() const {
    if (degree < 1) throw ConfigError("refine degree must be >= 1");
    if (ring_width < 1) throw ConfigError("ring_width must be >= 1");
    if (!(feather_sigma >= 0.0)) throw ConfigError("feather_sigma must be >= 0");
    if (quantiles < 2) throw ConfigError("quantiles must be >= 2");
  }
};

/// Linear-interpolated quantiles at levels (k + 0.5) / count.
inline std::vector<double> quantiles(std::vector<double> values, int count) {
  std::sort(values.begin(), values.end());
  std::vector<double> q(static_cast<std::size_t>(count));
  const double n = static_cast<double>(values.size());
  for (int k = 0; k < count; ++k) {
    const double pos = std::clamp((k + 0.5) / count * n - 0.5, 0.0, n - 1.0);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    const double next = values[std::min(i + 1, values.size() - 1)];
    q[static_cast<std::size_t>(k)] = values[i] + frac * (next - values[i]);
  }
  return q;
}

/// Classical seam refiner: per channel, match the intensity distribution of
/// the ring just inside the mask to the ring just outside it with a
/// polynomial fitted through matched quantiles, then feather and paste back.
inline Image classical_refine(const Image& x_gen, const Mask& mask, const ClassicalRefineParams& params = {}) {
  params.validate();
  require_same_shape(x_gen, mask, "classical_refine mask");
  require_binary(mask, "classical_refine");
  const Mask eroded = erode(mask, params.ring_width);
  const Mask dilated = dilate(mask, params.ring_width);

  std::array<std::vector<double>, 3> inner, outer;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const bool in_ring = mask[i] == 1.0 && eroded[i] == 0.0;
    const bool out_ring = mask[i] == 0.0 && dilated[i] == 1.0;
    for (int c = 0; c < 3; ++c) {
      if (in_ring) inner[c].push_back(x_gen[3 * i + c]);
      if (out_ring) outer[c].push_back(x_gen[3 * i + c]);
    }
  }
  if (inner[0].empty() || outer[0].empty())
    throw PreconditionError("classical_refine needs non-empty inner and outer rings",
                            "inner=" + std::to_string(inner[0].size()) + " outer=" + std::to_string(outer[0].size()));

  Image corrected = x_gen;
  for (int c = 0; c < 3; ++c) {
    const auto qi = quantiles(inner[c], params.quantiles);
    const auto qo = quantiles(outer[c], params.quantiles);
    const auto coef = fit_polynomial(qi, qo, params.degree, 0.5);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      const double v = x_gen[3 * i + c];
      corrected[3 * i + c] = clamp01(eval_polynomial(coef, v, 0.5));
    }
  }
  const Image feathered = alpha_blend(corrected, x_gen, soften_mask(mask, params.feather_sigma));
  return paste_back(feathered, x_gen, mask);
}

inline Refiner make_classical_refiner(const ClassicalRefineParams& params = {}) {
  return [params](const Image& img, const Mask& m) { return classical_refine(img, m, params); };
}

/// Runs an external refiner through files: `command` may contain {in},
/// {mask} and {out} placeholders, which are replaced by temporary PNG paths.
inline Refiner make_subprocess_refiner(std::string command, std::filesystem::path work_dir) {
  return [command = std::move(command), work_dir = std::move(work_dir)](const Image& img, const Mask& m) {
    std::filesystem::create_directories(work_dir);
    static std::atomic<unsigned> counter{0};
    const std::string tag = std::to_string(counter.fetch_add(1));
    const auto in = (work_dir / ("refiner_in_" + tag + ".png")).string();
    const auto mask = (work_dir / ("refiner_mask_" + tag + ".png")).string();
    const auto out = (work_dir / ("refiner_out_" + tag + ".png")).string();
    save_image(in, img);
    save_mask(mask, m);
    std::string cmd = command;
    auto replace = [&cmd](const std::string& key, const std::string& value) {
      for (std::size_t pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos + value.size()))
        cmd.replace(pos, key.size(), value);
    };
    replace("{in}", in);
    replace("{mask}", mask);
    replace("{out}", out);
    const int rc = std::system(cmd.c_str());
    if (rc != 0) throw Error(ErrorKind::Numeric, "external refiner failed", cmd);
    Image result = load_image(out);
    std::filesystem::remove(in);
    std::filesystem::remove(mask);
    std::filesystem::remove(out);
    require_same_shape(img, result, "external refiner output");
    return result;
  };
}

struct PoolParams {
  int variants = 8;
  JitterParams jitter;
  bool include_original = true;

  void validate() const {
    if (variants < 1) throw ConfigError("pool needs at least one variant");
    jitter.validate();
  }
};

struct PoolResult {
  Image output;
  int selected = 0;
  std::vector<double> scores;
};

/// Mean |input - refined| over the mask support.
inline double refinement_change(const Image& input, const Image& refined, const Mask& mask) {
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!(mask[i] > 0.0)) continue;
    for (int c = 0; c < 3; ++c) s += std::abs(input[3 * i + c] - refined[3 * i + c]);
    n += 3;
  }
  return n ? s / static_cast<double>(n) : 0.0;
}

/// Inference-time pooling: refine N in-mask jittered variants and keep the
/// output whose refiner changed its input least (lowest index on ties).
inline PoolResult pool_refine_detailed(const Refiner& refiner, const Image& x_gen, const Mask& mask,
                                       const PoolParams& params, Rng& rng) {
  params.validate();
  require_same_shape(x_gen, mask, "pool_refine mask");
  PoolResult best;
  for (int i = 0; i < params.variants; ++i) {
    Image variant = x_gen;
    if (!(params.include_original && i == 0)) {
      Rng vr = rng.child(static_cast<std::uint64_t>(i));
      variant = color_jitter(x_gen, mask, params.jitter, vr);
    }
    Image refined;
    try {
      refined = refiner(variant, mask);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string("refiner failed on variant ") + std::to_string(i) + ": " + e.what(),
                  "variant=" + std::to_string(i));
    }
    require_same_shape(x_gen, refined, "refiner output");
    const double score = refinement_change(variant, refined, mask);
    best.scores.push_back(score);
    if (i == 0 || score < best.scores[static_cast<std::size_t>(best.selected)]) {
      best.selected = i;
      best.output = std::move(refined);
    }
  }
  return best;
}

inline Image pool_refine(const Refiner& refiner, const Image& x_gen, const Mask& mask, const PoolParams& params,
                         Rng& rng) {
  return pool_refine_detailed(refiner, x_gen, mask, params, rng).output;
}

/// Full-frame Gaussian input noise, shared with training-side consumers.
inline Image add_input_noise(const Image& img, double sigma, Rng& rng) {
  return gaussian_noise(img, sigma, Mask(img.height(), img.width(), 1.0), rng);
}

}  // namespace seamkit
