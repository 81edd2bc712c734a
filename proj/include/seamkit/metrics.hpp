#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seamkit/image.hpp"
#include "seamkit/rng.hpp"
#include "seamkit/tonemap.hpp"

namespace seamkit {

/// Mean absolute difference averaged over channels, over the region's
/// support (weight > 0) or the whole image.
inline double l1(const Image& a, const Image& b, const Mask* region = nullptr) {
  require_same_shape(a, b, "l1 images");
  if (region) require_same_shape(a, *region, "l1 region");
  return detail::mean_abs_diff(a, b, region);
}

inline double l1(const Image& a, const Image& b, const Mask& region) { return l1(a, b, &region); }

/// PSNR with unit peak; identical images give +infinity.
inline double psnr(const Image& a, const Image& b) {
  require_same_shape(a, b, "psnr images");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mse += (a[i] - b[i]) * (a[i] - b[i]);
  mse /= static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

struct MetricsReport {
  double l1_full = 0.0;
  double l1_masked = 0.0;
  double psnr = 0.0;
  double disc_l1 = 0.0;
  double disc_l1_masked = 0.0;  // same tone map, averaged over the mask support
  std::string pred_id;
  std::string gt_id;
  std::string mask_id;
  std::uint64_t seed = 0;
  std::string config_digest;

  bool identical() const { return std::isinf(psnr); }
};

/// FNV-1a over the canonical JSON dump of the amplification settings.
inline std::string config_digest(const AmplifyParams& params) {
  const std::string text = nlohmann::json(params).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline MetricsReport evaluate(const Image& pred, const Image& gt, const Mask& mask, const AmplifyParams& amplify,
                              Rng& rng) {
  require_same_shape(pred, gt, "evaluate images");
  require_same_shape(pred, mask, "evaluate mask");
  MetricsReport r;
  r.l1_full = l1(pred, gt);
  r.l1_masked = l1(pred, gt, mask);
  r.psnr = psnr(pred, gt);
  const ToneMap tm = fit_tonemap(pred, gt, mask, amplify, rng);
  const Image y_pred = apply_tonemap(tm, pred);
  const Image y_gt = apply_tonemap(tm, gt);
  r.disc_l1 = detail::mean_abs_diff(y_pred, y_gt);
  r.disc_l1_masked = detail::mean_abs_diff(y_pred, y_gt, &mask);
  r.seed = rng.seed();
  r.config_digest = config_digest(amplify);
  return r;
}

inline constexpr int kReportSchema = 1;

/// PSNR of identical images is written as null with "identical": true.
inline nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["l1_full"] = r.l1_full;
  j["l1_masked"] = r.l1_masked;
  j["psnr"] = r.identical() ? nlohmann::json(nullptr) : nlohmann::json(r.psnr);
  j["identical"] = r.identical();
  j["disc_l1"] = r.disc_l1;
  j["disc_l1_masked"] = r.disc_l1_masked;
  j["metadata"] = {{"pred", r.pred_id},
                   {"gt", r.gt_id},
                   {"mask", r.mask_id},
                   {"seed", r.seed},
                   {"config_digest", r.config_digest}};
  return j;
}

/// One header line and one row of per-metric means. Infinite PSNR values
/// are left out of the PSNR mean; the row reports how many were finite.
inline std::string csv_summary(const std::vector<MetricsReport>& reports) {
  double l1f = 0.0, l1m = 0.0, ps = 0.0, dl = 0.0, dlm = 0.0;
  std::size_t finite = 0;
  for (const auto& r : reports) {
    l1f += r.l1_full;
    l1m += r.l1_masked;
    dl += r.disc_l1;
    dlm += r.disc_l1_masked;
    if (!r.identical()) {
      ps += r.psnr;
      ++finite;
    }
  }
  const double n = reports.empty() ? 1.0 : static_cast<double>(reports.size());
  std::ostringstream os;
  os << std::setprecision(10);
  os << "count,l1_full,l1_masked,psnr,psnr_finite_count,disc_l1,disc_l1_masked\n";
  os << reports.size() << ',' << l1f / n << ',' << l1m / n << ',';
  if (finite) os << ps / static_cast<double>(finite);
  else os << "inf";
  os << ',' << finite << ',' << dl / n << ',' << dlm / n << '\n';
  return os.str();
}

}  // namespace seamkit
