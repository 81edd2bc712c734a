// Show how the fitted tone map amplifies a faint in-mask colour shift, and
// how Poisson blending of a globally shifted source hides the shift. The
// amplification needs inside and outside intensities that the shift keeps
// apart, so the ground truth is nearly flat.
//
//   discriminative_space [shift]

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "seamkit/seamkit.hpp"

using namespace seamkit;

int main(int argc, char** argv) {
  const double shift = argc > 1 ? std::atof(argv[1]) : 0.01;
  const int n = 96;
  Image gt(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      for (int c = 0; c < 3; ++c) gt.at(y, x, c) = 0.5 + 0.002 * std::sin(0.3 * x + c) * std::cos(0.2 * y);

  Mask mask(n, n);
  for (int y = 32; y < 64; ++y)
    for (int x = 32; x < 64; ++x) mask.at(y, x) = 1.0;

  Image pred = gt;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i] == 1.0) pred[3 * i] = clamp01(pred[3 * i] + shift);

  for (double beta : {2.0, 10.0, 20.0, 40.0}) {
    Rng rng(1);
    const ToneMapFit fit = fit_tonemap_detailed(pred, gt, mask, AmplifyParams::pinned(beta), rng);
    const Image yp = apply_tonemap(fit.tone_map, pred), yg = apply_tonemap(fit.tone_map, gt);
    std::printf("beta %5.1f  masked l1 %.5f  masked disc l1 %.5f  ratio %.2f\n", beta, l1(pred, gt, mask),
                l1(yp, yg, mask), l1(yp, yg, mask) / l1(pred, gt, mask));
  }

  Image source = gt;
  for (std::size_t i = 0; i < source.pixel_count(); ++i) source[3 * i] += shift;
  const Image pasted = paste_back(source, gt, mask);
  std::printf("paste-back masked l1 %.2e, poisson blend masked l1 %.2e\n", l1(pasted, gt, mask),
              l1(poisson_blend(source, gt, mask), gt, mask));
}
