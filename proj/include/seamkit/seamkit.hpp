#pragma once

#include "seamkit/color_shift.hpp"
#include "seamkit/error.hpp"
#include "seamkit/filter.hpp"
#include "seamkit/haar.hpp"
#include "seamkit/image.hpp"
#include "seamkit/jitter.hpp"
#include "seamkit/jpeg.hpp"
#include "seamkit/mask_gen.hpp"
#include "seamkit/metrics.hpp"
#include "seamkit/morphology.hpp"
#include "seamkit/pblend.hpp"
#include "seamkit/png_io.hpp"
#include "seamkit/polyfit.hpp"
#include "seamkit/refine.hpp"
#include "seamkit/rng.hpp"
#include "seamkit/sim.hpp"
#include "seamkit/tonemap.hpp"
