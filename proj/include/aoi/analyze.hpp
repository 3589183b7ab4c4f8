#pragma once

#include "aoi/analytic_core.hpp"
#include "aoi/model.hpp"

namespace aoi {

// Picks the closed form matching the model: M/GI/1 when arrivals are
// exponential, GI/M/1 when service is exponential, and for preemptive LCFS
// the GI/GI/1 result otherwise. Throws Unsupported when none applies.
AoiAnalytic analyze(const Model& m);

}  // namespace aoi
