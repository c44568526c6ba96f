#pragma once

#include <vector>

#include "alaam/exchange.hpp"
#include "alaam/summary.hpp"

namespace alaam {

struct MnarSweepPoint {
  double phi1 = 0;
  SummaryTable summary;
};

// Sensitivity of the posterior to the missingness parameter: re-runs the
// estimation with the mechanism fixed at (0, phi1, 0) for each grid value.
// Only the outcome coefficient enters the tilted target, so the other two
// coordinates are irrelevant here.  Every point uses the same seed, which
// makes the curve smooth under common random numbers and makes the phi1 = 0
// point identical to a plain run without a mechanism.  Requires missing data.
std::vector<MnarSweepPoint> mnar_sweep(const DirectedGraph& g,
                                       const AttributeData& data,
                                       const ModelSpec& spec,
                                       const Prior& prior,
                                       const ClampMask& clamp,
                                       const RunSettings& run,
                                       const std::vector<double>& phi1_grid,
                                       int summary_burnin, int summary_thin);

}  // namespace alaam
