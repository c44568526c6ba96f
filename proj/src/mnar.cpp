#include "alaam/mnar.hpp"

#include "alaam/errors.hpp"

namespace alaam {

std::vector<MnarSweepPoint> mnar_sweep(const DirectedGraph& g,
                                       const AttributeData& data,
                                       const ModelSpec& spec,
                                       const Prior& prior,
                                       const ClampMask& clamp,
                                       const RunSettings& run,
                                       const std::vector<double>& phi1_grid,
                                       int summary_burnin, int summary_thin) {
  if (phi1_grid.empty()) throw PreconditionError("empty phi1 grid");
  if (data.missing_count() == 0)
    throw PreconditionError(
        "missingness sensitivity needs missing outcomes");

  std::vector<MnarSweepPoint> points;
  points.reserve(phi1_grid.size());
  for (double phi1 : phi1_grid) {
    const MissingMechanism mechanism =
        MissingMechanism::mnar_fixed({0.0, phi1, 0.0});
    const PosteriorSample sample =
        run_estimation(g, data, spec, prior, mechanism, clamp, run);
    MnarSweepPoint point;
    point.phi1 = phi1;
    point.summary = summarize(sample.theta, sample.term_names, summary_burnin,
                              summary_thin);
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace alaam
