#include "alaam/gof.hpp"

#include <algorithm>

#include "alaam/errors.hpp"
#include "alaam/statistics.hpp"

namespace alaam {

double tail_p_value(const Eigen::VectorXd& draws, double observed) {
  const double n = static_cast<double>(draws.size());
  if (n == 0) throw PreconditionError("no predictive draws");
  double above = 0, below = 0, ties = 0;
  for (Eigen::Index t = 0; t < draws.size(); ++t) {
    if (draws[t] > observed)
      above += 1;
    else if (draws[t] < observed)
      below += 1;
    else
      ties += 1;
  }
  const double p_ge = (above + 0.5 * ties) / n;
  const double p_le = (below + 0.5 * ties) / n;
  return std::min(p_ge, p_le);
}

GofTable gof(const PosteriorSample& sample,
             const std::vector<std::uint8_t>& observed,
             const DirectedGraph& g, int burnin, int thin) {
  if (sample.pred_battery.rows() == 0)
    throw PreconditionError("posterior sample has no predictive draws");
  if (thin < 1) throw PreconditionError("thinning interval must be >= 1");
  if (burnin < 0 || burnin >= sample.pred_battery.rows())
    throw PreconditionError("no predictive draws remain after burn-in");

  const Eigen::VectorXd obs = gof_statistics(observed, g);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = burnin; t < sample.pred_battery.rows(); t += thin)
    keep.push_back(t);

  GofTable table;
  table.draws_used = static_cast<int>(keep.size());
  const auto& names = gof_statistic_names();
  for (int s = 0; s < kGofBatterySize; ++s) {
    Eigen::VectorXd draws(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
      draws[static_cast<Eigen::Index>(i)] = sample.pred_battery(keep[i], s);
    GofRow row;
    row.name = std::string(names[static_cast<std::size_t>(s)]);
    row.observed = obs[s];
    row.predictive_mean = draws.mean();
    row.p = tail_p_value(draws, obs[s]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

GofTable gof_model_terms(const PosteriorSample& sample,
                         const CompiledModel& model,
                         const std::vector<std::uint8_t>& observed,
                         int burnin, int thin) {
  if (sample.pred_stats.rows() == 0)
    throw PreconditionError("posterior sample has no predictive draws");
  if (thin < 1) throw PreconditionError("thinning interval must be >= 1");
  if (burnin < 0 || burnin >= sample.pred_stats.rows())
    throw PreconditionError("no predictive draws remain after burn-in");

  const Eigen::VectorXd obs = model.statistics(observed);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = burnin; t < sample.pred_stats.rows(); t += thin)
    keep.push_back(t);

  GofTable table;
  table.draws_used = static_cast<int>(keep.size());
  for (int s = 0; s < model.parameter_count(); ++s) {
    Eigen::VectorXd draws(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
      draws[static_cast<Eigen::Index>(i)] = sample.pred_stats(keep[i], s);
    GofRow row;
    row.name = sample.term_names[static_cast<std::size_t>(s)];
    row.observed = obs[s];
    row.predictive_mean = draws.mean();
    row.p = tail_p_value(draws, obs[s]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace alaam
