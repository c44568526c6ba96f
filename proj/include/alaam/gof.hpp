#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "alaam/exchange.hpp"

namespace alaam {

struct GofRow {
  std::string name;
  double observed = 0;
  double predictive_mean = 0;
  double p = 0;  // min-tail with ties counted half; always in [0, 0.5]
};

struct GofTable {
  std::vector<GofRow> rows;
  int draws_used = 0;
};

// Tail p-value of `observed` within `draws`: min of the two tail
// probabilities, ties weighted half.
double tail_p_value(const Eigen::VectorXd& draws, double observed);

// Posterior-predictive check of the descriptive battery.  `observed` is the
// outcome vector the battery is evaluated on (missing entries enter as 0).
GofTable gof(const PosteriorSample& sample,
             const std::vector<std::uint8_t>& observed,
             const DirectedGraph& g, int burnin = 0, int thin = 1);

// Same check restricted to the fitted model's own statistics.
GofTable gof_model_terms(const PosteriorSample& sample,
                         const CompiledModel& model,
                         const std::vector<std::uint8_t>& observed,
                         int burnin = 0, int thin = 1);

}  // namespace alaam
