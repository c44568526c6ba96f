#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "alaam/attributes.hpp"
#include "alaam/statistics.hpp"

namespace alaam {

struct LogisticFit {
  Eigen::VectorXd theta;  // full parameter vector, dependence entries zero
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0;  // of the independent submodel, observed nodes
};

// Maximum-likelihood fit of the nested independent submodel: dependence
// parameters are pinned at zero and the remaining columns of the node-level
// design act as logistic regression covariates.  Only observed nodes enter
// the fit.  Newton iteration with a small ridge and step halving; collinear
// designs converge to one of the equivalent optima.
LogisticFit fit_independent_mle(const CompiledModel& model,
                                const AttributeData& data);

}  // namespace alaam
