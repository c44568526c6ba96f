#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "alaam/exchange.hpp"
#include "alaam/path_sampler.hpp"

namespace alaam {

struct DevianceSample {
  Eigen::VectorXd deviance;     // -2 * (l(theta_t) - l(reference)) per draw
  Eigen::VectorXd theta_ref;    // independent-MLE reference point
  double deviance_at_mean = 0;  // D at the posterior mean
};

struct DicResult {
  double d_bar = 0;
  double d_at_mean = 0;
  double p_d = 0;   // d_bar - d_at_mean
  double p_v = 0;   // var(D)/2
  double dic_pd = 0;
  double dic_pv = 0;
};

// Summary half of the DIC computation, usable on any deviance chain.
DicResult dic_from_deviances(const Eigen::VectorXd& deviance,
                             double deviance_at_mean);

struct DevianceSettings {
  int burnin = 0;
  int thin = 1;          // posterior draws evaluated: every thin-th
  PathSettings path;     // per-draw bridge settings
};

// Posterior deviance relative to the independent-submodel MLE, each draw's
// log-likelihood estimated by path sampling.  With missing data both
// normalizers are bridged; imputation_tilt is the phi1 value used for the
// missing-coordinate normalizer.
std::pair<DevianceSample, DicResult> deviance_and_dic(
    const CompiledModel& model, const AttributeData& data,
    const ClampMask& clamp, const PosteriorSample& sample,
    double imputation_tilt, const DevianceSettings& settings);

// Sorted (value, cumulative probability) pairs for plotting.
std::vector<std::pair<double, double>> deviance_cdf(
    const Eigen::VectorXd& deviance);

}  // namespace alaam
