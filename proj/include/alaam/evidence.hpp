#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "alaam/exchange.hpp"
#include "alaam/path_sampler.hpp"

namespace alaam {

struct OrdinateSettings {
  int posterior_burnin = 0;    // applied to the posterior draws entering
  int posterior_thin = 1;      // the numerator average
  int numerator_draws = 1000;  // auxiliary sample size at theta_prime
  int proposal_draws = 200;    // proposal points in the denominator
  int draws_per_proposal = 10; // auxiliary draws per proposal point
  int aux_burnin_sweeps = 50;
  int aux_thin_sweeps = 2;
  std::uint64_t seed = 0;
};

struct OrdinateResult {
  double log_ordinate = 0;
  double std_error = 0;
  double log_numerator = 0;
  double log_denominator = 0;
};

// Posterior density estimate at theta_prime from the reversibility of the
// auxiliary-variable move: a ratio of the average accept-weighted proposal
// density into theta_prime over the average acceptance out of it.  The
// acceptance probability is the chain's own, prior ratio included.  With
// missing data the numerator pairs each posterior draw with its recorded
// imputations; the denominator holds the data side at conditional
// imputation draws made at theta_prime.  Requires a proper prior.
OrdinateResult posterior_ordinate(const CompiledModel& model,
                                  const AttributeData& data,
                                  const ClampMask& clamp, const Prior& prior,
                                  const Proposal& proposal,
                                  const Eigen::VectorXd& theta_prime,
                                  const PosteriorSample& sample,
                                  double imputation_tilt,
                                  const OrdinateSettings& settings);

struct EvidenceResult {
  Eigen::VectorXd theta_prime;
  double log_likelihood = 0;
  double log_likelihood_se = 0;
  double log_prior = 0;
  double log_ordinate = 0;
  double ordinate_se = 0;
  double log_evidence = 0;  // log_likelihood + log_prior - log_ordinate
  double std_error = 0;
};

// Marginal-likelihood estimate at theta_prime (defaults to the posterior
// mean when empty) via the basic identity.
EvidenceResult evidence_at(const CompiledModel& model,
                           const AttributeData& data, const ClampMask& clamp,
                           const Prior& prior, const Proposal& proposal,
                           const PosteriorSample& sample,
                           double imputation_tilt,
                           const Eigen::VectorXd& theta_prime,
                           const PathSettings& path,
                           const OrdinateSettings& ordinate);

struct EvidencePoint {
  int model_index = 0;
  double lambda = 0;
  EvidenceResult result;
};

struct EvidenceCurveSettings {
  RunSettings run;
  PathSettings path;
  OrdinateSettings ordinate;
  int summary_burnin = 0;  // burn-in for the posterior-mean evaluation point
  double prior_center_intercept = 0;  // applied to the first intercept term
};

// For each (model, lambda): builds the scaled normal prior, runs estimation,
// and evaluates the evidence at the posterior mean.
std::vector<EvidencePoint> evidence_curve(
    const DirectedGraph& g, const AttributeData& data,
    const std::vector<ModelSpec>& models, const std::vector<double>& lambdas,
    const MissingMechanism& mechanism, const ClampMask& clamp,
    const EvidenceCurveSettings& settings);

}  // namespace alaam
