#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace alaam {

// Per-parameter posterior summary.  NaN marks a not-available entry
// (degenerate chain); the CSV layer renders it as NA.
struct ParameterSummary {
  std::string name;
  double mean = 0;
  double sd = 0;
  double ess = 0;
  double sacf10 = 0;
  double sacf30 = 0;
  double q025 = 0;
  double q975 = 0;
};

struct SummaryTable {
  std::vector<ParameterSummary> rows;
  int draws_used = 0;  // thinned draws entering mean/sd/quantiles
};

// Lag-k sample autocorrelation with the biased (1/T) covariance divisor.
// NaN for constant chains.
double autocorrelation(std::span<const double> chain, int lag);

// T / (1 + 2 * sum of autocorrelations), summed until the first nonpositive
// lag and capped at T.  NaN for constant chains.
double effective_sample_size(std::span<const double> chain);

// Linear-interpolation sample quantile (the common type-7 rule).
double quantile(std::vector<double> values, double q);

// Column-wise summary of a draw matrix.  Mean, sd, and quantiles use the
// post-burn-in chain thinned by `thin`; ESS and SACF use the un-thinned
// post-burn-in chain.
SummaryTable summarize(const Eigen::MatrixXd& draws,
                       const std::vector<std::string>& names, int burnin,
                       int thin);

// Multi-chain pooling: mean/sd/quantiles from the concatenated thinned
// chains, ESS summed across chains, SACF averaged.
SummaryTable summarize_pooled(const std::vector<Eigen::MatrixXd>& chains,
                              const std::vector<std::string>& names,
                              int burnin, int thin);

}  // namespace alaam
