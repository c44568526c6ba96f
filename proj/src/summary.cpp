#include "alaam/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alaam/errors.hpp"

namespace alaam {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double chain_mean(std::span<const double> chain) {
  double s = 0;
  for (double x : chain) s += x;
  return s / static_cast<double>(chain.size());
}

// autocovariance at lag k with 1/T divisor
double autocovariance(std::span<const double> chain, double mean, int lag) {
  const int T = static_cast<int>(chain.size());
  double s = 0;
  for (int t = 0; t + lag < T; ++t)
    s += (chain[static_cast<std::size_t>(t)] - mean) *
         (chain[static_cast<std::size_t>(t + lag)] - mean);
  return s / static_cast<double>(T);
}

}  // namespace

double autocorrelation(std::span<const double> chain, int lag) {
  if (chain.empty() || lag < 0 || lag >= static_cast<int>(chain.size()))
    return kNaN;
  const double mean = chain_mean(chain);
  const double c0 = autocovariance(chain, mean, 0);
  if (c0 <= 0) return kNaN;
  return autocovariance(chain, mean, lag) / c0;
}

double effective_sample_size(std::span<const double> chain) {
  const int T = static_cast<int>(chain.size());
  if (T == 0) return kNaN;
  const double mean = chain_mean(chain);
  const double c0 = autocovariance(chain, mean, 0);
  if (c0 <= 0) return kNaN;
  double acc = 0;
  for (int k = 1; k < T; ++k) {
    const double rho = autocovariance(chain, mean, k) / c0;
    if (rho <= 0) break;
    acc += rho;
  }
  return std::min(static_cast<double>(T),
                  static_cast<double>(T) / (1 + 2 * acc));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  if (!(q >= 0 && q <= 1)) throw PreconditionError("quantile level outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

ParameterSummary summarize_one(const std::string& name,
                               std::span<const double> unthinned,
                               const std::vector<double>& thinned) {
  ParameterSummary row;
  row.name = name;
  const double n = static_cast<double>(thinned.size());
  double mean = 0;
  for (double x : thinned) mean += x;
  mean /= n;
  double ss = 0;
  for (double x : thinned) ss += (x - mean) * (x - mean);
  row.mean = mean;
  row.sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  row.q025 = quantile(thinned, 0.025);
  row.q975 = quantile(thinned, 0.975);
  row.ess = effective_sample_size(unthinned);
  row.sacf10 = autocorrelation(unthinned, 10);
  row.sacf30 = autocorrelation(unthinned, 30);
  return row;
}

}  // namespace

SummaryTable summarize(const Eigen::MatrixXd& draws,
                       const std::vector<std::string>& names, int burnin,
                       int thin) {
  return summarize_pooled({draws}, names, burnin, thin);
}

SummaryTable summarize_pooled(const std::vector<Eigen::MatrixXd>& chains,
                              const std::vector<std::string>& names,
                              int burnin, int thin) {
  if (chains.empty()) throw PreconditionError("no chains to summarize");
  if (thin < 1) throw PreconditionError("thinning interval must be >= 1");
  if (burnin < 0) throw PreconditionError("burn-in must be >= 0");
  const Eigen::Index p = chains.front().cols();
  for (const auto& c : chains) {
    if (c.cols() != p) throw DimensionError("chains have mismatched widths");
    if (c.rows() <= burnin)
      throw PreconditionError("no draws remain after burn-in");
  }
  if (static_cast<Eigen::Index>(names.size()) != p)
    throw DimensionError("name list does not match draw columns");

  SummaryTable table;
  for (Eigen::Index k = 0; k < p; ++k) {
    std::vector<double> thinned;
    double ess_sum = 0;
    bool ess_na = false;
    double sacf10 = 0, sacf30 = 0;
    bool sacf_na = false;
    ParameterSummary per_chain;
    for (const auto& c : chains) {
      std::vector<double> unthinned;
      unthinned.reserve(static_cast<std::size_t>(c.rows() - burnin));
      for (Eigen::Index t = burnin; t < c.rows(); ++t)
        unthinned.push_back(c(t, k));
      for (std::size_t t = 0; t < unthinned.size(); t += static_cast<std::size_t>(thin))
        thinned.push_back(unthinned[t]);
      per_chain = summarize_one(names[static_cast<std::size_t>(k)], unthinned, thinned);
      if (std::isnan(per_chain.ess)) ess_na = true;
      else ess_sum += per_chain.ess;
      if (std::isnan(per_chain.sacf10) || std::isnan(per_chain.sacf30)) {
        sacf_na = true;
      } else {
        sacf10 += per_chain.sacf10;
        sacf30 += per_chain.sacf30;
      }
    }
    ParameterSummary row =
        summarize_one(names[static_cast<std::size_t>(k)], {}, thinned);
    const double c = static_cast<double>(chains.size());
    row.ess = ess_na ? kNaN : ess_sum;
    row.sacf10 = sacf_na ? kNaN : sacf10 / c;
    row.sacf30 = sacf_na ? kNaN : sacf30 / c;
    if (chains.size() == 1) {
      row.ess = per_chain.ess;
      row.sacf10 = per_chain.sacf10;
      row.sacf30 = per_chain.sacf30;
    }
    table.rows.push_back(row);
    table.draws_used = static_cast<int>(thinned.size());
  }
  return table;
}

}  // namespace alaam
