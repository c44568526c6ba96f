#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "alaam/attributes.hpp"
#include "alaam/rng.hpp"
#include "alaam/statistics.hpp"

namespace alaam {

enum class UpdateRule { gibbs, metropolis };

// Single-site sampler over the outcome vector at fixed parameters.  The
// statistic vector is maintained incrementally; one sweep performs n updates
// of free nodes (random scan with replacement by default).  An optional
// per-node tilt adds to the conditional log-odds, which is how missing-data
// normalizers are simulated.
class OutcomeSampler {
 public:
  OutcomeSampler(const CompiledModel& model, Eigen::VectorXd theta,
                 std::vector<std::uint8_t> start,
                 std::vector<std::uint8_t> clamped = {},
                 Eigen::VectorXd tilt = {});

  void set_theta(Eigen::VectorXd theta);

  // Pr(y_i = 1 | rest) under the current state.
  double conditional_probability(int node) const;

  void sweep(UpdateRule rule, Rng& rng);
  void sweep_systematic(UpdateRule rule, Rng& rng);
  void run(int sweeps, UpdateRule rule, Rng& rng, bool systematic = false);

  const std::vector<std::uint8_t>& outcomes() const { return y_; }
  const Eigen::VectorXd& statistics() const { return z_; }
  const std::vector<int>& free_nodes() const { return free_; }

 private:
  void update_node(int node, UpdateRule rule, Rng& rng);

  const CompiledModel* model_;
  Eigen::VectorXd theta_;
  Eigen::VectorXd tilt_;
  std::vector<std::uint8_t> y_;
  std::vector<std::uint8_t> clamped_;
  std::vector<int> free_;
  Eigen::VectorXd z_;
  mutable Eigen::VectorXd delta_;
};

struct SimulationSettings {
  int burnin = 0;  // sweeps discarded up front
  int thin = 1;    // sweeps between recorded draws
  int draws = 1;
  UpdateRule rule = UpdateRule::gibbs;
  bool systematic_scan = false;
  std::uint64_t seed = 0;
  bool record_outcomes = true;
  bool record_statistics = true;
};

struct SimulationOutput {
  std::vector<std::vector<std::uint8_t>> outcomes;  // when recorded
  Eigen::MatrixXd statistics;                       // draws x p when recorded
  std::uint64_t seed = 0;
};

// Runs the single-site chain and records draws.  Clamped nodes keep the
// values given in `start`; free entries of `start` may be set to 2 to
// request a fair-coin initialization.  When `start` is empty every free
// node starts from a fair coin.
SimulationOutput sample(const CompiledModel& model,
                        const Eigen::VectorXd& theta,
                        const SimulationSettings& settings,
                        const ClampMask* clamp = nullptr,
                        const std::vector<std::uint8_t>* start = nullptr);

struct ExactDistribution {
  std::vector<int> free_nodes;  // bit b of a state index is free_nodes[b]
  Eigen::VectorXd log_probability;
  double log_normalizer = 0;  // over free nodes, clamped entries fixed

  double probability(std::uint64_t state) const {
    return std::exp(log_probability[static_cast<Eigen::Index>(state)]);
  }
  std::uint64_t state_count() const {
    return std::uint64_t{1} << free_nodes.size();
  }
};

// Enumerates the distribution over the free nodes.  `base` supplies clamped
// values (may be empty when nothing is clamped).  Throws when more than
// `max_free` nodes are free.
ExactDistribution exact_distribution(const CompiledModel& model,
                                     const Eigen::VectorXd& theta,
                                     const ClampMask* clamp = nullptr,
                                     const std::vector<std::uint8_t>* base =
                                         nullptr,
                                     const Eigen::VectorXd* tilt = nullptr,
                                     int max_free = 22);

struct StatCovariance {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  std::vector<int> degenerate;  // coordinates with (numerically) zero variance
};

// Monte Carlo moments of the statistic vector at fixed theta, used to scale
// proposals and priors.  Requires draws >= 100.
StatCovariance estimate_stat_covariance(const CompiledModel& model,
                                        const Eigen::VectorXd& theta,
                                        int draws, int burnin_sweeps,
                                        int thin_sweeps, std::uint64_t seed,
                                        const ClampMask* clamp = nullptr,
                                        const std::vector<std::uint8_t>* start =
                                            nullptr);

}  // namespace alaam
