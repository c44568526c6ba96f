#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "alaam/graph.hpp"

namespace alaam {

// Missing-data treatment.  mar imputes under the outcome model alone.  The
// mnar modes add a logistic missingness model
//   logit Pr(I_i = 1) = phi0 + phi1 * y_i + phi2 * indegree_i,
// either with phi held fixed or with phi given a normal prior and updated
// by random-walk Metropolis.
enum class MissingMode { mar, mnar_fixed, mnar_estimated };

struct MissingMechanism {
  MissingMode mode = MissingMode::mar;
  Eigen::Vector3d phi = Eigen::Vector3d::Zero();          // fixed value or start
  Eigen::Vector3d phi_prior_mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d phi_prior_sd = Eigen::Vector3d::Constant(5.0);
  Eigen::Vector3d phi_step_sd = Eigen::Vector3d::Constant(0.2);

  static MissingMechanism mar() { return {}; }
  static MissingMechanism mnar_fixed(const Eigen::Vector3d& phi_value);
  static MissingMechanism mnar_estimated(const Eigen::Vector3d& prior_mean,
                                         const Eigen::Vector3d& prior_sd,
                                         const Eigen::Vector3d& step_sd);

  bool active() const { return mode != MissingMode::mar; }

  // Log-odds shift a missing node's imputation receives from the
  // missingness model: only the y_i term survives in the tilted target.
  double imputation_tilt(const Eigen::Vector3d& phi_value) const {
    return mode == MissingMode::mar ? 0.0 : phi_value[1];
  }

  // Full Bernoulli log f(I | y, phi) over all nodes.
  double log_missingness(const Eigen::Vector3d& phi_value,
                         std::span<const std::uint8_t> indicator,
                         std::span<const std::uint8_t> y,
                         const DirectedGraph& g) const;

  double log_phi_prior(const Eigen::Vector3d& phi_value) const;
};

}  // namespace alaam
