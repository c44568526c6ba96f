#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "alaam/attributes.hpp"
#include "alaam/rng.hpp"
#include "alaam/simulator.hpp"

namespace alaam {

struct PathSettings {
  int bridges = 20;        // grid points on [0,1], endpoints included
  int samples = 100;       // simulation draws per grid point
  int burnin_sweeps = 10;  // sweeps after each theta move before collecting
  int thin_sweeps = 1;     // sweeps between collected draws
  UpdateRule rule = UpdateRule::gibbs;
  std::uint64_t seed = 0;
};

struct PathEstimate {
  double value = 0;
  double std_error = 0;
};

// log-normalizer difference psi(to) - psi(from) along the linear parameter
// path, by trapezoid quadrature of E_u[z]' (to - from) with a warm-started
// chain.  The free set is the complement of the clamp; `base` supplies
// clamped values; `tilt` adds per-node log-odds (missing-data normalizers).
PathEstimate psi_difference(const CompiledModel& model,
                            const Eigen::VectorXd& from,
                            const Eigen::VectorXd& to,
                            const PathSettings& settings,
                            const ClampMask* clamp = nullptr,
                            const std::vector<std::uint8_t>* base = nullptr,
                            const Eigen::VectorXd* tilt = nullptr);

// Closed-form log normalizer for a parameter vector whose dependence
// coordinates are all zero: the model factorizes over nodes.
double independent_log_normalizer(const CompiledModel& model,
                                  const Eigen::VectorXd& theta,
                                  const ClampMask* clamp = nullptr,
                                  const std::vector<std::uint8_t>* base =
                                      nullptr,
                                  const Eigen::VectorXd* tilt = nullptr);

// Log-likelihood difference l(theta) - l(theta_ref) given the observed
// statistic vector.
PathEstimate path_loglik(const CompiledModel& model,
                         const Eigen::VectorXd& theta,
                         const Eigen::VectorXd& theta_ref,
                         const Eigen::VectorXd& z_obs,
                         const PathSettings& settings,
                         const ClampMask* clamp = nullptr,
                         const std::vector<std::uint8_t>* base = nullptr);

struct LoglikResult {
  double value = 0;
  double std_error = 0;
  Eigen::VectorXd theta_ref;  // independent anchor used for the bridges
};

// Absolute log-likelihood of the observed data at theta, anchored at the
// independent-submodel MLE where the normalizer has a closed form.  With
// missing outcomes this is psi(theta, phi, I) - psi(theta): the first
// normalizer sums over the missing coordinates only (observed fixed, the
// phi1 tilt applied), the second over all free nodes.
LoglikResult log_likelihood(const CompiledModel& model,
                            const AttributeData& data,
                            const Eigen::VectorXd& theta,
                            double imputation_tilt, const ClampMask& clamp,
                            const PathSettings& settings);

}  // namespace alaam
