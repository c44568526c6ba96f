#include "alaam/mechanism.hpp"

#include <cmath>

#include "alaam/errors.hpp"

namespace alaam {

MissingMechanism MissingMechanism::mnar_fixed(const Eigen::Vector3d& phi_value) {
  MissingMechanism m;
  m.mode = MissingMode::mnar_fixed;
  m.phi = phi_value;
  return m;
}

MissingMechanism MissingMechanism::mnar_estimated(
    const Eigen::Vector3d& prior_mean, const Eigen::Vector3d& prior_sd,
    const Eigen::Vector3d& step_sd) {
  for (int k = 0; k < 3; ++k) {
    if (!(prior_sd[k] > 0))
      throw PreconditionError("phi prior sd must be positive");
    if (!(step_sd[k] > 0))
      throw PreconditionError("phi proposal sd must be positive");
  }
  MissingMechanism m;
  m.mode = MissingMode::mnar_estimated;
  m.phi = prior_mean;
  m.phi_prior_mean = prior_mean;
  m.phi_prior_sd = prior_sd;
  m.phi_step_sd = step_sd;
  return m;
}

double MissingMechanism::log_missingness(const Eigen::Vector3d& phi_value,
                                         std::span<const std::uint8_t> indicator,
                                         std::span<const std::uint8_t> y,
                                         const DirectedGraph& g) const {
  if (indicator.size() != y.size() ||
      static_cast<int>(y.size()) != g.node_count())
    throw DimensionError("indicator, outcome, and graph sizes disagree");
  double ll = 0;
  for (int i = 0; i < g.node_count(); ++i) {
    const double eta =
        phi_value[0] + phi_value[1] * y[i] + phi_value[2] * g.in_degree(i);
    const double softplus = eta > 0 ? eta + std::log1p(std::exp(-eta))
                                    : std::log1p(std::exp(eta));
    ll += indicator[i] * eta - softplus;
  }
  return ll;
}

double MissingMechanism::log_phi_prior(const Eigen::Vector3d& phi_value) const {
  double ll = 0;
  for (int k = 0; k < 3; ++k) {
    const double z = (phi_value[k] - phi_prior_mean[k]) / phi_prior_sd[k];
    ll += -0.5 * z * z - std::log(phi_prior_sd[k]);
  }
  return ll;  // constant terms omitted, only ratios are used
}

}  // namespace alaam
