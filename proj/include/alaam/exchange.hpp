#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "alaam/attributes.hpp"
#include "alaam/graph.hpp"
#include "alaam/logistic.hpp"
#include "alaam/mechanism.hpp"
#include "alaam/model.hpp"
#include "alaam/prior.hpp"
#include "alaam/rng.hpp"
#include "alaam/simulator.hpp"

namespace alaam {

// Mutable state of one posterior chain.
struct ChainState {
  Eigen::VectorXd theta;
  std::vector<std::uint8_t> y;  // observed values plus current imputations
  Eigen::VectorXd z;            // z(y), maintained incrementally
  Eigen::Vector3d phi = Eigen::Vector3d::Zero();
};

// Log acceptance ratio of the auxiliary-variable move from `theta` to
// `theta_star`, where `z_aux` are the statistics of a draw from the model
// at `theta_star` and `z_data` those of the current data:
//   (theta - theta_star)' (z_aux - z_data) + log pi(theta_star) - log pi(theta)
double exchange_log_acceptance(const Eigen::VectorXd& theta,
                               const Eigen::VectorXd& theta_star,
                               const Eigen::VectorXd& z_data,
                               const Eigen::VectorXd& z_aux,
                               const Prior& prior);

struct AuxiliarySettings {
  int sweeps = 50;
  UpdateRule rule = UpdateRule::gibbs;
  bool systematic_scan = false;
};

struct ExchangeOutcome {
  bool accepted = false;
  std::vector<std::uint8_t> aux_y;  // auxiliary draw (kept either way)
  Eigen::VectorXd aux_stats;
};

// One exchange update of theta.  The auxiliary chain starts from the
// current data vector and respects the clamp mask.
ExchangeOutcome exchange_step(ChainState& state, const CompiledModel& model,
                              const Prior& prior, const Proposal& proposal,
                              const AuxiliarySettings& aux,
                              const std::vector<std::uint8_t>& clamped,
                              Rng& rng);

// Metropolis scan over the missing outcomes in random order.  Each toggle
// is accepted with exp(theta' dz + phi1 * dy).  Returns the number of
// accepted toggles.
int update_missing(ChainState& state, const CompiledModel& model,
                   const MissingMechanism& mechanism,
                   const std::vector<int>& missing_nodes, Rng& rng);

// Random-walk Metropolis update of phi under the full missingness model.
bool update_phi(ChainState& state, const MissingMechanism& mechanism,
                std::span<const std::uint8_t> indicator,
                const DirectedGraph& g, Rng& rng);

struct RunSettings {
  int iterations = 10000;
  AuxiliarySettings auxiliary;
  int tuning_draws = 1000;        // statistic-covariance simulation at theta0
  int tuning_burnin_sweeps = 100;
  int tuning_thin_sweeps = 1;
  double proposal_c = 1.0;
  int pilot_iterations = 0;       // when > 0, proposal is re-estimated from a pilot run
  std::uint64_t seed = 1;
  int chains = 1;
  double divergence_limit = 1e3;  // abort when |theta_k| passes this
  std::optional<Eigen::VectorXd> theta_start;      // default: independent MLE
  std::optional<Eigen::MatrixXd> proposal_covariance;  // overrides tuning
};

// Everything a single chain records.  Draw t reflects the state after the
// full iteration (exchange, missing update, phi update).
struct PosteriorSample {
  std::vector<std::string> term_names;
  Eigen::MatrixXd theta;         // T x p
  Eigen::MatrixXd data_stats;    // T x p, z of the current imputed data
  Eigen::MatrixXd pred_stats;    // T x p, z of the predictive draw
  Eigen::MatrixXd pred_battery;  // T x 15 descriptives of the predictive draw
  Eigen::MatrixXd phi;           // T x 3 when a mechanism is active, else 0 x 0
  std::vector<int> missing_nodes;
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>
      imputations;               // T x |missing|
  std::vector<std::uint8_t> accepted;  // exchange acceptances
  double acceptance_rate = 0;
  double imputation_acceptance_rate = 0;
  double phi_acceptance_rate = 0;
  Eigen::VectorXd theta_tuning;     // independent MLE used for tuning
  Eigen::MatrixXd proposal_covariance;
  std::uint64_t seed = 0;

  int draw_count() const { return static_cast<int>(theta.rows()); }
};

// Full single-chain estimation: tuning, optional pilot, main run.
PosteriorSample run_estimation(const DirectedGraph& g,
                               const AttributeData& data,
                               const ModelSpec& spec, const Prior& prior,
                               const MissingMechanism& mechanism,
                               const ClampMask& clamp,
                               const RunSettings& settings);

// Independent chains with derived seeds (settings.chains of them).
std::vector<PosteriorSample> run_chains(const DirectedGraph& g,
                                        const AttributeData& data,
                                        const ModelSpec& spec,
                                        const Prior& prior,
                                        const MissingMechanism& mechanism,
                                        const ClampMask& clamp,
                                        const RunSettings& settings);

}  // namespace alaam
