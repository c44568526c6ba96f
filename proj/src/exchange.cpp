#include "alaam/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "alaam/errors.hpp"

namespace alaam {

double exchange_log_acceptance(const Eigen::VectorXd& theta,
                               const Eigen::VectorXd& theta_star,
                               const Eigen::VectorXd& z_data,
                               const Eigen::VectorXd& z_aux,
                               const Prior& prior) {
  return (theta - theta_star).dot(z_aux - z_data) +
         prior.log_density(theta_star) - prior.log_density(theta);
}

ExchangeOutcome exchange_step(ChainState& state, const CompiledModel& model,
                              const Prior& prior, const Proposal& proposal,
                              const AuxiliarySettings& aux,
                              const std::vector<std::uint8_t>& clamped,
                              Rng& rng) {
  const Eigen::VectorXd theta_star = proposal.sample(state.theta, rng);

  OutcomeSampler chain(model, theta_star, state.y, clamped);
  chain.run(aux.sweeps, aux.rule, rng, aux.systematic_scan);

  ExchangeOutcome out;
  out.aux_stats = chain.statistics();
  const double log_acc = exchange_log_acceptance(state.theta, theta_star,
                                                 state.z, out.aux_stats, prior);
  if (log_acc >= 0 || uniform01(rng) < std::exp(log_acc)) {
    state.theta = theta_star;
    out.accepted = true;
  }
  out.aux_y = chain.outcomes();
  return out;
}

int update_missing(ChainState& state, const CompiledModel& model,
                   const MissingMechanism& mechanism,
                   const std::vector<int>& missing_nodes, Rng& rng) {
  if (missing_nodes.empty())
    throw PreconditionError("update_missing needs at least one missing entry");
  std::vector<int> order = missing_nodes;
  std::shuffle(order.begin(), order.end(), rng);

  const double tilt = mechanism.imputation_tilt(state.phi);
  Eigen::VectorXd delta(model.parameter_count());
  int accepted = 0;
  for (int node : order) {
    model.change_statistics(state.y, node, delta);
    const double up = state.theta.dot(delta) + tilt;
    const double log_ratio = state.y[node] ? -up : up;
    if (log_ratio >= 0 || uniform01(rng) < std::exp(log_ratio)) {
      const double sign = state.y[node] ? -1.0 : 1.0;
      state.y[node] ^= 1;
      state.z += sign * delta;
      ++accepted;
    }
  }
  return accepted;
}

bool update_phi(ChainState& state, const MissingMechanism& mechanism,
                std::span<const std::uint8_t> indicator,
                const DirectedGraph& g, Rng& rng) {
  if (mechanism.mode != MissingMode::mnar_estimated)
    throw PreconditionError("phi updates require the MNAR-estimated mode");
  std::normal_distribution<double> gauss;
  Eigen::Vector3d phi_star;
  for (int k = 0; k < 3; ++k)
    phi_star[k] = state.phi[k] + mechanism.phi_step_sd[k] * gauss(rng);

  const double log_ratio =
      mechanism.log_missingness(phi_star, indicator, state.y, g) +
      mechanism.log_phi_prior(phi_star) -
      mechanism.log_missingness(state.phi, indicator, state.y, g) -
      mechanism.log_phi_prior(state.phi);
  if (log_ratio >= 0 || uniform01(rng) < std::exp(log_ratio)) {
    state.phi = phi_star;
    return true;
  }
  return false;
}

namespace {

void check_divergence(const Eigen::VectorXd& theta, double limit) {
  if (!theta.allFinite() || theta.lpNorm<Eigen::Infinity>() > limit)
    throw NumericalError(
        "sampler diverged: |theta| exceeded " + std::to_string(limit) +
        "; the model is likely degenerate or the data separable");
}

}  // namespace

PosteriorSample run_estimation(const DirectedGraph& g,
                               const AttributeData& data,
                               const ModelSpec& spec, const Prior& prior,
                               const MissingMechanism& mechanism,
                               const ClampMask& clamp,
                               const RunSettings& settings) {
  const CompiledModel model(g, spec, data);
  const int p = model.parameter_count();
  if (prior.dim() != p)
    throw DimensionError("prior dimension does not match model");
  if (settings.iterations <= 0)
    throw PreconditionError("iterations must be positive");
  if (data.observed_count() == 0)
    throw PreconditionError("estimation needs at least one observed outcome");
  if (clamp.node_count() != g.node_count())
    throw DimensionError("clamp mask length does not match node count");
  for (int i = 0; i < g.node_count(); ++i)
    if (clamp.clamped(i) && data.missing()[i])
      throw PreconditionError("cannot clamp node " + std::to_string(i) +
                              ": outcome is missing");

  // Tuning point: MLE of the nested independent submodel.
  const LogisticFit fit = fit_independent_mle(model, data);
  const Eigen::VectorXd theta0 =
      settings.theta_start ? *settings.theta_start : fit.theta;
  if (theta0.size() != p)
    throw DimensionError("starting theta does not match model");

  // Start vector: observed outcomes with fair-coin imputations (value 2
  // requests a coin flip inside the tuning simulation as well).
  std::vector<std::uint8_t> start = data.outcome();
  for (int i = 0; i < g.node_count(); ++i)
    if (data.missing()[i]) start[i] = 2;

  Proposal proposal = [&] {
    if (settings.proposal_covariance)
      return Proposal(*settings.proposal_covariance);
    const StatCovariance sc = estimate_stat_covariance(
        model, theta0, settings.tuning_draws, settings.tuning_burnin_sweeps,
        settings.tuning_thin_sweeps, mix_seed(settings.seed, 7), &clamp,
        &start);
    return Proposal::from_stat_covariance(sc.covariance, settings.proposal_c);
  }();

  Rng rng(mix_seed(settings.seed, 11));
  Rng rng_phi(mix_seed(settings.seed, 13));

  ChainState state;
  state.theta = theta0;
  state.y = data.outcome();
  const std::vector<int> missing_nodes = data.missing_nodes();
  for (int node : missing_nodes)
    state.y[static_cast<std::size_t>(node)] = uniform01(rng) < 0.5 ? 1 : 0;
  state.z = model.statistics(state.y);
  state.phi = mechanism.phi;

  const int m = static_cast<int>(missing_nodes.size());
  const bool track_phi = mechanism.active();
  const int T = settings.iterations;

  PosteriorSample out;
  out.term_names = spec.term_names();
  out.seed = settings.seed;
  out.theta_tuning = fit.theta;
  out.missing_nodes = missing_nodes;
  out.theta.resize(T, p);
  out.data_stats.resize(T, p);
  out.pred_stats.resize(T, p);
  out.pred_battery.resize(T, kGofBatterySize);
  out.accepted.assign(static_cast<std::size_t>(T), 0);
  if (track_phi) out.phi.resize(T, 3);
  if (m > 0) out.imputations.resize(T, m);

  Eigen::VectorXd pred_stats = state.z;
  Eigen::VectorXd pred_battery = gof_statistics(state.y, g);

  long exchange_accepts = 0;
  long imputation_accepts = 0;
  long imputation_proposals = 0;
  long phi_accepts = 0;
  long phi_proposals = 0;

  const int total_iterations = settings.pilot_iterations + T;
  Eigen::MatrixXd pilot_draws(settings.pilot_iterations, p);
  for (int it = 0; it < total_iterations; ++it) {
    if (it == settings.pilot_iterations && settings.pilot_iterations > 0) {
      // Replace the proposal with the pilot posterior covariance.
      const Eigen::VectorXd mean = pilot_draws.colwise().mean();
      const Eigen::MatrixXd centered = pilot_draws.rowwise() - mean.transpose();
      Eigen::MatrixXd cov =
          centered.transpose() * centered /
          std::max(1.0, static_cast<double>(settings.pilot_iterations - 1));
      proposal = Proposal(std::move(cov));
    }

    const ExchangeOutcome ex = exchange_step(
        state, model, prior, proposal, settings.auxiliary, clamp.mask(), rng);
    check_divergence(state.theta, settings.divergence_limit);
    if (ex.accepted) {
      pred_stats = ex.aux_stats;
      pred_battery = gof_statistics(ex.aux_y, g);
    }
    int imputation_accepted = 0;
    if (m > 0)
      imputation_accepted =
          update_missing(state, model, mechanism, missing_nodes, rng);
    int phi_accepted = -1;
    if (mechanism.mode == MissingMode::mnar_estimated)
      phi_accepted =
          update_phi(state, mechanism, data.missing(), g, rng_phi) ? 1 : 0;

    if (it < settings.pilot_iterations) {
      pilot_draws.row(it) = state.theta.transpose();
      continue;
    }
    if (m > 0) {
      imputation_accepts += imputation_accepted;
      imputation_proposals += m;
    }
    if (phi_accepted >= 0) {
      phi_accepts += phi_accepted;
      ++phi_proposals;
    }
    const int t = it - settings.pilot_iterations;
    out.theta.row(t) = state.theta.transpose();
    out.data_stats.row(t) = state.z.transpose();
    out.pred_stats.row(t) = pred_stats.transpose();
    out.pred_battery.row(t) = pred_battery.transpose();
    out.accepted[static_cast<std::size_t>(t)] = ex.accepted ? 1 : 0;
    exchange_accepts += ex.accepted ? 1 : 0;
    if (track_phi) out.phi.row(t) = state.phi.transpose();
    for (int k = 0; k < m; ++k)
      out.imputations(t, k) =
          state.y[static_cast<std::size_t>(missing_nodes[k])];
  }

  out.acceptance_rate = static_cast<double>(exchange_accepts) / T;
  out.imputation_acceptance_rate =
      imputation_proposals > 0
          ? static_cast<double>(imputation_accepts) / imputation_proposals
          : 0.0;
  out.phi_acceptance_rate =
      phi_proposals > 0 ? static_cast<double>(phi_accepts) / phi_proposals
                        : 0.0;
  out.proposal_covariance = proposal.covariance();
  return out;
}

std::vector<PosteriorSample> run_chains(const DirectedGraph& g,
                                        const AttributeData& data,
                                        const ModelSpec& spec,
                                        const Prior& prior,
                                        const MissingMechanism& mechanism,
                                        const ClampMask& clamp,
                                        const RunSettings& settings) {
  const int chains = std::max(1, settings.chains);
  std::vector<PosteriorSample> results(static_cast<std::size_t>(chains));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(chains));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(chains));
  for (int c = 0; c < chains; ++c) {
    workers.emplace_back([&, c] {
      try {
        RunSettings chain_settings = settings;
        chain_settings.chains = 1;
        chain_settings.seed = mix_seed(settings.seed, 101 + c);
        results[static_cast<std::size_t>(c)] = run_estimation(
            g, data, spec, prior, mechanism, clamp, chain_settings);
      } catch (...) {
        failures[static_cast<std::size_t>(c)] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return results;
}

}  // namespace alaam
