#include "alaam/evidence.hpp"

#include <cmath>

#include "alaam/errors.hpp"

namespace alaam {

namespace {

double clamped_accept(double log_ratio) {
  return log_ratio >= 0 ? 1.0 : std::exp(log_ratio);
}

}  // namespace

OrdinateResult posterior_ordinate(const CompiledModel& model,
                                  const AttributeData& data,
                                  const ClampMask& clamp, const Prior& prior,
                                  const Proposal& proposal,
                                  const Eigen::VectorXd& theta_prime,
                                  const PosteriorSample& sample,
                                  double imputation_tilt,
                                  const OrdinateSettings& settings) {
  if (!prior.is_proper())
    throw PreconditionError(
        "evidence requires a proper prior: the posterior ordinate is "
        "undefined under a flat prior");
  const int p = model.parameter_count();
  if (theta_prime.size() != p)
    throw DimensionError("theta_prime length does not match model");
  if (settings.posterior_thin < 1 || settings.posterior_burnin < 0 ||
      settings.posterior_burnin >= sample.draw_count())
    throw PreconditionError("invalid posterior burn-in or thinning");
  if (settings.numerator_draws < 2 || settings.proposal_draws < 2 ||
      settings.draws_per_proposal < 1)
    throw PreconditionError("ordinate sample sizes too small");

  const int n = model.graph().node_count();
  std::vector<std::uint8_t> start = data.outcome();
  for (int i = 0; i < n; ++i)
    if (data.missing()[i]) start[i] = 2;

  // One large auxiliary sample from the model at theta_prime.
  SimulationSettings aux;
  aux.burnin = settings.aux_burnin_sweeps;
  aux.thin = settings.aux_thin_sweeps;
  aux.draws = settings.numerator_draws;
  aux.seed = mix_seed(settings.seed, 21);
  aux.record_outcomes = false;
  const Eigen::MatrixXd z_aux =
      alaam::sample(model, theta_prime, aux, &clamp, &start).statistics;

  const double log_prior_prime = prior.log_density(theta_prime);

  // Numerator: mean over posterior draws and auxiliary draws of the
  // acceptance into theta_prime times the proposal density.
  std::vector<int> rows;
  for (int t = settings.posterior_burnin; t < sample.draw_count();
       t += settings.posterior_thin)
    rows.push_back(t);
  const int T = static_cast<int>(rows.size());
  const int G = settings.numerator_draws;

  double num_sum = 0, num_sumsq = 0;
  Eigen::VectorXd per_g = Eigen::VectorXd::Zero(G);
  for (int idx = 0; idx < T; ++idx) {
    const Eigen::VectorXd theta_t = sample.theta.row(rows[idx]).transpose();
    const Eigen::VectorXd z_data_t =
        sample.data_stats.row(rows[idx]).transpose();
    const Eigen::VectorXd d = theta_t - theta_prime;
    const double base =
        -d.dot(z_data_t) + log_prior_prime - prior.log_density(theta_t);
    const double log_h = proposal.log_density(theta_prime, theta_t);
    const Eigen::VectorXd s = (z_aux * d).array() + base;
    double acc = 0;
    const double h = std::exp(log_h);
    for (int g = 0; g < G; ++g) {
      const double alpha = clamped_accept(s[g]);
      acc += alpha;
      per_g[g] += alpha * h;
    }
    const double a_t = h * acc / G;
    num_sum += a_t;
    num_sumsq += a_t * a_t;
  }
  const double numerator = num_sum / T;
  const double var_t =
      T > 1 ? std::max(0.0, (num_sumsq - T * numerator * numerator) / (T - 1))
            : 0.0;
  per_g /= static_cast<double>(T);
  const double var_g =
      G > 1 ? (per_g.array() - numerator).square().sum() / (G - 1) : 0.0;
  const double num_var = var_t / T + var_g / G;

  // Data-side statistic vectors for the denominator: observed data with
  // conditional imputation draws at theta_prime.
  const int J = settings.proposal_draws;
  const int M = settings.draws_per_proposal;
  Eigen::MatrixXd z_cond(J, p);
  if (data.missing_count() == 0) {
    const Eigen::VectorXd z_obs = model.statistics(data.outcome());
    z_cond.rowwise() = z_obs.transpose();
  } else {
    std::vector<std::uint8_t> observed_mask(static_cast<std::size_t>(n), 1);
    Eigen::VectorXd tilt = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
      if (data.missing()[i]) {
        observed_mask[static_cast<std::size_t>(i)] = 0;
        tilt[i] = imputation_tilt;
      }
    Rng cond_rng(mix_seed(settings.seed, 22));
    std::vector<std::uint8_t> y0 = data.outcome();
    for (int i = 0; i < n; ++i)
      if (data.missing()[i]) y0[i] = uniform01(cond_rng) < 0.5 ? 1 : 0;
    OutcomeSampler cond(model, theta_prime, std::move(y0), observed_mask,
                        tilt);
    cond.run(settings.aux_burnin_sweeps, UpdateRule::gibbs, cond_rng);
    for (int j = 0; j < J; ++j) {
      cond.run(settings.aux_thin_sweeps, UpdateRule::gibbs, cond_rng);
      z_cond.row(j) = cond.statistics().transpose();
    }
  }

  // Denominator: acceptance out of theta_prime toward proposal draws.
  Rng rng(mix_seed(settings.seed, 23));
  double den_sum = 0, den_sumsq = 0;
  for (int j = 0; j < J; ++j) {
    const Eigen::VectorXd theta_j = proposal.sample(theta_prime, rng);
    SimulationSettings jaux;
    jaux.burnin = settings.aux_burnin_sweeps;
    jaux.thin = settings.aux_thin_sweeps;
    jaux.draws = M;
    jaux.seed = mix_seed(settings.seed, 1000 + static_cast<std::uint64_t>(j));
    jaux.record_outcomes = false;
    const Eigen::MatrixXd z_jm =
        alaam::sample(model, theta_j, jaux, &clamp, &start).statistics;
    const Eigen::VectorXd d = theta_prime - theta_j;
    const double base = -d.dot(z_cond.row(j).transpose()) +
                        prior.log_density(theta_j) - log_prior_prime;
    double acc = 0;
    for (int m = 0; m < M; ++m)
      acc += clamped_accept(d.dot(z_jm.row(m).transpose()) + base);
    const double b_j = acc / M;
    den_sum += b_j;
    den_sumsq += b_j * b_j;
  }
  const double denominator = den_sum / J;
  const double den_var =
      (J > 1
           ? std::max(0.0, (den_sumsq - J * denominator * denominator) / (J - 1))
           : 0.0) /
      J;

  if (!(numerator > 0) || !(denominator > 0))
    throw NumericalError("posterior ordinate estimate underflowed");

  OrdinateResult result;
  result.log_numerator = std::log(numerator);
  result.log_denominator = std::log(denominator);
  result.log_ordinate = result.log_numerator - result.log_denominator;
  result.std_error = std::sqrt(num_var / (numerator * numerator) +
                               den_var / (denominator * denominator));
  return result;
}

EvidenceResult evidence_at(const CompiledModel& model,
                           const AttributeData& data, const ClampMask& clamp,
                           const Prior& prior, const Proposal& proposal,
                           const PosteriorSample& sample,
                           double imputation_tilt,
                           const Eigen::VectorXd& theta_prime,
                           const PathSettings& path,
                           const OrdinateSettings& ordinate) {
  EvidenceResult result;
  result.theta_prime = theta_prime;
  if (result.theta_prime.size() == 0) {
    Eigen::VectorXd mean =
        Eigen::VectorXd::Zero(model.parameter_count());
    int count = 0;
    for (int t = ordinate.posterior_burnin; t < sample.draw_count(); ++t) {
      mean += sample.theta.row(t).transpose();
      ++count;
    }
    if (count == 0) throw PreconditionError("no posterior draws");
    result.theta_prime = mean / count;
  }

  const LoglikResult ll = log_likelihood(model, data, result.theta_prime,
                                         imputation_tilt, clamp, path);
  const OrdinateResult ord =
      posterior_ordinate(model, data, clamp, prior, proposal,
                         result.theta_prime, sample, imputation_tilt, ordinate);

  result.log_likelihood = ll.value;
  result.log_likelihood_se = ll.std_error;
  result.log_prior = prior.log_density(result.theta_prime);
  result.log_ordinate = ord.log_ordinate;
  result.ordinate_se = ord.std_error;
  result.log_evidence =
      result.log_likelihood + result.log_prior - result.log_ordinate;
  result.std_error = std::sqrt(ll.std_error * ll.std_error +
                               ord.std_error * ord.std_error);
  return result;
}

std::vector<EvidencePoint> evidence_curve(
    const DirectedGraph& g, const AttributeData& data,
    const std::vector<ModelSpec>& models, const std::vector<double>& lambdas,
    const MissingMechanism& mechanism, const ClampMask& clamp,
    const EvidenceCurveSettings& settings) {
  if (models.empty() || lambdas.empty())
    throw PreconditionError("evidence curve needs models and lambda values");

  std::vector<EvidencePoint> points;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const ModelSpec& spec = models[mi];
    const CompiledModel model(g, spec, data);

    Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(model.parameter_count());
    for (int k = 0; k < model.parameter_count(); ++k)
      if (spec.terms[static_cast<std::size_t>(k)].kind ==
          EffectKind::intercept) {
        mu0[k] = settings.prior_center_intercept;
        break;
      }

    std::vector<std::uint8_t> start = data.outcome();
    for (int i = 0; i < g.node_count(); ++i)
      if (data.missing()[i]) start[i] = 2;
    const StatCovariance sc = estimate_stat_covariance(
        model, mu0, settings.run.tuning_draws,
        settings.run.tuning_burnin_sweeps, settings.run.tuning_thin_sweeps,
        mix_seed(settings.run.seed, 31 + static_cast<std::uint64_t>(mi)),
        &clamp, &start);

    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const double lambda = lambdas[li];
      const Prior prior = Prior::normal_scaled(mu0, lambda, sc.covariance);
      RunSettings rs = settings.run;
      rs.seed = mix_seed(settings.run.seed,
                         1000 * (mi + 1) + static_cast<std::uint64_t>(li));
      const PosteriorSample sample =
          run_estimation(g, data, spec, prior, mechanism, clamp, rs);
      const Proposal proposal(sample.proposal_covariance);

      double tilt = mechanism.imputation_tilt(mechanism.phi);
      if (mechanism.mode == MissingMode::mnar_estimated &&
          sample.phi.rows() > 0) {
        Eigen::Vector3d phi_mean = Eigen::Vector3d::Zero();
        int count = 0;
        for (int t = settings.summary_burnin; t < sample.draw_count(); ++t) {
          phi_mean += sample.phi.row(t).transpose();
          ++count;
        }
        if (count > 0) tilt = phi_mean[1] / count;
      }

      PathSettings path = settings.path;
      path.seed = mix_seed(rs.seed, 41);
      OrdinateSettings ord = settings.ordinate;
      ord.seed = mix_seed(rs.seed, 43);
      ord.posterior_burnin = settings.summary_burnin;

      EvidencePoint point;
      point.model_index = static_cast<int>(mi);
      point.lambda = lambda;
      point.result = evidence_at(model, data, clamp, prior, proposal, sample,
                                 tilt, Eigen::VectorXd(), path, ord);
      points.push_back(std::move(point));
    }
  }
  return points;
}

}  // namespace alaam
