#include "alaam/path_sampler.hpp"

#include <cmath>

#include "alaam/errors.hpp"
#include "alaam/logistic.hpp"

namespace alaam {

PathEstimate psi_difference(const CompiledModel& model,
                            const Eigen::VectorXd& from,
                            const Eigen::VectorXd& to,
                            const PathSettings& settings,
                            const ClampMask* clamp,
                            const std::vector<std::uint8_t>* base,
                            const Eigen::VectorXd* tilt) {
  const int p = model.parameter_count();
  if (from.size() != p || to.size() != p)
    throw DimensionError("path endpoints do not match model dimension");
  if (settings.bridges < 2)
    throw PreconditionError("path sampler needs at least 2 grid points");
  if (settings.samples < 1)
    throw PreconditionError("path sampler needs at least 1 draw per point");

  const Eigen::VectorXd direction = to - from;
  if (direction.lpNorm<Eigen::Infinity>() == 0) return {0.0, 0.0};

  Rng rng(settings.seed);
  const int n = model.graph().node_count();
  std::vector<std::uint8_t> y(static_cast<std::size_t>(n), 0);
  if (base) {
    if (static_cast<int>(base->size()) != n)
      throw DimensionError("base vector length does not match node count");
    y = *base;
  }
  for (int i = 0; i < n; ++i) {
    if (clamp && clamp->clamped(i)) {
      if (y[i] > 1)
        throw PreconditionError("clamped node " + std::to_string(i) +
                                " needs a base value");
    } else if (y[i] > 1 || base == nullptr) {
      y[i] = uniform01(rng) < 0.5 ? 1 : 0;
    }
  }

  Eigen::VectorXd tilt_vec;
  if (tilt) tilt_vec = *tilt;
  OutcomeSampler chain(model, from, std::move(y),
                       clamp ? clamp->mask() : std::vector<std::uint8_t>{},
                       std::move(tilt_vec));
  chain.run(3 * settings.burnin_sweeps, settings.rule, rng);

  const int B = settings.bridges;
  const int M = settings.samples;
  const double h = 1.0 / (B - 1);
  double integral = 0;
  double variance = 0;
  for (int b = 0; b < B; ++b) {
    const double u = static_cast<double>(b) * h;
    chain.set_theta(from + u * direction);
    chain.run(settings.burnin_sweeps, settings.rule, rng);
    double sum = 0, sumsq = 0;
    for (int m = 0; m < M; ++m) {
      chain.run(settings.thin_sweeps, settings.rule, rng);
      const double v = direction.dot(chain.statistics());
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / M;
    const double var_draws =
        M > 1 ? std::max(0.0, (sumsq - M * mean * mean) / (M - 1)) : 0.0;
    const double weight = (b == 0 || b == B - 1) ? h / 2 : h;
    integral += weight * mean;
    variance += weight * weight * var_draws / M;
  }
  return {integral, std::sqrt(variance)};
}

double independent_log_normalizer(const CompiledModel& model,
                                  const Eigen::VectorXd& theta,
                                  const ClampMask* clamp,
                                  const std::vector<std::uint8_t>* base,
                                  const Eigen::VectorXd* tilt) {
  const int p = model.parameter_count();
  const int n = model.graph().node_count();
  if (theta.size() != p)
    throw DimensionError("theta length does not match model");
  for (int k = 0; k < p; ++k)
    if (model.term_is_dependence(k) && theta[k] != 0)
      throw PreconditionError(
          "closed-form normalizer needs zero dependence parameters");

  const Eigen::MatrixXd design = model.independent_design();
  double psi = 0;
  for (int i = 0; i < n; ++i) {
    const double d = design.row(i).dot(theta) + (tilt ? (*tilt)[i] : 0.0);
    if (clamp && clamp->clamped(i)) {
      if (!base)
        throw PreconditionError("clamped nodes need base values");
      psi += (*base)[static_cast<std::size_t>(i)] ? d : 0.0;
    } else {
      psi += d > 0 ? d + std::log1p(std::exp(-d)) : std::log1p(std::exp(d));
    }
  }
  return psi;
}

PathEstimate path_loglik(const CompiledModel& model,
                         const Eigen::VectorXd& theta,
                         const Eigen::VectorXd& theta_ref,
                         const Eigen::VectorXd& z_obs,
                         const PathSettings& settings, const ClampMask* clamp,
                         const std::vector<std::uint8_t>* base) {
  if (z_obs.size() != model.parameter_count())
    throw DimensionError("observed statistics do not match model dimension");
  const PathEstimate dpsi =
      psi_difference(model, theta_ref, theta, settings, clamp, base, nullptr);
  return {(theta - theta_ref).dot(z_obs) - dpsi.value, dpsi.std_error};
}

namespace {

// Independent anchor for absolute normalizers; extreme MLE coordinates are
// pulled back so the anchor stays numerically usable under separation.
Eigen::VectorXd anchored_reference(const CompiledModel& model,
                                   const AttributeData& data) {
  Eigen::VectorXd ref = fit_independent_mle(model, data).theta;
  for (Eigen::Index k = 0; k < ref.size(); ++k)
    ref[k] = std::clamp(ref[k], -15.0, 15.0);
  return ref;
}

}  // namespace

LoglikResult log_likelihood(const CompiledModel& model,
                            const AttributeData& data,
                            const Eigen::VectorXd& theta,
                            double imputation_tilt, const ClampMask& clamp,
                            const PathSettings& settings) {
  const int n = model.graph().node_count();
  if (clamp.node_count() != n)
    throw DimensionError("clamp mask length does not match node count");

  LoglikResult out;
  out.theta_ref = anchored_reference(model, data);

  // Normalizer over all free nodes.
  PathSettings full_settings = settings;
  full_settings.seed = mix_seed(settings.seed, 1);
  const std::vector<std::uint8_t>& y_obs = data.outcome();
  const double psi_full_ref = independent_log_normalizer(
      model, out.theta_ref, &clamp, &y_obs, nullptr);
  const PathEstimate dpsi_full = psi_difference(
      model, out.theta_ref, theta, full_settings, &clamp, &y_obs, nullptr);

  // Normalizer over the missing coordinates, observed values fixed.
  double psi_obs = 0;
  double se_obs = 0;
  if (data.missing_count() == 0) {
    psi_obs = theta.dot(model.statistics(y_obs));
  } else {
    std::vector<std::uint8_t> observed_mask(static_cast<std::size_t>(n), 1);
    Eigen::VectorXd tilt = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
      if (data.missing()[i]) {
        observed_mask[static_cast<std::size_t>(i)] = 0;
        tilt[i] = imputation_tilt;
      }
    const ClampMask observed_clamp{observed_mask};
    PathSettings miss_settings = settings;
    miss_settings.seed = mix_seed(settings.seed, 2);
    const double psi_miss_ref = independent_log_normalizer(
        model, out.theta_ref, &observed_clamp, &y_obs, &tilt);
    const PathEstimate dpsi_miss =
        psi_difference(model, out.theta_ref, theta, miss_settings,
                       &observed_clamp, &y_obs, &tilt);
    psi_obs = psi_miss_ref + dpsi_miss.value;
    se_obs = dpsi_miss.std_error;
  }

  out.value = psi_obs - (psi_full_ref + dpsi_full.value);
  out.std_error = std::sqrt(se_obs * se_obs +
                            dpsi_full.std_error * dpsi_full.std_error);
  return out;
}

}  // namespace alaam
