#include "alaam/deviance.hpp"

#include <algorithm>
#include <cmath>

#include "alaam/errors.hpp"

namespace alaam {

DicResult dic_from_deviances(const Eigen::VectorXd& deviance,
                             double deviance_at_mean) {
  if (deviance.size() == 0)
    throw PreconditionError("no deviance draws");
  DicResult r;
  r.d_bar = deviance.mean();
  r.d_at_mean = deviance_at_mean;
  r.p_d = r.d_bar - r.d_at_mean;
  const double n = static_cast<double>(deviance.size());
  const double var =
      n > 1 ? (deviance.array() - r.d_bar).square().sum() / (n - 1) : 0.0;
  r.p_v = var / 2;
  r.dic_pd = r.d_bar + r.p_d;
  r.dic_pv = r.d_bar + r.p_v;
  return r;
}

namespace {

// l(theta) - l(reference), sharing the reference across calls.  For
// complete data a single bridge suffices; with missing outcomes the
// missing-coordinate normalizer is bridged as well.
double relative_loglik(const CompiledModel& model, const AttributeData& data,
                       const ClampMask& clamp, const ClampMask* observed_clamp,
                       const Eigen::VectorXd* tilt,
                       const Eigen::VectorXd& theta_ref,
                       const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& z_obs,
                       const PathSettings& path, std::uint64_t draw_stream) {
  PathSettings full = path;
  full.seed = mix_seed(path.seed, 2 * draw_stream);
  const std::vector<std::uint8_t>& y_obs = data.outcome();
  const PathEstimate dpsi_full = psi_difference(
      model, theta_ref, theta, full, &clamp, &y_obs, nullptr);
  if (!observed_clamp)
    return (theta - theta_ref).dot(z_obs) - dpsi_full.value;

  PathSettings miss = path;
  miss.seed = mix_seed(path.seed, 2 * draw_stream + 1);
  const PathEstimate dpsi_miss = psi_difference(
      model, theta_ref, theta, miss, observed_clamp, &y_obs, tilt);
  return dpsi_miss.value - dpsi_full.value;
}

}  // namespace

std::pair<DevianceSample, DicResult> deviance_and_dic(
    const CompiledModel& model, const AttributeData& data,
    const ClampMask& clamp, const PosteriorSample& sample,
    double imputation_tilt, const DevianceSettings& settings) {
  if (settings.thin < 1) throw PreconditionError("thin must be >= 1");
  if (settings.burnin < 0 || settings.burnin >= sample.draw_count())
    throw PreconditionError("no posterior draws remain after burn-in");

  const int n = model.graph().node_count();
  DevianceSample dev;
  dev.theta_ref = fit_independent_mle(model, data).theta;
  for (Eigen::Index k = 0; k < dev.theta_ref.size(); ++k)
    dev.theta_ref[k] = std::clamp(dev.theta_ref[k], -15.0, 15.0);

  ClampMask observed_clamp;
  Eigen::VectorXd tilt;
  const bool has_missing = data.missing_count() > 0;
  if (has_missing) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n), 1);
    tilt = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
      if (data.missing()[i]) {
        mask[static_cast<std::size_t>(i)] = 0;
        tilt[i] = imputation_tilt;
      }
    observed_clamp = ClampMask(std::move(mask));
  }
  const Eigen::VectorXd z_obs = model.statistics(data.outcome());

  std::vector<int> rows;
  for (int t = settings.burnin; t < sample.draw_count(); t += settings.thin)
    rows.push_back(t);

  dev.deviance.resize(static_cast<Eigen::Index>(rows.size()));
  Eigen::VectorXd theta_bar = Eigen::VectorXd::Zero(model.parameter_count());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Eigen::VectorXd theta = sample.theta.row(rows[i]).transpose();
    theta_bar += theta;
    const double ll = relative_loglik(
        model, data, clamp, has_missing ? &observed_clamp : nullptr,
        has_missing ? &tilt : nullptr, dev.theta_ref, theta, z_obs,
        settings.path, static_cast<std::uint64_t>(i) + 1);
    dev.deviance[static_cast<Eigen::Index>(i)] = -2 * ll;
  }
  theta_bar /= static_cast<double>(rows.size());
  const double ll_mean = relative_loglik(
      model, data, clamp, has_missing ? &observed_clamp : nullptr,
      has_missing ? &tilt : nullptr, dev.theta_ref, theta_bar, z_obs,
      settings.path, 0);
  dev.deviance_at_mean = -2 * ll_mean;

  return {dev, dic_from_deviances(dev.deviance, dev.deviance_at_mean)};
}

std::vector<std::pair<double, double>> deviance_cdf(
    const Eigen::VectorXd& deviance) {
  std::vector<double> values(deviance.data(), deviance.data() + deviance.size());
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> cdf;
  cdf.reserve(values.size());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    cdf.emplace_back(values[i], static_cast<double>(i + 1) / n);
  return cdf;
}

}  // namespace alaam
