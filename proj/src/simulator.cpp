#include "alaam/simulator.hpp"

#include <bit>
#include <cmath>

#include "alaam/errors.hpp"

namespace alaam {

OutcomeSampler::OutcomeSampler(const CompiledModel& model,
                               Eigen::VectorXd theta,
                               std::vector<std::uint8_t> start,
                               std::vector<std::uint8_t> clamped,
                               Eigen::VectorXd tilt)
    : model_(&model), theta_(std::move(theta)), tilt_(std::move(tilt)),
      y_(std::move(start)), clamped_(std::move(clamped)) {
  const int n = model.graph().node_count();
  if (theta_.size() != model.parameter_count())
    throw DimensionError("theta length does not match model");
  if (static_cast<int>(y_.size()) != n)
    throw DimensionError("start vector length does not match node count");
  if (clamped_.empty()) clamped_.assign(static_cast<std::size_t>(n), 0);
  if (static_cast<int>(clamped_.size()) != n)
    throw DimensionError("clamp mask length does not match node count");
  if (tilt_.size() == 0) tilt_ = Eigen::VectorXd::Zero(n);
  if (tilt_.size() != n)
    throw DimensionError("tilt length does not match node count");
  for (int i = 0; i < n; ++i)
    if (!clamped_[i]) free_.push_back(i);
  if (free_.empty())
    throw PreconditionError("all nodes are clamped, nothing to simulate");
  z_ = model.statistics(y_);
  delta_.resize(model.parameter_count());
}

void OutcomeSampler::set_theta(Eigen::VectorXd theta) {
  if (theta.size() != model_->parameter_count())
    throw DimensionError("theta length does not match model");
  theta_ = std::move(theta);
}

double OutcomeSampler::conditional_probability(int node) const {
  model_->change_statistics(y_, node, delta_);
  const double logit = theta_.dot(delta_) + tilt_[node];
  return 1.0 / (1.0 + std::exp(-logit));
}

void OutcomeSampler::update_node(int node, UpdateRule rule, Rng& rng) {
  model_->change_statistics(y_, node, delta_);
  const double logit = theta_.dot(delta_) + tilt_[node];
  const std::uint8_t old = y_[node];
  std::uint8_t next = old;
  if (rule == UpdateRule::gibbs) {
    const double p = 1.0 / (1.0 + std::exp(-logit));
    next = uniform01(rng) < p ? 1 : 0;
  } else {
    // toggle proposal, accepted with the conditional odds ratio
    const double log_ratio = old ? -logit : logit;
    if (log_ratio >= 0 || uniform01(rng) < std::exp(log_ratio))
      next = old ? 0 : 1;
  }
  if (next != old) {
    y_[node] = next;
    z_ += (next ? 1.0 : -1.0) * delta_;
  }
}

void OutcomeSampler::sweep(UpdateRule rule, Rng& rng) {
  const int n = model_->graph().node_count();
  std::uniform_int_distribution<std::size_t> pick(0, free_.size() - 1);
  for (int s = 0; s < n; ++s) update_node(free_[pick(rng)], rule, rng);
}

void OutcomeSampler::sweep_systematic(UpdateRule rule, Rng& rng) {
  for (int node : free_) update_node(node, rule, rng);
}

void OutcomeSampler::run(int sweeps, UpdateRule rule, Rng& rng,
                         bool systematic) {
  for (int s = 0; s < sweeps; ++s) {
    if (systematic)
      sweep_systematic(rule, rng);
    else
      sweep(rule, rng);
  }
}

namespace {

std::vector<std::uint8_t> initial_state(const CompiledModel& model,
                                        const ClampMask* clamp,
                                        const std::vector<std::uint8_t>* start,
                                        Rng& rng) {
  const int n = model.graph().node_count();
  if (clamp && clamp->node_count() != n)
    throw DimensionError("clamp mask length does not match node count");
  std::vector<std::uint8_t> y(static_cast<std::size_t>(n), 2);
  if (start) {
    if (static_cast<int>(start->size()) != n)
      throw DimensionError("start vector length does not match node count");
    y = *start;
  }
  for (int i = 0; i < n; ++i) {
    if (clamp && clamp->clamped(i)) {
      if (y[i] > 1)
        throw PreconditionError(
            "clamped node " + std::to_string(i) + " needs a start value");
    } else if (y[i] > 1) {
      y[i] = uniform01(rng) < 0.5 ? 1 : 0;
    }
  }
  return y;
}

}  // namespace

SimulationOutput sample(const CompiledModel& model,
                        const Eigen::VectorXd& theta,
                        const SimulationSettings& settings,
                        const ClampMask* clamp,
                        const std::vector<std::uint8_t>* start) {
  if (settings.draws < 0 || settings.burnin < 0 || settings.thin < 1)
    throw PreconditionError("draws >= 0, burnin >= 0, thin >= 1 required");
  Rng rng(settings.seed);
  std::vector<std::uint8_t> y0 = initial_state(model, clamp, start, rng);
  OutcomeSampler chain(model, theta, std::move(y0),
                       clamp ? clamp->mask() : std::vector<std::uint8_t>{});

  SimulationOutput out;
  out.seed = settings.seed;
  if (settings.record_statistics)
    out.statistics.resize(settings.draws, model.parameter_count());
  if (settings.record_outcomes)
    out.outcomes.reserve(static_cast<std::size_t>(settings.draws));

  chain.run(settings.burnin, settings.rule, rng, settings.systematic_scan);
  for (int d = 0; d < settings.draws; ++d) {
    chain.run(settings.thin, settings.rule, rng, settings.systematic_scan);
    if (settings.record_outcomes) out.outcomes.push_back(chain.outcomes());
    if (settings.record_statistics)
      out.statistics.row(d) = chain.statistics().transpose();
  }
  return out;
}

ExactDistribution exact_distribution(const CompiledModel& model,
                                     const Eigen::VectorXd& theta,
                                     const ClampMask* clamp,
                                     const std::vector<std::uint8_t>* base,
                                     const Eigen::VectorXd* tilt,
                                     int max_free) {
  const int n = model.graph().node_count();
  if (theta.size() != model.parameter_count())
    throw DimensionError("theta length does not match model");
  ExactDistribution dist;
  std::vector<std::uint8_t> y(static_cast<std::size_t>(n), 0);
  if (base) {
    if (static_cast<int>(base->size()) != n)
      throw DimensionError("base vector length does not match node count");
    y = *base;
  }
  for (int i = 0; i < n; ++i) {
    if (clamp && clamp->clamped(i)) {
      if (!base || y[i] > 1)
        throw PreconditionError("clamped node " + std::to_string(i) +
                                " needs a base value");
    } else {
      y[i] = 0;
      dist.free_nodes.push_back(i);
    }
  }
  const int f = static_cast<int>(dist.free_nodes.size());
  if (f == 0) throw PreconditionError("all nodes are clamped");
  if (f > max_free)
    throw PreconditionError("exact enumeration supports at most " +
                            std::to_string(max_free) + " free nodes, got " +
                            std::to_string(f));

  const std::uint64_t states = std::uint64_t{1} << f;
  dist.log_probability.resize(static_cast<Eigen::Index>(states));

  // Gray-code walk: consecutive masks differ in one free node, so each step
  // is a single change-statistic evaluation.
  Eigen::VectorXd delta(model.parameter_count());
  double logw = theta.dot(model.statistics(y));
  if (tilt)
    for (int i = 0; i < n; ++i)
      if (y[i]) logw += (*tilt)[i];
  std::uint64_t gray = 0;
  dist.log_probability[0] = logw;
  for (std::uint64_t m = 1; m < states; ++m) {
    const int bit = std::countr_zero(m);
    const int node = dist.free_nodes[static_cast<std::size_t>(bit)];
    model.change_statistics(y, node, delta);
    const double step = theta.dot(delta) + (tilt ? (*tilt)[node] : 0.0);
    if (y[node]) {
      y[node] = 0;
      logw -= step;
      gray &= ~(std::uint64_t{1} << bit);
    } else {
      y[node] = 1;
      logw += step;
      gray |= std::uint64_t{1} << bit;
    }
    dist.log_probability[static_cast<Eigen::Index>(gray)] = logw;
  }

  const double max_logw = dist.log_probability.maxCoeff();
  double sum = 0;
  for (Eigen::Index s = 0; s < dist.log_probability.size(); ++s)
    sum += std::exp(dist.log_probability[s] - max_logw);
  dist.log_normalizer = max_logw + std::log(sum);
  dist.log_probability.array() -= dist.log_normalizer;
  return dist;
}

StatCovariance estimate_stat_covariance(const CompiledModel& model,
                                        const Eigen::VectorXd& theta,
                                        int draws, int burnin_sweeps,
                                        int thin_sweeps, std::uint64_t seed,
                                        const ClampMask* clamp,
                                        const std::vector<std::uint8_t>* start) {
  if (draws < 100)
    throw PreconditionError("statistic covariance needs at least 100 draws");
  SimulationSettings settings;
  settings.burnin = burnin_sweeps;
  settings.thin = thin_sweeps;
  settings.draws = draws;
  settings.seed = seed;
  settings.record_outcomes = false;
  const SimulationOutput sims = sample(model, theta, settings, clamp, start);

  StatCovariance result;
  result.mean = sims.statistics.colwise().mean();
  const Eigen::MatrixXd centered =
      sims.statistics.rowwise() - result.mean.transpose();
  result.covariance =
      (centered.transpose() * centered) / static_cast<double>(draws - 1);
  for (int k = 0; k < result.covariance.rows(); ++k) {
    const double scale = std::max(1.0, result.mean[k] * result.mean[k]);
    if (result.covariance(k, k) <= 1e-12 * scale) result.degenerate.push_back(k);
  }
  return result;
}

}  // namespace alaam
