#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "alaam/errors.hpp"
#include "alaam/exchange.hpp"
#include "alaam/logistic.hpp"

#include "helpers.hpp"

using namespace alaam;

namespace {

double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Normalized posterior CDF of an intercept-only model on a grid:
// log f(t) = t*s - n*softplus(t) + log prior(t).
struct GridPosterior {
  std::vector<double> grid, cdf;

  GridPosterior(int n, double s, const Prior& prior, double lo, double hi,
                int points) {
    grid.resize(static_cast<std::size_t>(points));
    std::vector<double> logf(grid.size());
    Eigen::VectorXd t(1);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      grid[k] = lo + (hi - lo) * static_cast<double>(k) /
                         static_cast<double>(points - 1);
      t[0] = grid[k];
      logf[k] = grid[k] * s - n * softplus(grid[k]) + prior.log_density(t);
    }
    const double peak = *std::max_element(logf.begin(), logf.end());
    cdf.resize(grid.size(), 0.0);
    const double h = (hi - lo) / (points - 1);
    for (std::size_t k = 1; k < grid.size(); ++k)
      cdf[k] = cdf[k - 1] + 0.5 * h * (std::exp(logf[k - 1] - peak) +
                                       std::exp(logf[k] - peak));
    const double total = cdf.back();
    for (double& c : cdf) c /= total;
  }

  double operator()(double x) const {
    if (x <= grid.front()) return 0;
    if (x >= grid.back()) return 1;
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - grid.begin());
    const double w = (x - grid[k - 1]) / (grid[k] - grid[k - 1]);
    return cdf[k - 1] + w * (cdf[k] - cdf[k - 1]);
  }
};

double ks_statistic(std::vector<double> draws, const GridPosterior& cdf) {
  std::sort(draws.begin(), draws.end());
  const double T = static_cast<double>(draws.size());
  double d = 0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = cdf(draws[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1) / T - f));
    d = std::max(d, std::abs(static_cast<double>(i) / T - f));
  }
  return d;
}

}  // namespace

TEST_CASE("exchange log acceptance is the stated identity") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 25; ++rep) {
    Eigen::VectorXd theta(3), star(3), z_data(3), z_aux(3);
    for (int k = 0; k < 3; ++k) {
      theta[k] = gauss(rng);
      star[k] = gauss(rng);
      z_data[k] = gauss(rng) * 4;
      z_aux[k] = gauss(rng) * 4;
    }
    const Prior flat = Prior::flat(3);
    CHECK(exchange_log_acceptance(theta, star, z_data, z_aux, flat) ==
          doctest::Approx((theta - star).dot(z_aux - z_data)).epsilon(1e-12));

    const Prior normal =
        Prior::normal(Eigen::VectorXd::Zero(3),
                      Eigen::MatrixXd::Identity(3, 3) * 2.5);
    const double want = (theta - star).dot(z_aux - z_data) +
                        normal.log_density(star) - normal.log_density(theta);
    CHECK(exchange_log_acceptance(theta, star, z_data, z_aux, normal) ==
          doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("intercept-only posterior matches quadrature") {
  const DirectedGraph g = testutil::cycle_graph(8);
  std::vector<std::uint8_t> y = {1, 0, 1, 1, 0, 0, 1, 0};
  const AttributeData data = testutil::make_data(y);
  const ModelSpec spec = ModelSpec::parse({"intercept"});
  const Prior prior =
      Prior::normal(Eigen::VectorXd::Zero(1),
                    Eigen::MatrixXd::Identity(1, 1) * 4.0);

  RunSettings settings;
  settings.iterations = 20000;
  settings.seed = 321;
  const PosteriorSample sample =
      run_estimation(g, data, spec, prior, MissingMechanism::mar(),
                     ClampMask(std::vector<std::uint8_t>(8, 0)), settings);

  REQUIRE(sample.theta.rows() == 20000);
  CHECK(sample.acceptance_rate > 0.05);
  CHECK(sample.acceptance_rate < 0.95);

  std::vector<double> draws;
  for (int t = 2000; t < 20000; ++t) draws.push_back(sample.theta(t, 0));
  const GridPosterior posterior(8, 4.0, prior, -10, 10, 4001);
  CHECK(ks_statistic(draws, posterior) < 0.05);

  // rejection carries the whole state forward; the data vector is fixed
  const Eigen::VectorXd z = Eigen::VectorXd::Constant(1, 4.0);
  for (int t = 0; t < sample.theta.rows(); ++t)
    CHECK(sample.data_stats(t, 0) == z[0]);
  for (int t = 1; t < sample.theta.rows(); ++t) {
    if (!sample.accepted[static_cast<std::size_t>(t)]) {
      CHECK(sample.theta(t, 0) == sample.theta(t - 1, 0));
      CHECK(sample.pred_stats(t, 0) == sample.pred_stats(t - 1, 0));
    }
  }
  double rate = 0;
  for (std::uint8_t a : sample.accepted) rate += a;
  CHECK(sample.acceptance_rate ==
        doctest::Approx(rate / static_cast<double>(sample.accepted.size())));
}

TEST_CASE("missing-outcome scans reach the tilted conditional law") {
  std::mt19937_64 graph_rng(91);
  const oracle::DenseGraph dense = oracle::random_graph(8, 0.4, graph_rng);
  const DirectedGraph g = testutil::to_graph(dense);
  const AttributeData data = testutil::make_data(std::vector<std::uint8_t>(8, 0));
  const ModelSpec spec = ModelSpec::parse({"intercept", "contagion"});
  const CompiledModel model(g, spec, data);

  Eigen::VectorXd theta(2);
  theta << -0.2, 0.4;
  const std::vector<int> missing = {1, 4, 6};
  std::vector<std::uint8_t> base = {1, 0, 0, 1, 0, 1, 0, 0};

  auto stat = [&](const oracle::Outcome& v) {
    Eigen::VectorXd z(2);
    z[0] = oracle::catalog_stat(dense, v, "intercept");
    z[1] = oracle::catalog_stat(dense, v, "contagion");
    return z;
  };

  struct Case {
    MissingMechanism mechanism;
    double tilt;
  };
  const Case cases[] = {
      {MissingMechanism::mnar_fixed(Eigen::Vector3d(0.0, 1.5, 0.0)), 1.5},
      {MissingMechanism::mar(), 0.0},
  };

  for (const Case& c : cases) {
    ChainState state;
    state.theta = theta;
    state.y = base;
    state.z = model.statistics(state.y);
    state.phi = c.mechanism.phi;

    Eigen::VectorXd tilt = Eigen::VectorXd::Zero(8);
    for (int i : missing) tilt[i] = c.tilt;
    const oracle::Enumeration e =
        oracle::enumerate_states(8, missing, base, theta, stat, &tilt);

    Rng rng(2024);
    std::vector<double> counts(8, 0.0);
    const int scans = 200000;
    for (int rep = 0; rep < scans; ++rep) {
      update_missing(state, model, c.mechanism, missing, rng);
      std::size_t s = 0;
      for (std::size_t b = 0; b < missing.size(); ++b)
        if (state.y[static_cast<std::size_t>(missing[b])]) s |= 1u << b;
      counts[s] += 1;
    }

    double tv = 0;
    for (std::size_t s = 0; s < 8; ++s)
      tv += std::abs(counts[s] / scans -
                     std::exp(e.log_weight[s] - e.log_normalizer));
    CHECK(tv / 2 < 0.025);

    // incremental statistics never drift from a recount
    const Eigen::VectorXd recount = model.statistics(state.y);
    CHECK(state.z[0] == doctest::Approx(recount[0]).epsilon(1e-12));
    CHECK(state.z[1] == doctest::Approx(recount[1]).epsilon(1e-12));
    for (int i = 0; i < 8; ++i)
      if (std::find(missing.begin(), missing.end(), i) == missing.end())
        CHECK(state.y[static_cast<std::size_t>(i)] ==
              base[static_cast<std::size_t>(i)]);
  }

  ChainState state;
  state.theta = theta;
  state.y = base;
  state.z = model.statistics(state.y);
  Rng rng(1);
  CHECK_THROWS_AS(update_missing(state, model, cases[1].mechanism, {}, rng),
                  PreconditionError);
}

TEST_CASE("phi sampler agrees with grid quadrature of its target") {
  std::mt19937_64 setup(400);
  const oracle::DenseGraph dense = oracle::random_graph(60, 0.08, setup);
  const DirectedGraph g = testutil::to_graph(dense);

  std::vector<std::uint8_t> y(60), indicator(60);
  for (int i = 0; i < 60; ++i) {
    y[static_cast<std::size_t>(i)] = setup() % 2;
    const double eta = -1.0 + 1.2 * y[static_cast<std::size_t>(i)] +
                       0.3 * g.in_degree(i);
    indicator[static_cast<std::size_t>(i)] =
        std::bernoulli_distribution(1.0 / (1.0 + std::exp(-eta)))(setup);
  }

  const MissingMechanism mechanism = MissingMechanism::mnar_estimated(
      Eigen::Vector3d::Zero(), Eigen::Vector3d::Constant(5.0),
      Eigen::Vector3d::Constant(0.2));

  // 3-d trapezoid quadrature of exp{log f(I|y,phi) + log prior(phi)}
  const int points = 49;
  const double lo = -6, hi = 6;
  auto node = [&](int k) {
    return lo + (hi - lo) * k / static_cast<double>(points - 1);
  };
  auto weight = [&](int k) { return (k == 0 || k == points - 1) ? 0.5 : 1.0; };
  double mass = 0;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (int a = 0; a < points; ++a)
    for (int b = 0; b < points; ++b)
      for (int c = 0; c < points; ++c) {
        const Eigen::Vector3d phi(node(a), node(b), node(c));
        const double w =
            weight(a) * weight(b) * weight(c) *
            std::exp(mechanism.log_missingness(phi, indicator, y, g) +
                     mechanism.log_phi_prior(phi) + 40.0);
        mass += w;
        mean += w * phi;
      }
  mean /= mass;

  ChainState state;
  state.theta = Eigen::VectorXd::Zero(1);
  state.z = Eigen::VectorXd::Zero(1);
  state.y = y;
  state.phi = Eigen::Vector3d::Zero();
  Rng rng(77);
  Eigen::Vector3d chain_mean = Eigen::Vector3d::Zero();
  int accepted = 0;
  const int iterations = 200000;
  for (int it = 0; it < iterations; ++it) {
    accepted += update_phi(state, mechanism, indicator, g, rng);
    chain_mean += state.phi;
  }
  chain_mean /= iterations;

  CHECK(accepted > iterations / 20);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(chain_mean[k] - mean[k]) < 0.15);
}

TEST_CASE("complete data makes the mechanism invisible to theta") {
  const DirectedGraph g = testutil::cycle_graph(10);
  std::vector<std::uint8_t> y = {1, 0, 0, 1, 1, 0, 1, 0, 0, 1};
  const AttributeData data = testutil::make_data(y);
  const ModelSpec spec = ModelSpec::parse({"intercept", "contagion"});
  const Prior prior =
      Prior::normal(Eigen::VectorXd::Zero(2),
                    Eigen::MatrixXd::Identity(2, 2) * 9.0);
  const ClampMask clamp(std::vector<std::uint8_t>(10, 0));

  RunSettings settings;
  settings.iterations = 800;
  settings.seed = 99;

  const PosteriorSample mar = run_estimation(
      g, data, spec, prior, MissingMechanism::mar(), clamp, settings);
  const PosteriorSample mnar = run_estimation(
      g, data, spec, prior,
      MissingMechanism::mnar_estimated(Eigen::Vector3d::Zero(),
                                       Eigen::Vector3d::Constant(5.0),
                                       Eigen::Vector3d::Constant(0.2)),
      clamp, settings);

  CHECK((mar.theta.array() == mnar.theta.array()).all());
  CHECK((mar.pred_stats.array() == mnar.pred_stats.array()).all());
  CHECK(mnar.phi.rows() == 800);  // phi is tracked even without missing data
}

TEST_CASE("runs are reproducible and validated") {
  const DirectedGraph g = testutil::cycle_graph(12);
  std::vector<std::uint8_t> y = {1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0};
  const AttributeData data = testutil::make_data(y);
  const ModelSpec spec = ModelSpec::parse({"intercept", "contagion"});
  const Prior prior = Prior::flat(2);
  const ClampMask clamp(std::vector<std::uint8_t>(12, 0));
  const MissingMechanism mar = MissingMechanism::mar();

  RunSettings settings;
  settings.iterations = 400;
  settings.seed = 17;
  const PosteriorSample a = run_estimation(g, data, spec, prior, mar, clamp,
                                           settings);
  const PosteriorSample b = run_estimation(g, data, spec, prior, mar, clamp,
                                           settings);
  CHECK((a.theta.array() == b.theta.array()).all());
  CHECK(a.seed == b.seed);

  settings.seed = 18;
  const PosteriorSample c = run_estimation(g, data, spec, prior, mar, clamp,
                                           settings);
  CHECK_FALSE((a.theta.array() == c.theta.array()).all());

  settings.seed = 17;
  settings.iterations = 0;
  CHECK_THROWS_AS(
      run_estimation(g, data, spec, prior, mar, clamp, settings),
      PreconditionError);
  settings.iterations = 400;

  CHECK_THROWS_AS(run_estimation(g, data, spec, Prior::flat(3), mar, clamp,
                                 settings),
                  DimensionError);

  AttributeData all_missing = testutil::make_data(
      std::vector<std::uint8_t>(12, 0), {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
  CHECK_THROWS_AS(run_estimation(g, all_missing, spec, prior, mar, clamp,
                                 settings),
                  PreconditionError);

  AttributeData one_missing =
      testutil::make_data(std::vector<std::uint8_t>(12, 0), {3});
  std::vector<std::uint8_t> clamped(12, 0);
  clamped[3] = 1;
  CHECK_THROWS_AS(run_estimation(g, one_missing, spec, prior, mar,
                                 ClampMask(clamped), settings),
                  PreconditionError);

  settings.theta_start = Eigen::VectorXd::Constant(2, 5.0);
  settings.divergence_limit = 1.0;
  CHECK_THROWS_AS(run_estimation(g, data, spec, prior, mar, clamp, settings),
                  NumericalError);
}

TEST_CASE("a pilot stage re-estimates the proposal covariance") {
  const DirectedGraph g = testutil::cycle_graph(10);
  std::vector<std::uint8_t> y = {1, 0, 0, 1, 1, 0, 1, 0, 0, 1};
  const AttributeData data = testutil::make_data(y);
  const ModelSpec spec = ModelSpec::parse({"intercept"});
  const Prior prior =
      Prior::normal(Eigen::VectorXd::Zero(1),
                    Eigen::MatrixXd::Identity(1, 1) * 4.0);
  const ClampMask clamp(std::vector<std::uint8_t>(10, 0));

  RunSettings settings;
  settings.iterations = 300;
  settings.seed = 5;
  const PosteriorSample plain = run_estimation(
      g, data, spec, prior, MissingMechanism::mar(), clamp, settings);

  settings.pilot_iterations = 400;
  const PosteriorSample piloted = run_estimation(
      g, data, spec, prior, MissingMechanism::mar(), clamp, settings);

  CHECK(plain.theta.rows() == 300);
  CHECK(piloted.theta.rows() == 300);
  CHECK(piloted.proposal_covariance(0, 0) !=
        doctest::Approx(plain.proposal_covariance(0, 0)).epsilon(1e-12));
  CHECK(piloted.proposal_covariance(0, 0) > 0);
}

TEST_CASE("parallel chains differ but start from the same fit") {
  const DirectedGraph g = testutil::cycle_graph(10);
  std::vector<std::uint8_t> y = {1, 0, 0, 1, 1, 0, 1, 0, 0, 1};
  const AttributeData data = testutil::make_data(y);
  const ModelSpec spec = ModelSpec::parse({"intercept"});
  const Prior prior = Prior::flat(1);
  const ClampMask clamp(std::vector<std::uint8_t>(10, 0));

  RunSettings settings;
  settings.iterations = 200;
  settings.chains = 3;
  settings.seed = 50;
  const std::vector<PosteriorSample> chains = run_chains(
      g, data, spec, prior, MissingMechanism::mar(), clamp, settings);
  REQUIRE(chains.size() == 3);
  for (const PosteriorSample& s : chains) CHECK(s.theta.rows() == 200);
  CHECK(chains[0].seed != chains[1].seed);
  CHECK_FALSE((chains[0].theta.array() == chains[1].theta.array()).all());
  CHECK((chains[0].theta_tuning.array() == chains[1].theta_tuning.array())
            .all());
}

TEST_CASE("independent-submodel fit matches a reference IRLS") {
  std::mt19937_64 rng(606);
  std::normal_distribution<double> gauss;
  const int n = 200;
  const DirectedGraph g = testutil::cycle_graph(n);

  std::vector<double> x(n);
  std::vector<std::uint8_t> y(n);
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = gauss(rng);
    const double p =
        1.0 / (1.0 + std::exp(0.4 - 0.9 * x[static_cast<std::size_t>(i)]));
    y[static_cast<std::size_t>(i)] =
        std::bernoulli_distribution(p)(rng) ? 1 : 0;
  }

  SUBCASE("complete data") {
    AttributeData data = testutil::make_data(y);
    data.add_covariate("x", x);
    const ModelSpec spec =
        ModelSpec::parse({"intercept", "covariate(x)", "contagion"});
    const CompiledModel model(g, spec, data);
    const LogisticFit fit = fit_independent_mle(model, data);
    REQUIRE(fit.converged);
    CHECK(fit.theta[2] == 0.0);

    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd response(n);
    for (int i = 0; i < n; ++i) {
      design(i, 0) = 1;
      design(i, 1) = x[static_cast<std::size_t>(i)];
      response[i] = y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd beta = oracle::irls_logistic(design, response);
    CHECK(fit.theta[0] == doctest::Approx(beta[0]).epsilon(1e-6));
    CHECK(fit.theta[1] == doctest::Approx(beta[1]).epsilon(1e-6));
  }

  SUBCASE("missing outcomes are excluded") {
    std::vector<int> missing = {3, 17, 59, 101, 160};
    AttributeData data = testutil::make_data(y, missing);
    data.add_covariate("x", x);
    const ModelSpec spec =
        ModelSpec::parse({"intercept", "covariate(x)", "contagion"});
    const CompiledModel model(g, spec, data);
    const LogisticFit fit = fit_independent_mle(model, data);
    REQUIRE(fit.converged);

    Eigen::MatrixXd design(n - 5, 2);
    Eigen::VectorXd response(n - 5);
    int r = 0;
    for (int i = 0; i < n; ++i) {
      if (std::find(missing.begin(), missing.end(), i) != missing.end())
        continue;
      design(r, 0) = 1;
      design(r, 1) = x[static_cast<std::size_t>(i)];
      response[r] = y[static_cast<std::size_t>(i)];
      ++r;
    }
    const Eigen::VectorXd beta = oracle::irls_logistic(design, response);
    CHECK(fit.theta[0] == doctest::Approx(beta[0]).epsilon(1e-6));
    CHECK(fit.theta[1] == doctest::Approx(beta[1]).epsilon(1e-6));
  }
}

TEST_CASE("missingness model log densities match direct formulas") {
  std::mt19937_64 rng(31);
  const oracle::DenseGraph dense = oracle::random_graph(15, 0.3, rng);
  const DirectedGraph g = testutil::to_graph(dense);
  std::vector<std::uint8_t> y(15), indicator(15);
  for (int i = 0; i < 15; ++i) {
    y[static_cast<std::size_t>(i)] = rng() % 2;
    indicator[static_cast<std::size_t>(i)] = rng() % 3 == 0;
  }

  const MissingMechanism mechanism = MissingMechanism::mnar_estimated(
      Eigen::Vector3d(0.1, -0.2, 0.0), Eigen::Vector3d(5.0, 4.0, 3.0),
      Eigen::Vector3d::Constant(0.2));
  const Eigen::Vector3d phi(0.3, -0.7, 0.2);

  double direct = 0;
  for (int i = 0; i < 15; ++i) {
    const double eta = phi[0] + phi[1] * y[static_cast<std::size_t>(i)] +
                       phi[2] * g.in_degree(i);
    direct += indicator[static_cast<std::size_t>(i)] * eta -
              std::log1p(std::exp(eta));
  }
  CHECK(mechanism.log_missingness(phi, indicator, y, g) ==
        doctest::Approx(direct).epsilon(1e-12));

  double prior = 0;
  const double means[3] = {0.1, -0.2, 0.0};
  const double sds[3] = {5.0, 4.0, 3.0};
  for (int k = 0; k < 3; ++k) {
    const double zk = (phi[k] - means[k]) / sds[k];
    prior += -0.5 * zk * zk - std::log(sds[k]);
  }
  CHECK(mechanism.log_phi_prior(phi) == doctest::Approx(prior).epsilon(1e-12));

  CHECK(mechanism.imputation_tilt(phi) == -0.7);
  CHECK(MissingMechanism::mar().imputation_tilt(phi) == 0.0);
  CHECK(MissingMechanism::mnar_fixed(phi).phi == phi);
  CHECK_THROWS_AS(
      MissingMechanism::mnar_estimated(Eigen::Vector3d::Zero(),
                                       Eigen::Vector3d(5.0, 0.0, 5.0),
                                       Eigen::Vector3d::Constant(0.2)),
      PreconditionError);
}
