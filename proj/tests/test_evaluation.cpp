#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "alaam/deviance.hpp"
#include "alaam/errors.hpp"
#include "alaam/evidence.hpp"
#include "alaam/gof.hpp"
#include "alaam/mnar.hpp"
#include "alaam/path_sampler.hpp"
#include "alaam/summary.hpp"

#include "helpers.hpp"

using namespace alaam;

namespace {

double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double normal_logpdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2 * M_PI);
}

}  // namespace

TEST_CASE("summary statistics behave on known chains") {
  SUBCASE("iid normal") {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> gauss(2.0, 3.0);
    const int T = 10000;
    Eigen::MatrixXd draws(T, 1);
    for (int t = 0; t < T; ++t) draws(t, 0) = gauss(rng);
    const SummaryTable table = summarize(draws, {"a"}, 0, 1);
    REQUIRE(table.rows.size() == 1);
    const ParameterSummary& row = table.rows[0];
    CHECK(row.mean == doctest::Approx(2.0).epsilon(0.06));
    CHECK(row.sd == doctest::Approx(3.0).epsilon(0.03));
    CHECK(row.ess > 8000);
    CHECK(row.ess <= T);
    CHECK(std::abs(row.sacf10) < 0.05);
    CHECK(std::abs(row.sacf30) < 0.05);
    CHECK(row.q025 == doctest::Approx(2.0 - 1.96 * 3.0).epsilon(0.05));
    CHECK(row.q975 == doctest::Approx(2.0 + 1.96 * 3.0).epsilon(0.05));
    CHECK(table.draws_used == T);
  }

  SUBCASE("burn-in and thinning pick rows burnin, burnin+thin, ...") {
    Eigen::MatrixXd draws(10, 1);
    for (int t = 0; t < 10; ++t) draws(t, 0) = t;
    const SummaryTable table = summarize(draws, {"a"}, 4, 2);
    CHECK(table.draws_used == 3);  // rows 4, 6, 8
    CHECK(table.rows[0].mean == doctest::Approx(6.0));
    CHECK(table.rows[0].sd == doctest::Approx(2.0));
    CHECK(table.rows[0].q025 == doctest::Approx(4.1));
    CHECK(table.rows[0].q975 == doctest::Approx(7.9));
  }

  SUBCASE("constant chains yield NA diagnostics") {
    Eigen::MatrixXd draws = Eigen::MatrixXd::Constant(50, 1, 3.25);
    const SummaryTable table = summarize(draws, {"c"}, 0, 1);
    CHECK(table.rows[0].mean == doctest::Approx(3.25));
    CHECK(table.rows[0].sd == doctest::Approx(0.0));
    CHECK(std::isnan(table.rows[0].ess));
    CHECK(std::isnan(table.rows[0].sacf10));
  }

  SUBCASE("negative lag-1 correlation caps the ESS at T") {
    std::vector<double> alt(400);
    for (std::size_t t = 0; t < alt.size(); ++t) alt[t] = t % 2 ? 1.0 : -1.0;
    CHECK(effective_sample_size(alt) == doctest::Approx(400.0));
  }

  SUBCASE("AR(1) efficiency matches theory") {
    const double rho = 0.7;
    const std::vector<double> chain = oracle::ar1_chain(rho, 100000, 8);
    const double ratio = effective_sample_size(chain) / 100000.0;
    CHECK(ratio == doctest::Approx((1 - rho) / (1 + rho)).epsilon(0.15));
    CHECK(autocorrelation(chain, 1) == doctest::Approx(rho).epsilon(0.05));
  }

  SUBCASE("pooling sums ESS and concatenates thinned draws") {
    Eigen::MatrixXd a(200, 1), b(200, 1);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 200; ++t) {
      a(t, 0) = gauss(rng);
      b(t, 0) = gauss(rng) + 1.0;
    }
    const SummaryTable sa = summarize(a, {"x"}, 50, 1);
    const SummaryTable sb = summarize(b, {"x"}, 50, 1);
    const SummaryTable pooled = summarize_pooled({a, b}, {"x"}, 50, 1);
    CHECK(pooled.draws_used == 300);
    CHECK(pooled.rows[0].ess ==
          doctest::Approx(sa.rows[0].ess + sb.rows[0].ess));
    CHECK(pooled.rows[0].sacf10 ==
          doctest::Approx(0.5 * (sa.rows[0].sacf10 + sb.rows[0].sacf10)));
    CHECK(pooled.rows[0].mean ==
          doctest::Approx(0.5 * (sa.rows[0].mean + sb.rows[0].mean)));
  }

  SUBCASE("validation") {
    Eigen::MatrixXd draws(10, 1);
    draws.setZero();
    CHECK_THROWS_AS(summarize(draws, {"a"}, 0, 0), PreconditionError);
    CHECK_THROWS_AS(summarize(draws, {"a"}, 10, 1), PreconditionError);
    CHECK_THROWS_AS(summarize(draws, {"a", "b"}, 0, 1), DimensionError);
  }
}

TEST_CASE("type-7 quantiles") {
  const std::vector<double> v = {1, 2, 3, 4};
  CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile(v, 1.0) == doctest::Approx(4.0));
  CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({7.0}, 0.9) == doctest::Approx(7.0));
}

TEST_CASE("tail p-values count ties as half") {
  Eigen::VectorXd draws(8);
  draws << 0, 0, 0, 1, 2, 3, 4, 5;
  CHECK(tail_p_value(draws, 100.0) == doctest::Approx(0.0));
  CHECK(tail_p_value(draws, -100.0) == doctest::Approx(0.0));
  // lower = P(<0) + P(=0)/2 = 3/16
  CHECK(tail_p_value(draws, 0.0) == doctest::Approx(3.0 / 16.0));
  const Eigen::VectorXd ties = Eigen::VectorXd::Constant(10, 2.0);
  CHECK(tail_p_value(ties, 2.0) == doctest::Approx(0.5));
  Eigen::VectorXd sym(4);
  sym << 1, 2, 3, 4;
  CHECK(tail_p_value(sym, 2.5) == doctest::Approx(0.5));
}

TEST_CASE("posterior-predictive tables cover the battery and the model") {
  std::mt19937_64 setup(123);
  const oracle::DenseGraph dense = oracle::random_graph(8, 0.4, setup);
  const DirectedGraph g = testutil::to_graph(dense);
  std::vector<std::uint8_t> y = {1, 0, 1, 1, 0, 0, 1, 0};
  const AttributeData data = testutil::make_data(y);
  const ModelSpec spec = ModelSpec::parse({"intercept", "contagion"});
  const CompiledModel model(g, spec, data);

  RunSettings settings;
  settings.iterations = 600;
  settings.seed = 1234;
  const PosteriorSample sample =
      run_estimation(g, data, spec, Prior::flat(2), MissingMechanism::mar(),
                     ClampMask(std::vector<std::uint8_t>(8, 0)), settings);

  const GofTable battery = gof(sample, y, g, 100);
  const auto& names = gof_statistic_names();
  REQUIRE(battery.rows.size() == names.size());
  CHECK(battery.draws_used == 500);
  const Eigen::VectorXd observed = oracle::battery(dense, y);
  for (std::size_t k = 0; k < battery.rows.size(); ++k) {
    CHECK(battery.rows[k].name == names[k]);
    CHECK(battery.rows[k].observed ==
          doctest::Approx(observed[static_cast<Eigen::Index>(k)]));
    CHECK(battery.rows[k].p >= 0.0);
    CHECK(battery.rows[k].p <= 0.5);
    CHECK(std::isfinite(battery.rows[k].predictive_mean));
  }

  const GofTable terms = gof_model_terms(sample, model, y, 100);
  REQUIRE(terms.rows.size() == 2);
  CHECK(terms.rows[0].name == "intercept");
  CHECK(terms.rows[1].name == "contagion");
  const Eigen::VectorXd z = model.statistics(y);
  CHECK(terms.rows[0].observed == doctest::Approx(z[0]));
  CHECK(terms.rows[1].observed == doctest::Approx(z[1]));
}

TEST_CASE("independent log normalizer equals enumeration") {
  std::mt19937_64 setup(55);
  const oracle::DenseGraph dense = oracle::random_graph(8, 0.35, setup);
  const DirectedGraph g = testutil::to_graph(dense);
  std::vector<double> cov(8);
  std::normal_distribution<double> gauss;
  for (double& c : cov) c = gauss(setup);
  AttributeData data = testutil::make_data(std::vector<std::uint8_t>(8, 0));
  data.add_covariate("w", cov);
  const ModelSpec spec =
      ModelSpec::parse({"intercept", "covariate(w)", "contagion"});
  const CompiledModel model(g, spec, data);

  Eigen::VectorXd theta(3);
  theta << 0.4, -0.8, 0.0;  // dependence coordinate zero: factorizes

  auto stat = [&](const oracle::Outcome& v) {
    Eigen::VectorXd z(3);
    z[0] = oracle::catalog_stat(dense, v, "intercept");
    z[1] = oracle::catalog_stat(dense, v, "covariate(w)", cov);
    z[2] = oracle::catalog_stat(dense, v, "contagion");
    return z;
  };

  std::vector<int> all(8);
  for (int i = 0; i < 8; ++i) all[static_cast<std::size_t>(i)] = i;
  const oracle::Enumeration plain = oracle::enumerate_states(
      8, all, oracle::Outcome(8, 0), theta, stat);
  CHECK(independent_log_normalizer(model, theta) ==
        doctest::Approx(plain.log_normalizer).epsilon(1e-10));

  std::vector<std::uint8_t> clamp_mask(8, 0);
  clamp_mask[2] = clamp_mask[5] = 1;
  const ClampMask clamp(clamp_mask);
  std::vector<std::uint8_t> base(8, 0);
  base[2] = 1;
  Eigen::VectorXd tilt = Eigen::VectorXd::Zero(8);
  tilt[0] = 0.7;
  tilt[4] = -0.9;
  const oracle::Enumeration cond = oracle::enumerate_states(
      8, {0, 1, 3, 4, 6, 7}, base, theta, stat, &tilt);
  CHECK(independent_log_normalizer(model, theta, &clamp, &base, &tilt) ==
        doctest::Approx(cond.log_normalizer).epsilon(1e-10));

  Eigen::VectorXd dependent(3);
  dependent << 0.4, -0.8, 0.5;
  CHECK_THROWS_AS(independent_log_normalizer(model, dependent),
                  PreconditionError);
}

TEST_CASE("path sampling recovers log-normalizer differences") {
  SUBCASE("identical endpoints give exactly zero") {
    const DirectedGraph g = testutil::cycle_graph(12);
    const AttributeData data =
        testutil::make_data(std::vector<std::uint8_t>(12, 0));
    const ModelSpec spec = ModelSpec::parse({"intercept", "contagion"});
    const CompiledModel model(g, spec, data);
    Eigen::VectorXd theta(2);
    theta << 0.3, 0.2;
    PathSettings settings;
    settings.seed = 1;
    const PathEstimate zero =
        path_loglik(model, theta, theta, Eigen::VectorXd::Zero(2), settings);
    CHECK(zero.value == 0.0);
    CHECK(zero.std_error == 0.0);
  }

  SUBCASE("intercept-only difference has a closed form") {
    const int n = 50;
    const DirectedGraph g = testutil::cycle_graph(n);
    const AttributeData data =
        testutil::make_data(std::vector<std::uint8_t>(n, 0));
    const ModelSpec spec = ModelSpec::parse({"intercept"});
    const CompiledModel model(g, spec, data);
    Eigen::VectorXd from(1), to(1);
    from << -0.5;
    to << 1.2;
    PathSettings settings;
    settings.bridges = 20;
    settings.samples = 400;
    settings.burnin_sweeps = 10;
    settings.thin_sweeps = 2;
    settings.seed = 7;
    const PathEstimate est = psi_difference(model, from, to, settings);
    const double exact = n * (softplus(1.2) - softplus(-0.5));
    CHECK(std::abs(est.value - exact) < 0.3);
    CHECK(est.std_error > 0);
    CHECK(est.std_error < 0.3);
  }

  SUBCASE("dependent-model difference matches enumeration") {
    std::mt19937_64 setup(99);
    const oracle::DenseGraph dense = oracle::random_graph(8, 0.4, setup);
    const DirectedGraph g = testutil::to_graph(dense);
    const AttributeData data =
        testutil::make_data(std::vector<std::uint8_t>(8, 0));
    const ModelSpec spec = ModelSpec::parse({"intercept", "contagion"});
    const CompiledModel model(g, spec, data);

    auto stat = [&](const oracle::Outcome& v) {
      Eigen::VectorXd z(2);
      z[0] = oracle::catalog_stat(dense, v, "intercept");
      z[1] = oracle::catalog_stat(dense, v, "contagion");
      return z;
    };
    std::vector<int> all(8);
    for (int i = 0; i < 8; ++i) all[static_cast<std::size_t>(i)] = i;

    Eigen::VectorXd from(2), to(2);
    from << -0.4, 0.1;
    to << 0.3, 0.5;
    const double exact =
        oracle::enumerate_states(8, all, oracle::Outcome(8, 0), to, stat)
            .log_normalizer -
        oracle::enumerate_states(8, all, oracle::Outcome(8, 0), from, stat)
            .log_normalizer;

    PathSettings settings;
    settings.bridges = 25;
    settings.samples = 400;
    settings.burnin_sweeps = 10;
    settings.thin_sweeps = 2;
    settings.seed = 21;
    const PathEstimate fwd = psi_difference(model, from, to, settings);
    CHECK(std::abs(fwd.value - exact) < 0.2);

    settings.seed = 22;
    const PathEstimate bwd = psi_difference(model, to, from, settings);
    CHECK(std::abs(fwd.value + bwd.value) <
          3 * (fwd.std_error + bwd.std_error) + 0.05);
  }
}

TEST_CASE("log-likelihood estimates match enumeration") {
  std::mt19937_64 setup(404);
  const oracle::DenseGraph dense = oracle::random_graph(8, 0.4, setup);
  const DirectedGraph g = testutil::to_graph(dense);
  const ModelSpec spec = ModelSpec::parse({"intercept", "contagion"});
  const std::vector<std::uint8_t> y = {1, 0, 1, 0, 0, 1, 1, 0};

  auto stat = [&](const oracle::Outcome& v) {
    Eigen::VectorXd z(2);
    z[0] = oracle::catalog_stat(dense, v, "intercept");
    z[1] = oracle::catalog_stat(dense, v, "contagion");
    return z;
  };
  std::vector<int> all(8);
  for (int i = 0; i < 8; ++i) all[static_cast<std::size_t>(i)] = i;
  const double psi_full =
      oracle::enumerate_states(8, all, oracle::Outcome(8, 0),
                               (Eigen::VectorXd(2) << 0.4, 0.6).finished(),
                               stat)
          .log_normalizer;

  Eigen::VectorXd theta(2);
  theta << 0.4, 0.6;
  PathSettings settings;
  settings.bridges = 20;
  settings.samples = 300;
  settings.burnin_sweeps = 10;
  settings.thin_sweeps = 2;
  settings.seed = 31;
  const ClampMask clamp(std::vector<std::uint8_t>(8, 0));

  SUBCASE("complete data") {
    const AttributeData data = testutil::make_data(y);
    const CompiledModel model(g, spec, data);
    const double exact = theta.dot(model.statistics(y)) - psi_full;
    const LoglikResult est =
        log_likelihood(model, data, theta, 0.0, clamp, settings);
    CHECK(std::abs(est.value - exact) < 0.25);
    CHECK(est.std_error > 0);
    CHECK(est.theta_ref[1] == 0.0);  // anchored at the independent submodel
  }

  SUBCASE("missing outcomes are marginalized under the tilt") {
    const std::vector<int> missing = {2, 5};
    const AttributeData data = testutil::make_data(y, missing);
    const CompiledModel model(g, spec, data);
    const double phi1 = 0.8;

    std::vector<std::uint8_t> base = y;
    for (int i : missing) base[static_cast<std::size_t>(i)] = 0;
    Eigen::VectorXd tilt = Eigen::VectorXd::Zero(8);
    for (int i : missing) tilt[i] = phi1;
    const double psi_missing =
        oracle::enumerate_states(8, missing, base, theta, stat, &tilt)
            .log_normalizer;
    const double exact = psi_missing - psi_full;

    const LoglikResult est =
        log_likelihood(model, data, theta, phi1, clamp, settings);
    CHECK(std::abs(est.value - exact) < 0.3);
  }
}

TEST_CASE("DIC summaries") {
  SUBCASE("identical deviances carry no effective parameters") {
    const Eigen::VectorXd d = Eigen::VectorXd::Constant(100, 42.0);
    const DicResult r = dic_from_deviances(d, 42.0);
    CHECK(r.d_bar == doctest::Approx(42.0));
    CHECK(r.p_d == doctest::Approx(0.0));
    CHECK(r.p_v == doctest::Approx(0.0));
    CHECK(r.dic_pd == doctest::Approx(42.0));
    CHECK(r.dic_pv == doctest::Approx(42.0));
  }

  SUBCASE("chi-square deviance gives one effective parameter") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd d(20000);
    for (int t = 0; t < d.size(); ++t) {
      const double x = gauss(rng);
      d[t] = x * x;
    }
    const DicResult r = dic_from_deviances(d, 0.0);
    CHECK(r.d_bar == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.p_d == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.p_v == doctest::Approx(1.0).epsilon(0.12));
    CHECK(r.dic_pd == doctest::Approx(r.d_bar + r.p_d));
    CHECK(r.dic_pv == doctest::Approx(r.d_bar + r.p_v));
  }

  SUBCASE("posterior deviance matches the analytic intercept model") {
    const int n = 10;
    const DirectedGraph g = testutil::cycle_graph(n);
    std::vector<std::uint8_t> y = {1, 0, 0, 1, 0, 1, 0, 0, 1, 0};
    const AttributeData data = testutil::make_data(y);
    const ModelSpec spec = ModelSpec::parse({"intercept"});
    const CompiledModel model(g, spec, data);
    const Prior prior =
        Prior::normal(Eigen::VectorXd::Zero(1),
                      Eigen::MatrixXd::Identity(1, 1) * 4.0);
    const ClampMask clamp(std::vector<std::uint8_t>(n, 0));

    RunSettings run;
    run.iterations = 4000;
    run.seed = 3;
    const PosteriorSample sample = run_estimation(
        g, data, spec, prior, MissingMechanism::mar(), clamp, run);

    DevianceSettings settings;
    settings.burnin = 1000;
    settings.thin = 30;
    settings.path.bridges = 12;
    settings.path.samples = 80;
    settings.path.seed = 12;
    const auto [dev, dic] =
        deviance_and_dic(model, data, clamp, sample, 0.0, settings);

    const double s = 4.0;
    auto loglik = [&](double t) { return t * s - n * softplus(t); };
    const double theta_hat = std::log(s / (n - s));
    CHECK(dev.theta_ref[0] == doctest::Approx(theta_hat).epsilon(1e-6));

    double analytic_mean = 0;
    int used = 0;
    for (int t = settings.burnin; t < sample.theta.rows();
         t += settings.thin) {
      analytic_mean += -2 * (loglik(sample.theta(t, 0)) - loglik(theta_hat));
      ++used;
    }
    analytic_mean /= used;
    REQUIRE(dev.deviance.size() == used);
    CHECK(std::abs(dic.d_bar - analytic_mean) < 0.5);
    CHECK(dic.p_d == doctest::Approx(dic.d_bar - dic.d_at_mean));
    CHECK(dic.p_v > 0.1);
    CHECK(dic.p_v < 4.0);

    const auto cdf = deviance_cdf(dev.deviance);
    REQUIRE(cdf.size() == static_cast<std::size_t>(used));
    CHECK(std::is_sorted(cdf.begin(), cdf.end()));
    CHECK(cdf.front().second == doctest::Approx(1.0 / used));
    CHECK(cdf.back().second == doctest::Approx(1.0));
  }
}

TEST_CASE("posterior ordinate and evidence agree with quadrature") {
  const int n = 8;
  const DirectedGraph g = testutil::cycle_graph(n);
  std::vector<std::uint8_t> y = {1, 0, 1, 0, 1, 0, 0, 1};  // s = 4
  const AttributeData data = testutil::make_data(y);
  const ModelSpec spec = ModelSpec::parse({"intercept"});
  const CompiledModel model(g, spec, data);
  const Prior prior = Prior::normal(
      Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1) * 4.0);
  const ClampMask clamp(std::vector<std::uint8_t>(n, 0));
  const double s = 4.0;

  auto log_joint = [&](double t) {
    return t * s - n * softplus(t) + normal_logpdf(t, 0, 2);
  };
  const double log_m = oracle::log_integral(log_joint, -12, 12, 6000);

  RunSettings run;
  run.iterations = 12000;
  run.seed = 71;
  const PosteriorSample sample = run_estimation(
      g, data, spec, prior, MissingMechanism::mar(), clamp, run);
  const Proposal proposal(sample.proposal_covariance);

  const double theta_bar =
      sample.theta.col(0).tail(10000).mean();
  Eigen::VectorXd theta_prime(1);
  theta_prime << theta_bar;

  OrdinateSettings ordinate;
  ordinate.posterior_burnin = 2000;
  ordinate.numerator_draws = 800;
  ordinate.proposal_draws = 150;
  ordinate.draws_per_proposal = 8;
  ordinate.seed = 99;
  const OrdinateResult ord = posterior_ordinate(
      model, data, clamp, prior, proposal, theta_prime, sample, 0.0, ordinate);

  const double exact_ordinate = log_joint(theta_bar) - log_m;
  CHECK(std::abs(ord.log_ordinate - exact_ordinate) < 0.15);
  CHECK(ord.std_error > 0);
  CHECK(ord.std_error < 0.2);

  PathSettings path;
  path.bridges = 20;
  path.samples = 300;
  path.thin_sweeps = 2;
  path.seed = 13;
  const EvidenceResult ev = evidence_at(model, data, clamp, prior, proposal,
                                        sample, 0.0, Eigen::VectorXd(), path,
                                        ordinate);
  CHECK(ev.theta_prime.size() == 1);
  CHECK(ev.log_evidence ==
        ev.log_likelihood + ev.log_prior - ev.log_ordinate);
  CHECK(ev.std_error >= ev.ordinate_se);
  CHECK(std::abs(ev.log_evidence - log_m) < 0.25);

  CHECK_THROWS_AS(
      posterior_ordinate(model, data, clamp, Prior::flat(1), proposal,
                         theta_prime, sample, 0.0, ordinate),
      PreconditionError);
}

TEST_CASE("evidence marginalizes missing outcomes under the tilt") {
  const int n = 8;
  const DirectedGraph g = testutil::cycle_graph(n);
  std::vector<std::uint8_t> y = {1, 0, 1, 0, 1, 0, 0, 1};
  const std::vector<int> missing = {3, 6};
  const AttributeData data = testutil::make_data(y, missing);
  const ModelSpec spec = ModelSpec::parse({"intercept"});
  const CompiledModel model(g, spec, data);
  const Prior prior = Prior::normal(
      Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1) * 4.0);
  const ClampMask clamp(std::vector<std::uint8_t>(n, 0));
  const double phi1 = 1.0;
  const MissingMechanism mechanism =
      MissingMechanism::mnar_fixed(Eigen::Vector3d(0.0, phi1, 0.0));

  // observed ones among the 6 observed nodes: y0,y2,y4,y7 -> 3 (y3,y6 dropped)
  double s_obs = 0;
  for (int i = 0; i < n; ++i)
    if (std::find(missing.begin(), missing.end(), i) == missing.end())
      s_obs += y[static_cast<std::size_t>(i)];
  auto log_joint = [&](double t) {
    const double psi_mis = t * s_obs + 2 * softplus(t + phi1);
    return psi_mis - n * softplus(t) + normal_logpdf(t, 0, 2);
  };
  const double log_m = oracle::log_integral(log_joint, -12, 12, 6000);

  RunSettings run;
  run.iterations = 10000;
  run.seed = 42;
  const PosteriorSample sample =
      run_estimation(g, data, spec, prior, mechanism, clamp, run);
  const Proposal proposal(sample.proposal_covariance);

  OrdinateSettings ordinate;
  ordinate.posterior_burnin = 2000;
  ordinate.numerator_draws = 600;
  ordinate.proposal_draws = 120;
  ordinate.draws_per_proposal = 6;
  ordinate.seed = 5;
  PathSettings path;
  path.bridges = 20;
  path.samples = 300;
  path.thin_sweeps = 2;
  path.seed = 6;

  const EvidenceResult ev =
      evidence_at(model, data, clamp, prior, proposal, sample,
                  mechanism.imputation_tilt(mechanism.phi), Eigen::VectorXd(),
                  path, ordinate);
  CHECK(std::isfinite(ev.log_evidence));
  CHECK(std::abs(ev.log_evidence - log_m) < 0.35);
}

TEST_CASE("evidence curves penalize the larger model as the prior widens") {
  const int n = 10;
  const DirectedGraph g = testutil::cycle_graph(n);
  std::vector<std::uint8_t> y = {1, 1, 0, 0, 1, 0, 1, 0, 0, 1};
  const AttributeData data = testutil::make_data(y);
  const std::vector<ModelSpec> models = {
      ModelSpec::parse({"intercept"}),
      ModelSpec::parse({"intercept", "contagion"}),
  };
  const std::vector<double> lambdas = {1.0, 100.0};

  EvidenceCurveSettings settings;
  settings.run.iterations = 3000;
  settings.run.seed = 2025;
  settings.summary_burnin = 500;
  settings.ordinate.posterior_burnin = 500;
  settings.ordinate.numerator_draws = 400;
  settings.ordinate.proposal_draws = 100;
  settings.ordinate.draws_per_proposal = 5;
  settings.path.bridges = 14;
  settings.path.samples = 120;
  settings.path.thin_sweeps = 2;

  const std::vector<EvidencePoint> curve =
      evidence_curve(g, data, models, lambdas, MissingMechanism::mar(),
                     ClampMask(std::vector<std::uint8_t>(n, 0)), settings);
  REQUIRE(curve.size() == 4);

  auto point = [&](int mi, double lambda) -> const EvidencePoint& {
    for (const EvidencePoint& p : curve)
      if (p.model_index == mi && p.lambda == lambda) return p;
    REQUIRE(false);
    return curve[0];
  };

  for (const EvidencePoint& p : curve) {
    CHECK(std::isfinite(p.result.log_evidence));
    CHECK(p.result.std_error > 0);
  }

  // data carry no contagion signal, so a diffuse prior favors the small model
  const double gap = point(0, 100.0).result.log_evidence -
                     point(1, 100.0).result.log_evidence;
  CHECK(gap > 0.5);
  // and widening the prior hurts the larger model more
  const double shrink_small = point(0, 1.0).result.log_evidence -
                              point(0, 100.0).result.log_evidence;
  const double shrink_large = point(1, 1.0).result.log_evidence -
                              point(1, 100.0).result.log_evidence;
  CHECK(shrink_large > shrink_small);
}

TEST_CASE("missingness sensitivity sweeps") {
  std::mt19937_64 setup(313);
  const oracle::DenseGraph dense = oracle::random_graph(30, 0.12, setup);
  const DirectedGraph g = testutil::to_graph(dense);
  std::vector<std::uint8_t> y(30);
  for (int i = 0; i < 30; ++i) y[static_cast<std::size_t>(i)] = setup() % 2;
  const std::vector<int> missing = {2, 5, 9, 13, 18, 21, 26, 29};
  const AttributeData data = testutil::make_data(y, missing);
  const ModelSpec spec = ModelSpec::parse({"intercept", "contagion"});
  const Prior prior =
      Prior::normal(Eigen::VectorXd::Zero(2),
                    Eigen::MatrixXd::Identity(2, 2) * 9.0);
  const ClampMask clamp(std::vector<std::uint8_t>(30, 0));

  RunSettings run;
  run.iterations = 2500;
  run.seed = 2024;

  const std::vector<MnarSweepPoint> sweep = mnar_sweep(
      g, data, spec, prior, clamp, run, {-3.0, 0.0, 3.0}, 500, 1);
  REQUIRE(sweep.size() == 3);

  // the zero point is bit-identical to a run without any mechanism
  const PosteriorSample mar = run_estimation(
      g, data, spec, prior, MissingMechanism::mar(), clamp, run);
  const SummaryTable mar_summary =
      summarize(mar.theta, mar.term_names, 500, 1);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(sweep[1].summary.rows[k].mean == mar_summary.rows[k].mean);
    CHECK(sweep[1].summary.rows[k].sd == mar_summary.rows[k].sd);
  }

  // grid order is preserved and the posterior actually responds to phi1
  CHECK(sweep[0].phi1 == -3.0);
  CHECK(sweep[1].phi1 == 0.0);
  CHECK(sweep[2].phi1 == 3.0);
  CHECK(std::abs(sweep[0].summary.rows[0].mean -
                 sweep[2].summary.rows[0].mean) +
            std::abs(sweep[0].summary.rows[1].mean -
                     sweep[2].summary.rows[1].mean) >
        0.05);

  // the tilt acts directly on the missing entries: leaning them toward 1
  // raises the share of imputed ones
  const PosteriorSample lean_down = run_estimation(
      g, data, spec, prior,
      MissingMechanism::mnar_fixed(Eigen::Vector3d(0.0, -3.0, 0.0)), clamp,
      run);
  const PosteriorSample lean_up = run_estimation(
      g, data, spec, prior,
      MissingMechanism::mnar_fixed(Eigen::Vector3d(0.0, 3.0, 0.0)), clamp,
      run);
  CHECK(lean_down.imputations.cast<double>().mean() + 0.2 <
        lean_up.imputations.cast<double>().mean());

  CHECK_THROWS_AS(
      mnar_sweep(g, data, spec, prior, clamp, run, {}, 500, 1),
      PreconditionError);
  const AttributeData complete = testutil::make_data(y);
  CHECK_THROWS_WITH_AS(
      mnar_sweep(g, complete, spec, prior, clamp, run, {0.0}, 500, 1),
      "missingness sensitivity needs missing outcomes", PreconditionError);
}
