#include "alaam/logistic.hpp"

#include <cmath>

#include "alaam/errors.hpp"

namespace alaam {

namespace {

double bernoulli_loglik(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double ll = 0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    // log(1+e^eta) evaluated without overflow
    const double softplus =
        eta[i] > 0 ? eta[i] + std::log1p(std::exp(-eta[i]))
                   : std::log1p(std::exp(eta[i]));
    ll += y[i] * eta[i] - softplus;
  }
  return ll;
}

}  // namespace

LogisticFit fit_independent_mle(const CompiledModel& model,
                                const AttributeData& data) {
  const int p = model.parameter_count();
  std::vector<int> cols;
  for (int k = 0; k < p; ++k)
    if (!model.term_is_dependence(k)) cols.push_back(k);

  LogisticFit fit;
  fit.theta = Eigen::VectorXd::Zero(p);
  if (cols.empty()) {
    fit.converged = true;
    return fit;
  }

  const Eigen::MatrixXd full_design = model.independent_design();
  std::vector<int> rows;
  for (int i = 0; i < data.node_count(); ++i)
    if (!data.missing()[i]) rows.push_back(i);
  if (rows.empty()) throw PreconditionError("no observed outcomes to fit");

  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(cols.size());
  Eigen::MatrixXd X(nr, nc);
  Eigen::VectorXd y(nr);
  for (int r = 0; r < nr; ++r) {
    y[r] = data.outcome()[static_cast<std::size_t>(rows[r])];
    for (int c = 0; c < nc; ++c) X(r, c) = full_design(rows[r], cols[c]);
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(nc);
  Eigen::VectorXd eta = X * beta;
  double ll = bernoulli_loglik(eta, y);
  constexpr double kRidge = 1e-10;
  constexpr int kMaxIter = 200;
  for (int it = 0; it < kMaxIter; ++it) {
    fit.iterations = it + 1;
    const Eigen::VectorXd mu =
        (1.0 + (-eta.array()).exp()).inverse().matrix();
    const Eigen::VectorXd grad = X.transpose() * (y - mu);
    if (grad.lpNorm<Eigen::Infinity>() < 1e-10) {
      fit.converged = true;
      break;
    }
    const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
    Eigen::MatrixXd hess = X.transpose() * w.asDiagonal() * X;
    hess.diagonal().array() += kRidge;
    const Eigen::VectorXd step = hess.ldlt().solve(grad);

    double scale = 1.0;
    for (int half = 0; half < 40; ++half) {
      const Eigen::VectorXd candidate = beta + scale * step;
      const Eigen::VectorXd eta_c = X * candidate;
      const double ll_c = bernoulli_loglik(eta_c, y);
      if (ll_c >= ll - 1e-14) {
        beta = candidate;
        eta = eta_c;
        ll = ll_c;
        break;
      }
      scale *= 0.5;
    }
  }
  // Separation drives coefficients to infinity; treat huge fits as failed
  // convergence but still return the usable direction.
  if (beta.lpNorm<Eigen::Infinity>() > 1e6) fit.converged = false;

  for (int c = 0; c < nc; ++c) fit.theta[cols[c]] = beta[c];
  fit.log_likelihood = ll;
  return fit;
}

}  // namespace alaam
