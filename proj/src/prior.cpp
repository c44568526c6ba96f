#include "alaam/prior.hpp"

#include <cmath>
#include <numbers>

#include "alaam/errors.hpp"

namespace alaam {

namespace {

// Lower Cholesky factor with an escalating ridge for borderline matrices.
Eigen::MatrixXd robust_cholesky(Eigen::MatrixXd m) {
  for (double ridge = 0;; ridge = ridge == 0 ? 1e-8 : ridge * 10) {
    Eigen::MatrixXd attempt = m;
    attempt.diagonal().array() += ridge;
    const Eigen::LLT<Eigen::MatrixXd> llt(attempt);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    if (ridge > 1e2)
      throw NumericalError("covariance matrix is not positive definite");
  }
}

double gaussian_log_norm_const(const Eigen::MatrixXd& chol) {
  const double p = static_cast<double>(chol.rows());
  return -0.5 * p * std::log(2 * std::numbers::pi) -
         chol.diagonal().array().log().sum();
}

}  // namespace

Eigen::MatrixXd regularized_inverse(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix must be square");
  for (double ridge = 0;; ridge = ridge == 0 ? 1e-8 : ridge * 10) {
    Eigen::MatrixXd attempt = m;
    attempt.diagonal().array() += ridge;
    const Eigen::LLT<Eigen::MatrixXd> llt(attempt);
    if (llt.info() == Eigen::Success)
      return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    if (ridge > 1e2)
      throw NumericalError("matrix inversion failed even with regularization");
  }
}

Prior Prior::flat(int dim) {
  Prior prior;
  prior.proper_ = false;
  prior.mean_ = Eigen::VectorXd::Zero(dim);
  return prior;
}

Prior Prior::normal(Eigen::VectorXd mean, Eigen::MatrixXd covariance) {
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size())
    throw DimensionError("prior covariance does not match mean length");
  Prior prior;
  prior.proper_ = true;
  prior.mean_ = std::move(mean);
  prior.covariance_ = std::move(covariance);
  const Eigen::MatrixXd chol = robust_cholesky(prior.covariance_);
  prior.precision_ = regularized_inverse(prior.covariance_);
  prior.log_norm_const_ = gaussian_log_norm_const(chol);
  return prior;
}

Prior Prior::normal_scaled(Eigen::VectorXd mean, double lambda,
                           const Eigen::MatrixXd& stat_covariance) {
  if (!(lambda > 0)) throw PreconditionError("prior scale must be positive");
  Eigen::MatrixXd cov = lambda * regularized_inverse(stat_covariance);
  // enforce exact symmetry before factorizing
  cov = ((cov + cov.transpose()) / 2).eval();
  return normal(std::move(mean), std::move(cov));
}

double Prior::log_density(const Eigen::VectorXd& theta) const {
  if (theta.size() != mean_.size())
    throw DimensionError("theta length does not match prior");
  if (!proper_) return 0;
  const Eigen::VectorXd centered = theta - mean_;
  return log_norm_const_ - 0.5 * centered.dot(precision_ * centered);
}

const Eigen::VectorXd& Prior::mean() const {
  if (!proper_) throw PreconditionError("flat prior has no mean");
  return mean_;
}

const Eigen::MatrixXd& Prior::covariance() const {
  if (!proper_) throw PreconditionError("flat prior has no covariance");
  return covariance_;
}

Proposal::Proposal(Eigen::MatrixXd covariance) : covariance_(std::move(covariance)) {
  if (covariance_.rows() != covariance_.cols())
    throw DimensionError("proposal covariance must be square");
  chol_ = robust_cholesky(covariance_);
  precision_ = regularized_inverse(covariance_);
  log_norm_const_ = gaussian_log_norm_const(chol_);
}

Proposal Proposal::from_stat_covariance(const Eigen::MatrixXd& stat_covariance,
                                        double c) {
  if (!(c > 0)) throw PreconditionError("proposal scale must be positive");
  const double p = static_cast<double>(stat_covariance.rows());
  Eigen::MatrixXd cov =
      (c / std::sqrt(p)) * regularized_inverse(stat_covariance);
  cov = ((cov + cov.transpose()) / 2).eval();
  return Proposal(std::move(cov));
}

double Proposal::log_density(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& mean) const {
  const Eigen::VectorXd centered = x - mean;
  return log_norm_const_ - 0.5 * centered.dot(precision_ * centered);
}

}  // namespace alaam
