#pragma once

#include <Eigen/Dense>
#include <random>

namespace alaam {

// Prior over the model parameters: improper flat, or multivariate normal.
// The normal density is fully normalized so that evidence estimates can use
// it directly.
class Prior {
 public:
  static Prior flat(int dim);
  static Prior normal(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  // Scales an inverse statistic-covariance: covariance = lambda * C(mu)^-1,
  // where C is the statistic covariance simulated at the prior mean.  A
  // small diagonal regularizer keeps near-singular C invertible.
  static Prior normal_scaled(Eigen::VectorXd mean, double lambda,
                             const Eigen::MatrixXd& stat_covariance);

  bool is_proper() const { return proper_; }
  int dim() const { return static_cast<int>(mean_.size()); }

  // Log density; zero everywhere for the flat prior.
  double log_density(const Eigen::VectorXd& theta) const;

  const Eigen::VectorXd& mean() const;
  const Eigen::MatrixXd& covariance() const;

 private:
  Prior() = default;
  bool proper_ = false;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd precision_;
  double log_norm_const_ = 0;
};

// Gaussian random-walk proposal with a fixed covariance.
class Proposal {
 public:
  explicit Proposal(Eigen::MatrixXd covariance);

  // covariance = c * p^(-1/2) * C(theta0)^-1 with C the statistic
  // covariance at the tuning point.
  static Proposal from_stat_covariance(const Eigen::MatrixXd& stat_covariance,
                                       double c);

  int dim() const { return static_cast<int>(chol_.rows()); }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

  template <typename RngT>
  Eigen::VectorXd sample(const Eigen::VectorXd& mean, RngT& rng) const {
    std::normal_distribution<double> gauss;
    Eigen::VectorXd u(dim());
    for (int k = 0; k < dim(); ++k) u[k] = gauss(rng);
    return mean + chol_ * u;
  }

  // Log density of x under N(mean, covariance); symmetric in its arguments.
  double log_density(const Eigen::VectorXd& x,
                     const Eigen::VectorXd& mean) const;

 private:
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd chol_;  // lower factor
  Eigen::MatrixXd precision_;
  double log_norm_const_ = 0;
};

// Inverts a covariance-like matrix, escalating a diagonal ridge from 1e-8
// until the Cholesky factorization succeeds.
Eigen::MatrixXd regularized_inverse(const Eigen::MatrixXd& m);

}  // namespace alaam
