#pragma once

// Analytic targets for exercising the sampler without a network in the way.
#include <Eigen/Dense>

#include "cbnn/sampler.hpp"

namespace cbnn::testing {

/// Independent Normal(mu_i, sd_i^2) coordinates.
class GaussianTarget final : public Target {
 public:
  GaussianTarget(Eigen::VectorXd mu, Eigen::VectorXd sd)
      : mu_(std::move(mu)), sd_(std::move(sd)) {}
  int theta_dim() const override { return static_cast<int>(mu_.size()); }
  bool has_noise_param() const override { return false; }
  double log_likelihood(const Eigen::VectorXd& state) const override {
    return log_posterior(state);
  }
  double log_posterior(const Eigen::VectorXd& state) const override {
    return -0.5 * ((state - mu_).array() / sd_.array()).square().sum();
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& state) const override {
    return -((state - mu_).array() / sd_.array().square()).matrix();
  }

 private:
  Eigen::VectorXd mu_, sd_;
};

}  // namespace cbnn::testing
