#include "cbnn/posterior.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cbnn {

void PriorConfig::validate() const {
  if (sigma_sq <= 0.0) throw std::invalid_argument("PriorConfig: sigma_sq must be > 0");
  if (nu1 < 0.0 || nu2 < 0.0)
    throw std::invalid_argument("PriorConfig: nu1/nu2 must be >= 0");
}

double log_prior_regression(const Eigen::VectorXd& theta, double log_tau_sq,
                            const PriorConfig& cfg) {
  cfg.validate();
  const double t = static_cast<double>(theta.size());
  const double tau_sq = std::exp(log_tau_sq);
  if (!(tau_sq > 0.0)) throw std::invalid_argument("log_prior_regression: tau^2 <= 0");
  return -0.5 * t * std::log(cfg.sigma_sq) -
         theta.squaredNorm() / (2.0 * cfg.sigma_sq) -
         (1.0 + cfg.nu1) * log_tau_sq - cfg.nu2 / tau_sq;
}

double log_prior_classification(const Eigen::VectorXd& theta,
                                const PriorConfig& cfg) {
  cfg.validate();
  const double t = static_cast<double>(theta.size());
  return -0.5 * t * std::log(cfg.sigma_sq) -
         theta.squaredNorm() / (2.0 * cfg.sigma_sq);
}

double log_likelihood_regression(const ModelSpec& spec,
                                 const Eigen::VectorXd& theta,
                                 double log_tau_sq,
                                 const Eigen::MatrixXd& inputs,
                                 const Eigen::MatrixXd& targets) {
  const double tau_sq = std::exp(log_tau_sq);
  if (!(tau_sq > 0.0))
    throw std::invalid_argument("log_likelihood_regression: tau^2 <= 0");
  const double n = static_cast<double>(inputs.rows());
  const Eigen::MatrixXd resid = targets - forward(spec, theta, inputs);
  return -0.5 * n * std::log(2.0 * std::numbers::pi * tau_sq) -
         resid.squaredNorm() / (2.0 * tau_sq);
}

double log_likelihood_classification(const ModelSpec& spec,
                                     const Eigen::VectorXd& theta,
                                     const Eigen::MatrixXd& inputs,
                                     const Eigen::MatrixXd& one_hot) {
  const Eigen::MatrixXd p = forward(spec, theta, inputs);
  const Eigen::ArrayXXd logp = p.array().max(1e-300).log();
  return (one_hot.array() * logp).sum();
}

double log_posterior(const ModelSpec& spec, const Eigen::VectorXd& state,
                     const Eigen::MatrixXd& inputs,
                     const Eigen::MatrixXd& targets, const PriorConfig& cfg) {
  const ParamVector p = ParamVector::from_state(spec, state);
  if (spec.task == Task::kRegression)
    return log_likelihood_regression(spec, p.values, *p.log_tau_sq, inputs,
                                     targets) +
           log_prior_regression(p.values, *p.log_tau_sq, cfg);
  return log_likelihood_classification(spec, p.values, inputs, targets) +
         log_prior_classification(p.values, cfg);
}

}  // namespace cbnn
