#pragma once

#include <Eigen/Dense>

#include "cbnn/model.hpp"

namespace cbnn {

struct PriorConfig {
  double sigma_sq = 25.0;  // Gaussian prior variance on weights/biases
  double nu1 = 0.0;        // inverse-Gamma shape term (regression)
  double nu2 = 0.0;        // inverse-Gamma scale term (regression)
  void validate() const;
};

// Unnormalized log-priors; constants dropped consistently.
double log_prior_regression(const Eigen::VectorXd& theta, double log_tau_sq,
                            const PriorConfig& cfg);
double log_prior_classification(const Eigen::VectorXd& theta,
                                const PriorConfig& cfg);

double log_likelihood_regression(const ModelSpec& spec,
                                 const Eigen::VectorXd& theta,
                                 double log_tau_sq,
                                 const Eigen::MatrixXd& inputs,
                                 const Eigen::MatrixXd& targets);

/// Multinomial log-likelihood; `one_hot` is N x K with exactly one 1 per row.
/// Probabilities are clamped below at 1e-300 before the log.
double log_likelihood_classification(const ModelSpec& spec,
                                     const Eigen::VectorXd& theta,
                                     const Eigen::MatrixXd& inputs,
                                     const Eigen::MatrixXd& one_hot);

/// log-likelihood + task-appropriate log-prior, computed as the exact sum of
/// the two components above. `state` is theta [+ log_tau_sq] as produced by
/// ParamVector::to_state.
double log_posterior(const ModelSpec& spec, const Eigen::VectorXd& state,
                     const Eigen::MatrixXd& inputs,
                     const Eigen::MatrixXd& targets, const PriorConfig& cfg);

}  // namespace cbnn
