#pragma once

#include <Eigen/Dense>
#include <optional>

namespace cbnn {

enum class Task { kRegression, kClassification };

/// One-hidden-layer feedforward architecture. Hidden activation is the
/// logistic sigmoid; the output layer is linear for regression and softmax
/// for classification.
struct ModelSpec {
  int input_size = 0;
  int hidden_size = 0;
  int output_size = 0;
  Task task = Task::kRegression;

  /// Total weight+bias count T (excludes the noise-variance coordinate).
  int param_count() const {
    return input_size * hidden_size + hidden_size +
           hidden_size * output_size + output_size;
  }
  bool has_noise_param() const { return task == Task::kRegression; }
  /// Sampler state dimension: T, plus log tau^2 for regression.
  int state_dim() const { return param_count() + (has_noise_param() ? 1 : 0); }
  void validate() const;
};

/// Flat parameter vector plus the log noise variance for regression tasks.
struct ParamVector {
  Eigen::VectorXd values;
  std::optional<double> log_tau_sq;

  double tau_sq() const;
  /// Full sampler state: values [+ log_tau_sq appended].
  Eigen::VectorXd to_state() const;
  static ParamVector from_state(const ModelSpec& spec,
                                const Eigen::VectorXd& state);
};

/// Structured view of the parameters, used by the pack/unpack codec.
struct LayerParams {
  Eigen::MatrixXd hidden_weights;  // input_size x hidden_size
  Eigen::VectorXd hidden_bias;     // hidden_size
  Eigen::MatrixXd output_weights;  // hidden_size x output_size
  Eigen::VectorXd output_bias;     // output_size
};

/// Flattens layer matrices in a fixed order: input->hidden weights
/// (row-major), hidden biases, hidden->output weights (row-major), output
/// biases.
Eigen::VectorXd pack(const ModelSpec& spec, const LayerParams& layers);
LayerParams unpack(const ModelSpec& spec, const Eigen::VectorXd& flat);

/// Forward pass over a batch. Regression returns raw linear outputs;
/// classification returns softmax rows (log-sum-exp stabilized).
Eigen::MatrixXd forward(const ModelSpec& spec, const Eigen::VectorXd& theta,
                        const Eigen::MatrixXd& inputs);

/// Gradient of the log-posterior (log-likelihood + Gaussian log-prior on
/// theta) via backpropagation. `targets` is N x output_size: one-hot rows for
/// classification, real targets for regression. tau_sq is held fixed; it is
/// ignored for classification.
Eigen::VectorXd log_posterior_gradient(const ModelSpec& spec,
                                       const Eigen::VectorXd& theta,
                                       const Eigen::MatrixXd& inputs,
                                       const Eigen::MatrixXd& targets,
                                       double prior_sigma_sq,
                                       double tau_sq = 1.0);

}  // namespace cbnn
