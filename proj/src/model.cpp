#include "cbnn/model.hpp"

#include <cmath>
#include <stdexcept>

namespace cbnn {
namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  // clip like the usual lineage code so exp never overflows
  return z.array().min(500.0).max(-500.0).unaryExpr(
      [](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd shifted =
      z.colwise() - z.rowwise().maxCoeff();  // log-sum-exp stabilization
  Eigen::MatrixXd e = shifted.array().exp();
  return e.array().colwise() / e.rowwise().sum().array();
}

struct Activations {
  Eigen::MatrixXd hidden;  // N x H, post-sigmoid
  Eigen::MatrixXd output;  // N x O, post-link
};

Activations forward_parts(const ModelSpec& spec, const LayerParams& lp,
                          const Eigen::MatrixXd& inputs) {
  if (inputs.cols() != spec.input_size)
    throw std::invalid_argument("forward: input column count does not match spec");
  Activations a;
  a.hidden = sigmoid((inputs * lp.hidden_weights).rowwise() +
                     lp.hidden_bias.transpose());
  Eigen::MatrixXd o =
      (a.hidden * lp.output_weights).rowwise() + lp.output_bias.transpose();
  a.output = spec.task == Task::kClassification ? softmax_rows(o) : o;
  return a;
}

}  // namespace

void ModelSpec::validate() const {
  if (input_size < 1 || hidden_size < 1 || output_size < 1)
    throw std::invalid_argument("ModelSpec: all sizes must be >= 1");
  if (task == Task::kClassification && output_size < 2)
    throw std::invalid_argument("ModelSpec: classification needs >= 2 classes");
}

double ParamVector::tau_sq() const {
  if (!log_tau_sq) throw std::logic_error("ParamVector: no noise parameter");
  return std::exp(*log_tau_sq);
}

Eigen::VectorXd ParamVector::to_state() const {
  if (!log_tau_sq) return values;
  Eigen::VectorXd state(values.size() + 1);
  state.head(values.size()) = values;
  state(values.size()) = *log_tau_sq;
  return state;
}

ParamVector ParamVector::from_state(const ModelSpec& spec,
                                    const Eigen::VectorXd& state) {
  if (state.size() != spec.state_dim())
    throw std::invalid_argument("ParamVector: state length does not match spec");
  ParamVector p;
  p.values = state.head(spec.param_count());
  if (spec.has_noise_param()) p.log_tau_sq = state(spec.param_count());
  return p;
}

Eigen::VectorXd pack(const ModelSpec& spec, const LayerParams& layers) {
  const int i = spec.input_size, h = spec.hidden_size, o = spec.output_size;
  if (layers.hidden_weights.rows() != i || layers.hidden_weights.cols() != h ||
      layers.hidden_bias.size() != h || layers.output_weights.rows() != h ||
      layers.output_weights.cols() != o || layers.output_bias.size() != o)
    throw std::invalid_argument("pack: layer shapes do not match spec");
  Eigen::VectorXd flat(spec.param_count());
  int k = 0;
  for (int r = 0; r < i; ++r)  // row-major
    for (int c = 0; c < h; ++c) flat(k++) = layers.hidden_weights(r, c);
  flat.segment(k, h) = layers.hidden_bias;
  k += h;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < o; ++c) flat(k++) = layers.output_weights(r, c);
  flat.segment(k, o) = layers.output_bias;
  return flat;
}

LayerParams unpack(const ModelSpec& spec, const Eigen::VectorXd& flat) {
  if (flat.size() != spec.param_count())
    throw std::invalid_argument("unpack: wrong parameter vector length");
  const int i = spec.input_size, h = spec.hidden_size, o = spec.output_size;
  LayerParams lp;
  lp.hidden_weights.resize(i, h);
  lp.output_weights.resize(h, o);
  int k = 0;
  for (int r = 0; r < i; ++r)
    for (int c = 0; c < h; ++c) lp.hidden_weights(r, c) = flat(k++);
  lp.hidden_bias = flat.segment(k, h);
  k += h;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < o; ++c) lp.output_weights(r, c) = flat(k++);
  lp.output_bias = flat.segment(k, o);
  return lp;
}

Eigen::MatrixXd forward(const ModelSpec& spec, const Eigen::VectorXd& theta,
                        const Eigen::MatrixXd& inputs) {
  return forward_parts(spec, unpack(spec, theta), inputs).output;
}

Eigen::VectorXd log_posterior_gradient(const ModelSpec& spec,
                                       const Eigen::VectorXd& theta,
                                       const Eigen::MatrixXd& inputs,
                                       const Eigen::MatrixXd& targets,
                                       double prior_sigma_sq, double tau_sq) {
  if (inputs.rows() == 0)
    throw std::invalid_argument("log_posterior_gradient: empty batch");
  if (targets.rows() != inputs.rows() || targets.cols() != spec.output_size)
    throw std::invalid_argument("log_posterior_gradient: target shape mismatch");
  LayerParams lp = unpack(spec, theta);
  Activations a = forward_parts(spec, lp, inputs);

  // delta_o = d log-likelihood / d pre-softmax (or linear) output
  Eigen::MatrixXd delta_o = spec.task == Task::kClassification
                                ? (targets - a.output).eval()
                                : ((targets - a.output) / tau_sq).eval();
  LayerParams g;
  g.output_weights = a.hidden.transpose() * delta_o;
  g.output_bias = delta_o.colwise().sum();
  Eigen::MatrixXd dh = (delta_o * lp.output_weights.transpose()).array() *
                       (a.hidden.array() * (1.0 - a.hidden.array()));
  g.hidden_weights = inputs.transpose() * dh;
  g.hidden_bias = dh.colwise().sum();

  Eigen::VectorXd grad = pack(spec, g) - theta / prior_sigma_sq;
  if (!grad.allFinite())
    throw std::runtime_error("log_posterior_gradient: non-finite gradient");
  return grad;
}

}  // namespace cbnn
