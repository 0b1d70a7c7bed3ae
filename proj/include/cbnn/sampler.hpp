#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cbnn/mask.hpp"
#include "cbnn/model.hpp"
#include "cbnn/posterior.hpp"

namespace cbnn {

struct SamplerConfig {
  int max_samples = 50000;
  double burn_in_fraction = 0.5;
  // Langevin step size. The default couples the gradient shift to the
  // proposal noise (epsilon = proposal_std^2), which keeps the q-corrected
  // acceptance rate healthy with full-batch gradients.
  double step_size_epsilon = 0.025 * 0.025;
  double proposal_std = 0.025;
  double tau_proposal_std = 0.2;   // random-walk scale on log tau^2
  double langevin_probability = 0.5;
  std::uint64_t seed = 0;
  void validate() const;
};

/// A log-posterior the sampler can draw from. State layout: theta
/// (theta_dim coordinates) with log tau^2 appended when has_noise_param().
class Target {
 public:
  virtual ~Target() = default;
  virtual int theta_dim() const = 0;
  virtual bool has_noise_param() const = 0;
  virtual double log_likelihood(const Eigen::VectorXd& state) const = 0;
  virtual double log_posterior(const Eigen::VectorXd& state) const = 0;
  /// d log_posterior / d theta, length theta_dim (tau^2 held fixed).
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& state) const = 0;
  int state_dim() const { return theta_dim() + (has_noise_param() ? 1 : 0); }
};

/// BNN log-posterior over a fixed training set.
class BnnTarget final : public Target {
 public:
  BnnTarget(ModelSpec spec, Eigen::MatrixXd inputs, Eigen::MatrixXd targets,
            PriorConfig prior);
  int theta_dim() const override { return spec_.param_count(); }
  bool has_noise_param() const override { return spec_.has_noise_param(); }
  double log_likelihood(const Eigen::VectorXd& state) const override;
  double log_posterior(const Eigen::VectorXd& state) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& state) const override;
  const ModelSpec& spec() const { return spec_; }

 private:
  ModelSpec spec_;
  Eigen::MatrixXd inputs_;
  Eigen::MatrixXd targets_;
  PriorConfig prior_;
};

struct Chain {
  Eigen::MatrixXd samples;  // max_samples x state_dim (rejected steps repeat)
  Eigen::VectorXd log_likelihoods;
  std::vector<std::uint8_t> accepted;
  std::optional<PruneMask> mask;
  SamplerConfig config;
  bool has_noise_param = false;

  int size() const { return static_cast<int>(samples.rows()); }
  int state_dim() const { return static_cast<int>(samples.cols()); }
  int theta_dim() const { return state_dim() - (has_noise_param ? 1 : 0); }
  /// Rows remaining after discarding the leading burn_in fraction.
  Eigen::MatrixXd post_burn_in(double burn_in_fraction) const;
};

enum class ProposalMode { kLangevin, kRandomWalk };

struct Proposal {
  Eigen::VectorXd state;
  Eigen::VectorXd theta_mean;  // proposal mean over theta, for the q-ratio
};

/// Draws a proposal. Langevin: theta' ~ N(theta + (eps/2) grad, pstd^2 I);
/// random walk: theta' ~ N(theta, pstd^2 I). log tau^2 (if present) always
/// moves by N(0, tau_proposal_std^2). Masked coordinates stay exactly 0 and
/// receive no noise.
Proposal propose(const Eigen::VectorXd& current,
                 const Eigen::VectorXd& gradient, const SamplerConfig& cfg,
                 ProposalMode mode, bool has_noise_param,
                 const PruneMask* mask, std::mt19937_64& rng);

/// min(0, lp_proposed - lp_current + q_correction_log).
double acceptance_log_probability(double log_post_current,
                                  double log_post_proposed,
                                  double q_correction_log);

/// Langevin asymmetry correction
/// [||theta' - m(theta)||^2 - ||theta - m(theta')||^2] / (2 pstd^2),
/// restricted to unmasked theta coordinates.
double langevin_q_correction(const Eigen::VectorXd& current_theta,
                             const Eigen::VectorXd& proposed_theta,
                             const Eigen::VectorXd& forward_mean,
                             const Eigen::VectorXd& reverse_mean,
                             double proposal_std, const PruneMask* mask);

/// Metropolis-Hastings chain with per-step Langevin/random-walk mode choice.
/// Deterministic given cfg.seed. Throws if the log-posterior at init is not
/// finite.
Chain sample_chain(const Target& target, const SamplerConfig& cfg,
                   const Eigen::VectorXd& init,
                   const std::optional<PruneMask>& mask = std::nullopt);

/// Post-prune resampling: sample_chain with the mask enforced,
/// resample_length samples and no burn-in.
Chain resample_chain(const Target& target, SamplerConfig cfg,
                     const Eigen::VectorXd& pruned_init, const PruneMask& mask,
                     int resample_length = 1000);

/// CSV persistence: header p0,...,p{T-1}[,log_tau_sq],loglik,accepted plus a
/// sidecar `<path>.meta` with the config snapshot, seed, and mask.
void save_chain_csv(const Chain& chain, const std::string& path);
Chain load_chain_csv(const std::string& path);

}  // namespace cbnn
