#include "cbnn/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cbnn {
namespace {

void zero_masked(const PruneMask* mask, Eigen::VectorXd& v) {
  if (!mask) return;
  for (int i = 0; i < mask->size(); ++i)
    if (!mask->keep[static_cast<std::size_t>(i)]) v(i) = 0.0;
}

}  // namespace

void SamplerConfig::validate() const {
  if (max_samples < 1) throw std::invalid_argument("SamplerConfig: max_samples must be >= 1");
  if (burn_in_fraction < 0.0 || burn_in_fraction >= 1.0)
    throw std::invalid_argument("SamplerConfig: burn_in_fraction must be in [0,1)");
  if (step_size_epsilon <= 0.0 || proposal_std <= 0.0 || tau_proposal_std <= 0.0)
    throw std::invalid_argument("SamplerConfig: scales must be > 0");
  if (langevin_probability < 0.0 || langevin_probability > 1.0)
    throw std::invalid_argument("SamplerConfig: langevin_probability must be in [0,1]");
}

BnnTarget::BnnTarget(ModelSpec spec, Eigen::MatrixXd inputs,
                     Eigen::MatrixXd targets, PriorConfig prior)
    : spec_(std::move(spec)),
      inputs_(std::move(inputs)),
      targets_(std::move(targets)),
      prior_(prior) {
  spec_.validate();
  prior_.validate();
  if (targets_.rows() != inputs_.rows() || targets_.cols() != spec_.output_size)
    throw std::invalid_argument("BnnTarget: target shape mismatch");
}

double BnnTarget::log_likelihood(const Eigen::VectorXd& state) const {
  const ParamVector p = ParamVector::from_state(spec_, state);
  return spec_.task == Task::kRegression
             ? log_likelihood_regression(spec_, p.values, *p.log_tau_sq,
                                         inputs_, targets_)
             : log_likelihood_classification(spec_, p.values, inputs_,
                                             targets_);
}

double BnnTarget::log_posterior(const Eigen::VectorXd& state) const {
  return cbnn::log_posterior(spec_, state, inputs_, targets_, prior_);
}

Eigen::VectorXd BnnTarget::gradient(const Eigen::VectorXd& state) const {
  const ParamVector p = ParamVector::from_state(spec_, state);
  const double tau_sq = spec_.has_noise_param() ? p.tau_sq() : 1.0;
  return log_posterior_gradient(spec_, p.values, inputs_, targets_,
                                prior_.sigma_sq, tau_sq);
}

Eigen::MatrixXd Chain::post_burn_in(double burn_in_fraction) const {
  const int discard = static_cast<int>(burn_in_fraction * size());
  return samples.bottomRows(size() - discard);
}

Proposal propose(const Eigen::VectorXd& current,
                 const Eigen::VectorXd& gradient, const SamplerConfig& cfg,
                 ProposalMode mode, bool has_noise_param, const PruneMask* mask,
                 std::mt19937_64& rng) {
  const int t = static_cast<int>(current.size()) - (has_noise_param ? 1 : 0);
  if (mode == ProposalMode::kLangevin) {
    if (gradient.size() != t)
      throw std::invalid_argument("propose: gradient length mismatch");
    if (!gradient.allFinite())
      throw std::invalid_argument("propose: non-finite gradient");
  }

  Proposal out;
  out.theta_mean = current.head(t);
  if (mode == ProposalMode::kLangevin)
    out.theta_mean += 0.5 * cfg.step_size_epsilon * gradient;
  zero_masked(mask, out.theta_mean);

  std::normal_distribution<double> noise(0.0, cfg.proposal_std);
  out.state = current;
  for (int i = 0; i < t; ++i) out.state(i) = out.theta_mean(i) + noise(rng);
  zero_masked(mask, out.state);
  if (has_noise_param) {
    std::normal_distribution<double> tau_noise(0.0, cfg.tau_proposal_std);
    out.state(t) = current(t) + tau_noise(rng);
  }
  return out;
}

double acceptance_log_probability(double log_post_current,
                                  double log_post_proposed,
                                  double q_correction_log) {
  if (std::isnan(log_post_proposed) ||
      log_post_proposed == -std::numeric_limits<double>::infinity())
    return -std::numeric_limits<double>::infinity();
  return std::min(0.0, log_post_proposed - log_post_current + q_correction_log);
}

double langevin_q_correction(const Eigen::VectorXd& current_theta,
                             const Eigen::VectorXd& proposed_theta,
                             const Eigen::VectorXd& forward_mean,
                             const Eigen::VectorXd& reverse_mean,
                             double proposal_std, const PruneMask* mask) {
  Eigen::VectorXd d_forward = proposed_theta - forward_mean;
  Eigen::VectorXd d_reverse = current_theta - reverse_mean;
  zero_masked(mask, d_forward);
  zero_masked(mask, d_reverse);
  return (d_forward.squaredNorm() - d_reverse.squaredNorm()) /
         (2.0 * proposal_std * proposal_std);
}

Chain sample_chain(const Target& target, const SamplerConfig& cfg,
                   const Eigen::VectorXd& init,
                   const std::optional<PruneMask>& mask) {
  cfg.validate();
  const int dim = target.state_dim();
  const int t = target.theta_dim();
  if (init.size() != dim)
    throw std::invalid_argument("sample_chain: init length does not match target");
  const PruneMask* m = mask ? &*mask : nullptr;
  if (m && m->size() != t)
    throw std::invalid_argument("sample_chain: mask length does not match target");

  Eigen::VectorXd state = init;
  zero_masked(m, state);
  double lp = target.log_posterior(state);
  if (!std::isfinite(lp))
    throw std::runtime_error("sample_chain: non-finite log-posterior at init");
  double ll = target.log_likelihood(state);

  Chain chain;
  chain.config = cfg;
  chain.has_noise_param = target.has_noise_param();
  chain.mask = mask;
  chain.samples.resize(cfg.max_samples, dim);
  chain.log_likelihoods.resize(cfg.max_samples);
  chain.accepted.assign(static_cast<std::size_t>(cfg.max_samples), 0);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int it = 0; it < cfg.max_samples; ++it) {
    const bool langevin = unif(rng) < cfg.langevin_probability;
    Eigen::VectorXd grad;
    if (langevin) {
      grad = target.gradient(state);
      zero_masked(m, grad);
    }
    Proposal prop = propose(state, grad, cfg,
                            langevin ? ProposalMode::kLangevin
                                     : ProposalMode::kRandomWalk,
                            chain.has_noise_param, m, rng);
    const double lp_prop = target.log_posterior(prop.state);
    double q_corr = 0.0;
    if (langevin) {
      Eigen::VectorXd grad_rev = target.gradient(prop.state);
      zero_masked(m, grad_rev);
      Eigen::VectorXd reverse_mean =
          prop.state.head(t) + 0.5 * cfg.step_size_epsilon * grad_rev;
      zero_masked(m, reverse_mean);
      q_corr = langevin_q_correction(state.head(t), prop.state.head(t),
                                     prop.theta_mean, reverse_mean,
                                     cfg.proposal_std, m);
    }
    const double log_alpha = acceptance_log_probability(lp, lp_prop, q_corr);
    if (std::log(unif(rng)) < log_alpha) {
      state = prop.state;
      lp = lp_prop;
      ll = target.log_likelihood(state);
      chain.accepted[static_cast<std::size_t>(it)] = 1;
    }
    chain.samples.row(it) = state;
    chain.log_likelihoods(it) = ll;
  }
  return chain;
}

Chain resample_chain(const Target& target, SamplerConfig cfg,
                     const Eigen::VectorXd& pruned_init, const PruneMask& mask,
                     int resample_length) {
  cfg.max_samples = resample_length;
  cfg.burn_in_fraction = 0.0;
  return sample_chain(target, cfg, pruned_init, mask);
}

void save_chain_csv(const Chain& chain, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write chain file: " + path);
  f.precision(17);
  const int t = chain.theta_dim();
  for (int j = 0; j < t; ++j) f << "p" << j << ",";
  if (chain.has_noise_param) f << "log_tau_sq,";
  f << "loglik,accepted\n";
  for (int i = 0; i < chain.size(); ++i) {
    for (int j = 0; j < chain.state_dim(); ++j) f << chain.samples(i, j) << ",";
    f << chain.log_likelihoods(i) << ","
      << int(chain.accepted[static_cast<std::size_t>(i)]) << "\n";
  }

  std::ofstream meta(path + ".meta");
  if (!meta) throw std::runtime_error("cannot write chain metadata: " + path + ".meta");
  meta.precision(17);
  const SamplerConfig& c = chain.config;
  meta << "max_samples," << c.max_samples << "\n"
       << "burn_in_fraction," << c.burn_in_fraction << "\n"
       << "step_size_epsilon," << c.step_size_epsilon << "\n"
       << "proposal_std," << c.proposal_std << "\n"
       << "tau_proposal_std," << c.tau_proposal_std << "\n"
       << "langevin_probability," << c.langevin_probability << "\n"
       << "seed," << c.seed << "\n"
       << "has_noise_param," << int(chain.has_noise_param) << "\n"
       << "masked," << int(chain.mask.has_value()) << "\n";
  if (chain.mask) write_mask(*chain.mask, meta);
}

Chain load_chain_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read chain file: " + path);
  std::string header;
  if (!std::getline(f, header))
    throw std::runtime_error("chain file empty: " + path);
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  if (cols.size() < 3 || cols.back() != "accepted" ||
      cols[cols.size() - 2] != "loglik")
    throw std::runtime_error("chain file: unexpected header: " + path);
  const bool has_tau = cols[cols.size() - 3] == "log_tau_sq";
  const int dim = static_cast<int>(cols.size()) - 2;

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != dim + 2)
      throw std::runtime_error("chain file: ragged row: " + path);
    rows.push_back(std::move(row));
  }

  Chain chain;
  chain.has_noise_param = has_tau;
  const int n = static_cast<int>(rows.size());
  chain.samples.resize(n, dim);
  chain.log_likelihoods.resize(n);
  chain.accepted.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) chain.samples(i, j) = rows[i][j];
    chain.log_likelihoods(i) = rows[i][dim];
    chain.accepted[static_cast<std::size_t>(i)] = rows[i][dim + 1] != 0.0;
  }

  std::ifstream meta(path + ".meta");
  if (meta) {
    std::string mline;
    bool mask_follows = false;
    std::stringstream mask_text;
    while (std::getline(meta, mline)) {
      if (mask_follows) { mask_text << mline << "\n"; continue; }
      auto comma = mline.find(',');
      if (comma == std::string::npos) continue;
      const std::string key = mline.substr(0, comma);
      const std::string value = mline.substr(comma + 1);
      if (key == "max_samples") chain.config.max_samples = std::stoi(value);
      else if (key == "burn_in_fraction") chain.config.burn_in_fraction = std::stod(value);
      else if (key == "step_size_epsilon") chain.config.step_size_epsilon = std::stod(value);
      else if (key == "proposal_std") chain.config.proposal_std = std::stod(value);
      else if (key == "tau_proposal_std") chain.config.tau_proposal_std = std::stod(value);
      else if (key == "langevin_probability") chain.config.langevin_probability = std::stod(value);
      else if (key == "seed") chain.config.seed = std::stoull(value);
      else if (key == "masked" && value == "1") mask_follows = true;
    }
    if (mask_follows) {
      chain.mask = read_mask(mask_text);
    }
  }
  return chain;
}

}  // namespace cbnn
