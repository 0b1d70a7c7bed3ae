#include "cbnn/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cbnn {

PosteriorStats chain_statistics(const Eigen::MatrixXd& theta_rows) {
  const int n = static_cast<int>(theta_rows.rows());
  if (n < 2)
    throw std::invalid_argument("chain_statistics: need >= 2 retained rows");
  PosteriorStats stats;
  stats.means = theta_rows.colwise().mean();
  Eigen::MatrixXd centered = theta_rows.rowwise() - stats.means.transpose();
  stats.stds =
      (centered.colwise().squaredNorm() / double(n - 1)).cwiseSqrt();
  return stats;
}

PosteriorStats chain_statistics(const Chain& chain, double burn_in_fraction) {
  if (burn_in_fraction < 0.0 || burn_in_fraction >= 1.0)
    throw std::invalid_argument("chain_statistics: burn_in_fraction in [0,1)");
  const Eigen::MatrixXd retained = chain.post_burn_in(burn_in_fraction);
  // statistics are over theta only; the log tau^2 column is never prunable
  return chain_statistics(retained.leftCols(chain.theta_dim()));
}

Eigen::VectorXd pruning_scores(const PosteriorStats& stats,
                               PruneMethod method) {
  const int t = stats.size();
  Eigen::VectorXd scores(t);
  switch (method) {
    case PruneMethod::kStn:
      for (int i = 0; i < t; ++i) {
        const double mu = std::abs(stats.means(i));
        const double sd = stats.stds(i);
        // a perfectly certain nonzero parameter is maximally important
        scores(i) = sd > 0.0 ? mu / sd
                   : mu > 0.0 ? std::numeric_limits<double>::infinity()
                              : 0.0;
      }
      return scores;
    case PruneMethod::kSpn:
      return stats.means.cwiseAbs() + stats.stds;
    case PruneMethod::kRnd:
      throw std::invalid_argument("pruning_scores: RND has no scores");
  }
  throw std::logic_error("pruning_scores: bad method");
}

PruneMask build_mask(const PosteriorStats& stats, PruneMethod method,
                     double level, std::optional<std::uint64_t> seed) {
  if (level < 0.0 || level >= 1.0)
    throw std::invalid_argument("build_mask: level must be in [0,1)");
  const int t = stats.size();
  if (method == PruneMethod::kRnd) {
    if (!seed) throw std::invalid_argument("build_mask: RND needs a seed");
    return build_random_mask(t, level, *seed);
  }
  const Eigen::VectorXd scores = pruning_scores(stats, method);
  std::vector<int> order(static_cast<std::size_t>(t));
  std::iota(order.begin(), order.end(), 0);
  // ties broken by lower index first
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores(a) < scores(b); });
  PruneMask mask = PruneMask::keep_all(t, method);
  mask.level = level;
  const int n_prune = static_cast<int>(level * t);
  for (int i = 0; i < n_prune; ++i)
    mask.keep[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 0;
  return mask;
}

PruneMask build_random_mask(int t, double level, std::uint64_t seed) {
  if (level < 0.0 || level >= 1.0)
    throw std::invalid_argument("build_random_mask: level must be in [0,1)");
  std::vector<int> order(static_cast<std::size_t>(t));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  PruneMask mask = PruneMask::keep_all(t, PruneMethod::kRnd);
  mask.level = level;
  mask.seed = seed;
  const int n_prune = static_cast<int>(level * t);
  for (int i = 0; i < n_prune; ++i)
    mask.keep[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 0;
  return mask;
}

}  // namespace cbnn
