#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "cbnn/mask.hpp"
#include "cbnn/sampler.hpp"

namespace cbnn {

/// Per-coordinate posterior mean and sample standard deviation (n-1 divisor)
/// over the post-burn-in theta rows of a chain.
struct PosteriorStats {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;
  int size() const { return static_cast<int>(means.size()); }
};

/// Throws if fewer than 2 rows survive the burn-in discard.
PosteriorStats chain_statistics(const Chain& chain, double burn_in_fraction);
PosteriorStats chain_statistics(const Eigen::MatrixXd& theta_rows);

/// STN: |mu|/sigma, with sigma = 0 mapping to +inf (or 0 when mu = 0 too).
/// SPN: |mu| + sigma. Lower score = pruned first. RND has no scores.
Eigen::VectorXd pruning_scores(const PosteriorStats& stats, PruneMethod method);

/// Prunes the floor(level * T) lowest-scoring coordinates (ties broken by
/// lower index). RND prunes a seeded uniform subset of the same size and
/// needs only T, not stats.
PruneMask build_mask(const PosteriorStats& stats, PruneMethod method,
                     double level, std::optional<std::uint64_t> seed = {});
PruneMask build_random_mask(int t, double level, std::uint64_t seed);

}  // namespace cbnn
