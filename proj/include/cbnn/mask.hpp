#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cbnn {

enum class PruneMethod { kStn, kSpn, kRnd };

std::string to_string(PruneMethod m);
PruneMethod prune_method_from_string(const std::string& s);

/// Per-parameter keep/zero flags over the theta coordinates. The noise
/// variance coordinate (regression) is never part of the mask.
struct PruneMask {
  std::vector<std::uint8_t> keep;  // length T, 1 = keep
  PruneMethod method = PruneMethod::kStn;
  double level = 0.0;
  std::optional<std::uint64_t> seed;  // RND only

  int size() const { return static_cast<int>(keep.size()); }
  int pruned_count() const;
  static PruneMask keep_all(int t, PruneMethod method = PruneMethod::kStn);
};

/// Zeroes the masked theta coordinates in place; extra trailing coordinates
/// (log tau^2) are untouched. Throws on length mismatch.
void apply_mask(const PruneMask& mask, Eigen::VectorXd& state);
Eigen::VectorXd apply_mask_copy(const PruneMask& mask,
                                const Eigen::VectorXd& state);

void save_mask(const PruneMask& mask, const std::string& path);
PruneMask load_mask(const std::string& path);
void write_mask(const PruneMask& mask, std::ostream& os);
PruneMask read_mask(std::istream& is);

}  // namespace cbnn
