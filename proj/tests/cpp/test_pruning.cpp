#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>

#include "cbnn/pruning.hpp"

using namespace cbnn;

namespace {

Chain make_chain(const Eigen::MatrixXd& samples, bool has_noise = false) {
  Chain c;
  c.samples = samples;
  c.log_likelihoods = Eigen::VectorXd::Zero(samples.rows());
  c.accepted.assign(static_cast<std::size_t>(samples.rows()), 1);
  c.has_noise_param = has_noise;
  return c;
}

}  // namespace

TEST_CASE("chain_statistics: mean 2, std sqrt(2) for samples (1,3)") {
  Eigen::MatrixXd s(2, 1);
  s << 1.0, 3.0;
  const PosteriorStats stats = chain_statistics(make_chain(s), 0.0);
  CHECK(stats.means(0) == doctest::Approx(2.0));
  CHECK(stats.stds(0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("chain_statistics: constant coordinate has zero std") {
  Eigen::MatrixXd s(4, 2);
  s << 1, 5, 1, 6, 1, 7, 1, 8;
  const PosteriorStats stats = chain_statistics(make_chain(s), 0.0);
  CHECK(stats.stds(0) == 0.0);
  CHECK(stats.stds(1) > 0.0);
}

TEST_CASE("chain_statistics: burn_in 0.5 on 4 rows keeps rows 3-4") {
  Eigen::MatrixXd s(4, 1);
  s << 100.0, 100.0, 2.0, 4.0;
  const PosteriorStats stats = chain_statistics(make_chain(s), 0.5);
  CHECK(stats.means(0) == doctest::Approx(3.0));
}

TEST_CASE("chain_statistics: log tau^2 column is excluded") {
  Eigen::MatrixXd s(3, 3);
  s << 1, 2, -9, 1, 2, -9, 1, 2, -9;
  const PosteriorStats stats =
      chain_statistics(make_chain(s, /*has_noise=*/true), 0.0);
  CHECK(stats.size() == 2);
}

TEST_CASE("chain_statistics: fewer than 2 retained rows is rejected") {
  Eigen::MatrixXd s(2, 1);
  s << 1.0, 2.0;
  CHECK_THROWS(chain_statistics(make_chain(s), 0.5));
}

TEST_CASE("pruning_scores: STN and SPN arithmetic") {
  PosteriorStats stats;
  stats.means.resize(2);
  stats.stds.resize(2);
  stats.means << 0.5, 0.0;
  stats.stds << 0.25, 1.0;
  const Eigen::VectorXd stn = pruning_scores(stats, PruneMethod::kStn);
  const Eigen::VectorXd spn = pruning_scores(stats, PruneMethod::kSpn);
  CHECK(stn(0) == doctest::Approx(2.0));
  CHECK(spn(0) == doctest::Approx(0.75));
  CHECK(stn(1) == 0.0);
  CHECK(spn(1) == doctest::Approx(1.0));
}

TEST_CASE("pruning_scores: sigma = 0 conventions") {
  PosteriorStats stats;
  stats.means.resize(2);
  stats.stds.resize(2);
  stats.means << 0.3, 0.0;
  stats.stds << 0.0, 0.0;
  const Eigen::VectorXd stn = pruning_scores(stats, PruneMethod::kStn);
  CHECK(stn(0) == std::numeric_limits<double>::infinity());
  CHECK(stn(1) == 0.0);
}

TEST_CASE("pruning_scores: scaling one coordinate moves SPN but not STN") {
  Eigen::MatrixXd s(5, 2);
  s << 1, 1, 2, 2, 3, 3, 2, 2, 1, 1;
  Eigen::MatrixXd scaled = s;
  scaled.col(1) *= 10.0;
  const PosteriorStats a = chain_statistics(make_chain(s), 0.0);
  const PosteriorStats b = chain_statistics(make_chain(scaled), 0.0);
  const Eigen::VectorXd stn_a = pruning_scores(a, PruneMethod::kStn);
  const Eigen::VectorXd stn_b = pruning_scores(b, PruneMethod::kStn);
  const Eigen::VectorXd spn_a = pruning_scores(a, PruneMethod::kSpn);
  const Eigen::VectorXd spn_b = pruning_scores(b, PruneMethod::kSpn);
  CHECK(stn_b(1) == doctest::Approx(stn_a(1)));
  CHECK(spn_b(1) == doctest::Approx(10.0 * spn_a(1)));
}

TEST_CASE("build_mask: lowest scores pruned, floor(level*T) exact") {
  PosteriorStats stats;
  stats.means.resize(3);
  stats.stds = Eigen::VectorXd::Ones(3);
  stats.means << 0.1, 5.0, 3.0;  // STN scores = means here
  const PruneMask mask = build_mask(stats, PruneMethod::kStn, 1.0 / 3.0);
  CHECK(mask.pruned_count() == 1);
  CHECK(mask.keep[0] == 0);
  CHECK(mask.keep[1] == 1);
  CHECK(mask.keep[2] == 1);
}

TEST_CASE("build_mask: level 0 keeps everything") {
  PosteriorStats stats;
  stats.means = Eigen::VectorXd::Ones(5);
  stats.stds = Eigen::VectorXd::Ones(5);
  CHECK(build_mask(stats, PruneMethod::kSpn, 0.0).pruned_count() == 0);
}

TEST_CASE("build_mask: ties broken by lower index") {
  PosteriorStats stats;
  stats.means = Eigen::VectorXd::Ones(4);
  stats.stds = Eigen::VectorXd::Ones(4);  // all scores equal
  const PruneMask mask = build_mask(stats, PruneMethod::kStn, 0.5);
  CHECK(mask.keep[0] == 0);
  CHECK(mask.keep[1] == 0);
  CHECK(mask.keep[2] == 1);
  CHECK(mask.keep[3] == 1);
}

TEST_CASE("build_mask: cardinality exact across methods and levels") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d(0.0, 1.0);
  PosteriorStats stats;
  stats.means.resize(37);
  stats.stds.resize(37);
  for (int i = 0; i < 37; ++i) {
    stats.means(i) = d(rng);
    stats.stds(i) = std::abs(d(rng));
  }
  for (double level : {0.0, 0.1, 0.25, 0.5, 0.75, 0.99}) {
    const int expected = static_cast<int>(level * 37);
    CHECK(build_mask(stats, PruneMethod::kStn, level).pruned_count() == expected);
    CHECK(build_mask(stats, PruneMethod::kSpn, level).pruned_count() == expected);
    CHECK(build_random_mask(37, level, 9).pruned_count() == expected);
  }
}

TEST_CASE("build_random_mask: reproducible from seed") {
  const PruneMask a = build_random_mask(20, 0.5, 42);
  const PruneMask b = build_random_mask(20, 0.5, 42);
  const PruneMask c = build_random_mask(20, 0.5, 43);
  CHECK(a.keep == b.keep);
  CHECK(a.keep != c.keep);
  CHECK(a.pruned_count() == 10);
}

TEST_CASE("build_mask: level >= 1 rejected") {
  PosteriorStats stats;
  stats.means = Eigen::VectorXd::Ones(3);
  stats.stds = Eigen::VectorXd::Ones(3);
  CHECK_THROWS(build_mask(stats, PruneMethod::kStn, 1.0));
}

TEST_CASE("apply_mask: zeroes selected coordinates, preserves log tau^2") {
  PruneMask mask = PruneMask::keep_all(3);
  mask.keep[1] = 0;
  Eigen::VectorXd theta(3);
  theta << 1.0, 2.0, 3.0;
  Eigen::VectorXd out = apply_mask_copy(mask, theta);
  CHECK(out(0) == 1.0);
  CHECK(out(1) == 0.0);
  CHECK(out(2) == 3.0);

  Eigen::VectorXd state(4);
  state << 1.0, 2.0, 3.0, -0.7;  // trailing log tau^2
  mask.keep = {0, 0, 0};
  out = apply_mask_copy(mask, state);
  CHECK(out.head(3).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out(3) == -0.7);
}

TEST_CASE("apply_mask is idempotent") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd theta(10);
  for (int i = 0; i < 10; ++i) theta(i) = d(rng);
  const PruneMask mask = build_random_mask(10, 0.5, 3);
  const Eigen::VectorXd once = apply_mask_copy(mask, theta);
  CHECK(apply_mask_copy(mask, once) == once);
}

TEST_CASE("apply_mask: length mismatch rejected") {
  const PruneMask mask = PruneMask::keep_all(3);
  Eigen::VectorXd bad(5);
  bad.setZero();
  CHECK_THROWS(apply_mask_copy(mask, bad));
}

TEST_CASE("SPN ordering matches brute-force evaluation on the raw chain") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd s(40, 8);
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j) s(i, j) = d(rng) * (j + 1);
  const PosteriorStats stats = chain_statistics(make_chain(s), 0.0);
  const Eigen::VectorXd scores = pruning_scores(stats, PruneMethod::kSpn);
  for (int j = 0; j < 8; ++j) {
    const double mu = s.col(j).mean();
    const double var = (s.col(j).array() - mu).square().sum() / (s.rows() - 1);
    CHECK(scores(j) == doctest::Approx(std::abs(mu) + std::sqrt(var)));
  }
}

TEST_CASE("mask file roundtrip") {
  PruneMask mask = build_random_mask(15, 0.4, 77);
  const std::string path =
      (std::filesystem::temp_directory_path() / "cbnn_mask_test.txt").string();
  save_mask(mask, path);
  const PruneMask loaded = load_mask(path);
  CHECK(loaded.keep == mask.keep);
  CHECK(loaded.method == mask.method);
  CHECK(loaded.level == doctest::Approx(mask.level));
  REQUIRE(loaded.seed.has_value());
  CHECK(*loaded.seed == 77);
  std::remove(path.c_str());
}
