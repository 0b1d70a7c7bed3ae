#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "cbnn/diagnostics.hpp"

using namespace cbnn;

TEST_CASE("gelman_rubin: identical chains give sqrt((n-1)/n)") {
  Eigen::VectorXd c(4);
  c << 1, 2, 3, 4;
  CHECK(gelman_rubin({c, c}) == doctest::Approx(std::sqrt(3.0 / 4.0)));
  Eigen::VectorXd longer = Eigen::VectorXd::LinSpaced(100, 0.0, 1.0);
  CHECK(gelman_rubin({longer, longer, longer}) ==
        doctest::Approx(std::sqrt(99.0 / 100.0)));
}

TEST_CASE("gelman_rubin: zero within-chain variance is flagged as +inf") {
  Eigen::VectorXd a = Eigen::VectorXd::Constant(5, 1.0);
  Eigen::VectorXd b = Eigen::VectorXd::Constant(5, 2.0);
  CHECK(gelman_rubin({a, b}) == std::numeric_limits<double>::infinity());
}

TEST_CASE("gelman_rubin: same-distribution chains are near 1") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<Eigen::VectorXd> chains;
  for (int c = 0; c < 4; ++c) {
    Eigen::VectorXd v(10000);
    for (int i = 0; i < v.size(); ++i) v(i) = d(rng);
    chains.push_back(v);
  }
  const double r = gelman_rubin(chains);
  CHECK(r >= 0.99);
  CHECK(r <= 1.05);
}

TEST_CASE("gelman_rubin: invariant under shift and scale") {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<Eigen::VectorXd> chains;
  for (int c = 0; c < 3; ++c) {
    Eigen::VectorXd v(200);
    for (int i = 0; i < v.size(); ++i) v(i) = d(rng) + c * 0.3;
    chains.push_back(v);
  }
  const double base = gelman_rubin(chains);
  std::vector<Eigen::VectorXd> moved, scaled;
  for (const auto& c : chains) {
    moved.push_back(c.array() + 7.5);
    scaled.push_back(c * -3.0);
  }
  CHECK(gelman_rubin(moved) == doctest::Approx(base).epsilon(1e-10));
  CHECK(gelman_rubin(scaled) == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("gelman_rubin: preconditions") {
  Eigen::VectorXd c(4);
  c << 1, 2, 3, 4;
  CHECK_THROWS(gelman_rubin({c}));
  Eigen::VectorXd one(1);
  one << 1.0;
  CHECK_THROWS(gelman_rubin({one, one}));
}

TEST_CASE("psrf: headline is the max over parameters, degenerates flagged") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd a(50, 2), b(50, 2);
  for (int i = 0; i < 50; ++i) {
    a(i, 0) = d(rng);
    b(i, 0) = d(rng) + 4.0;  // badly separated chains on parameter 0
    a(i, 1) = d(rng);
    b(i, 1) = d(rng);
  }
  const PsrfReport report = psrf({a, b});
  CHECK(report.per_parameter_rhat.size() == 2);
  CHECK(report.per_parameter_rhat(0) > report.per_parameter_rhat(1));
  CHECK(report.max_rhat == report.per_parameter_rhat.maxCoeff());
  CHECK_FALSE(report.degenerate);

  Eigen::MatrixXd ca = Eigen::MatrixXd::Constant(10, 1, 1.0);
  Eigen::MatrixXd cb = Eigen::MatrixXd::Constant(10, 1, 2.0);
  const PsrfReport bad = psrf({ca, cb});
  CHECK(bad.degenerate);
  CHECK(bad.max_rhat == std::numeric_limits<double>::infinity());
}

TEST_CASE("split_psrf halves one run into two chains") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd s(2000, 1);
  for (int i = 0; i < s.rows(); ++i) s(i, 0) = d(rng);
  const PsrfReport report = split_psrf(s);
  CHECK(report.n_chains == 2);
  CHECK(report.n_samples == 1000);
  CHECK(report.max_rhat < 1.05);
}

TEST_CASE("acceptance_rate: frozen cases") {
  Chain chain;
  chain.samples = Eigen::MatrixXd::Zero(4, 1);
  chain.log_likelihoods = Eigen::VectorXd::Zero(4);
  chain.accepted = {1, 1, 1, 1};
  CHECK(acceptance_rate(chain) == 1.0);
  chain.accepted = {0, 0, 0, 0};
  CHECK(acceptance_rate(chain) == 0.0);
  chain.accepted = {1, 0, 1, 0};
  CHECK(acceptance_rate(chain) == 0.5);
}

TEST_CASE("export_trace writes one row per sample, exact projection") {
  Chain chain;
  chain.samples.resize(3, 2);
  chain.samples << 0.5, 10.0, 1.5, 20.0, 2.5, 30.0;
  chain.log_likelihoods = Eigen::VectorXd::Zero(3);
  chain.accepted = {1, 1, 1};
  const std::string path =
      (std::filesystem::temp_directory_path() / "cbnn_trace_test.csv").string();
  export_trace(chain, {1}, path);
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  CHECK(line == "sample_index,p1");
  std::getline(f, line);
  CHECK(line == "0,10");
  std::getline(f, line);
  CHECK(line == "1,20");
  std::getline(f, line);
  CHECK(line == "2,30");
  CHECK_FALSE(std::getline(f, line));
  std::remove(path.c_str());

  CHECK_THROWS(export_trace(chain, {5}, path));
  // empty index list still writes a header-only file
  export_trace(chain, {}, path);
  std::ifstream g(path);
  std::getline(g, line);
  CHECK(line == "sample_index");
  std::remove(path.c_str());
}
