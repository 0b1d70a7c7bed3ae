#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "cbnn/metrics.hpp"

using namespace cbnn;

namespace {

// Mann-Whitney pairwise concordance with ties counted 1/2
double concordance(const Eigen::VectorXd& scores,
                   const std::vector<int>& labels) {
  double pairs = 0, win = 0;
  for (int i = 0; i < scores.size(); ++i)
    for (int j = 0; j < scores.size(); ++j) {
      if (!(labels[static_cast<std::size_t>(i)] == 1 &&
            labels[static_cast<std::size_t>(j)] == 0))
        continue;
      pairs += 1;
      if (scores(i) > scores(j)) win += 1;
      else if (scores(i) == scores(j)) win += 0.5;
    }
  return win / pairs;
}

}  // namespace

TEST_CASE("rmse: frozen cases") {
  Eigen::VectorXd a(2), b(2);
  a << 0, 0;
  b << 3, 4;
  CHECK(rmse(b, b) == 0.0);
  CHECK(rmse(a, b) == doctest::Approx(std::sqrt(12.5)));
  CHECK_THROWS(rmse(a, Eigen::VectorXd::Zero(3)));
}

TEST_CASE("rmse: joint permutation invariance and affine identity") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd p(10), t(10);
  for (int i = 0; i < 10; ++i) {
    p(i) = d(rng);
    t(i) = d(rng);
  }
  const double base = rmse(p, t);
  std::vector<int> perm(10);
  for (int i = 0; i < 10; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::VectorXd p2(10), t2(10);
  for (int i = 0; i < 10; ++i) {
    p2(i) = p(perm[static_cast<std::size_t>(i)]);
    t2(i) = t(perm[static_cast<std::size_t>(i)]);
  }
  CHECK(rmse(p2, t2) == doctest::Approx(base).epsilon(1e-12));
  // RMSE(a*x + b, a*y + b) = |a| * RMSE(x, y)
  const double a = -2.5, b = 0.7;
  CHECK(rmse((a * p).array() + b, (a * t).array() + b) ==
        doctest::Approx(std::abs(a) * base).epsilon(1e-12));
}

TEST_CASE("accuracy: frozen cases") {
  CHECK(accuracy_percent({0, 1, 2}, {0, 1, 2}) == 100.0);
  CHECK(accuracy_percent({0, 0, 0}, {0, 1, 2}) ==
        doctest::Approx(100.0 / 3.0));
  CHECK_THROWS(accuracy_percent({}, {}));
  CHECK_THROWS(accuracy_percent({0}, {0, 1}));
}

TEST_CASE("roc_curve: perfect separation passes through (0,1)") {
  Eigen::VectorXd scores(4);
  scores << 0.9, 0.8, 0.2, 0.1;
  const RocCurve curve = roc_curve(scores, {1, 1, 0, 0});
  bool hits = false;
  for (const auto& p : curve.points) hits |= (p.fpr == 0.0 && p.tpr == 1.0);
  CHECK(hits);
  CHECK(auc(curve) == doctest::Approx(1.0));
}

TEST_CASE("roc_curve: identical scores give the diagonal") {
  Eigen::VectorXd scores = Eigen::VectorXd::Constant(6, 0.5);
  const RocCurve curve = roc_curve(scores, {1, 0, 1, 0, 1, 0});
  REQUIRE(curve.points.size() == 2);  // (0,0) then one grouped step to (1,1)
  CHECK(curve.points.back().fpr == 1.0);
  CHECK(curve.points.back().tpr == 1.0);
  CHECK(auc(curve) == doctest::Approx(0.5));
}

TEST_CASE("roc_curve: endpoints and monotonicity") {
  Eigen::VectorXd scores(5);
  scores << 0.1, 0.9, 0.4, 0.4, 0.7;
  const RocCurve curve = roc_curve(scores, {0, 1, 1, 0, 0});
  CHECK(curve.points.front().fpr == 0.0);
  CHECK(curve.points.front().tpr == 0.0);
  CHECK(curve.points.back().fpr == 1.0);
  CHECK(curve.points.back().tpr == 1.0);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
    CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
  }
}

TEST_CASE("roc_curve: single-class labels rejected") {
  Eigen::VectorXd scores(3);
  scores << 0.1, 0.2, 0.3;
  CHECK_THROWS(roc_curve(scores, {1, 1, 1}));
}

TEST_CASE("auc: the 4-point 0.75 case") {
  Eigen::VectorXd scores(4);
  scores << 0.9, 0.4, 0.3, 0.1;
  const std::vector<int> labels{1, 0, 1, 0};
  CHECK(auc(roc_curve(scores, labels)) == doctest::Approx(0.75));
  CHECK(concordance(scores, labels) == doctest::Approx(0.75));
}

TEST_CASE("auc equals pairwise concordance on random small instances") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> n_points(4, 50);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> level(0, 5);  // coarse scores force ties
  for (int it = 0; it < 200; ++it) {
    const int n = n_points(rng);
    Eigen::VectorXd scores(n);
    std::vector<int> labels(static_cast<std::size_t>(n));
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      scores(i) = level(rng) / 5.0;
      labels[static_cast<std::size_t>(i)] = coin(rng);
      pos += labels[static_cast<std::size_t>(i)];
    }
    if (pos == 0 || pos == n) continue;
    CHECK(auc(roc_curve(scores, labels)) ==
          doctest::Approx(concordance(scores, labels)).epsilon(1e-12));
  }
}

TEST_CASE("auc invariant under strictly increasing score transforms") {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> d(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  Eigen::VectorXd scores(30);
  std::vector<int> labels(30);
  labels[0] = 1;
  labels[1] = 0;
  for (int i = 0; i < 30; ++i) {
    scores(i) = d(rng);
    if (i > 1) labels[static_cast<std::size_t>(i)] = coin(rng);
  }
  const double base = auc(roc_curve(scores, labels));
  const Eigen::VectorXd warped =
      (scores.array() * 3.0).exp();  // strictly increasing
  CHECK(auc(roc_curve(warped, labels)) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("one_vs_all_roc emits one curve per class") {
  Eigen::MatrixXd probs(4, 3);
  probs << 0.7, 0.2, 0.1, 0.1, 0.8, 0.1, 0.2, 0.3, 0.5, 0.6, 0.3, 0.1;
  const auto curves = one_vs_all_roc(probs, {0, 1, 2, 0});
  REQUIRE(curves.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(curves[static_cast<std::size_t>(k)].class_index == k);
  CHECK(auc(curves[0]) == doctest::Approx(1.0));  // class 0 separated here
}
