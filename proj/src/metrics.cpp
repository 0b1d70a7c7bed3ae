#include "cbnn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace cbnn {

double rmse(const Eigen::VectorXd& predictions,
            const Eigen::VectorXd& targets) {
  if (predictions.size() != targets.size() || predictions.size() == 0)
    throw std::invalid_argument("rmse: length mismatch or empty input");
  return std::sqrt((predictions - targets).squaredNorm() /
                   static_cast<double>(predictions.size()));
}

double accuracy_percent(const std::vector<int>& predicted,
                        const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw std::invalid_argument("accuracy: length mismatch or empty input");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    correct += (predicted[i] == truth[i]);
  return 100.0 * static_cast<double>(correct) /
         static_cast<double>(truth.size());
}

RocCurve roc_curve(const Eigen::VectorXd& scores,
                   const std::vector<int>& binary_labels, int class_index) {
  const auto n = scores.size();
  if (static_cast<Eigen::Index>(binary_labels.size()) != n || n == 0)
    throw std::invalid_argument("roc_curve: length mismatch or empty input");
  double n_pos = 0, n_neg = 0;
  for (int y : binary_labels) (y ? n_pos : n_neg) += 1;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("roc_curve: labels are single-class");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores(a) > scores(b); });

  RocCurve curve;
  curve.class_index = class_index;
  curve.points.push_back({0.0, 0.0});
  double tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores(order[i]);
    // tied scores fall on the same threshold and move as one step
    while (i < order.size() && scores(order[i]) == s) {
      (binary_labels[static_cast<std::size_t>(order[i])] ? tp : fp) += 1;
      ++i;
    }
    curve.points.push_back({fp / n_neg, tp / n_pos});
  }
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

std::vector<RocCurve> one_vs_all_roc(const Eigen::MatrixXd& class_probabilities,
                                     const std::vector<int>& labels) {
  const auto k = class_probabilities.cols();
  std::vector<RocCurve> curves;
  for (Eigen::Index c = 0; c < k; ++c) {
    std::vector<int> binary(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
      binary[i] = labels[i] == c ? 1 : 0;
    curves.push_back(
        roc_curve(class_probabilities.col(c), binary, static_cast<int>(c)));
  }
  return curves;
}

void export_roc(const RocCurve& curve, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write roc file: " + path);
  f.precision(17);
  f << "class,fpr,tpr\n";
  for (const auto& p : curve.points)
    f << curve.class_index << "," << p.fpr << "," << p.tpr << "\n";
}

}  // namespace cbnn
