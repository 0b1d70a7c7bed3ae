#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace cbnn {

double rmse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& targets);

/// Percent correct, in [0, 100].
double accuracy_percent(const std::vector<int>& predicted,
                        const std::vector<int>& truth);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // starts at (0,0), ends at (1,1)
  int class_index = 0;
};

/// Thresholds sweep the distinct scores in descending order; tied scores move
/// as one step. Requires at least one positive and one negative label.
RocCurve roc_curve(const Eigen::VectorXd& scores,
                   const std::vector<int>& binary_labels, int class_index = 0);

/// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

/// K curves, class k vs rest, scored by column k of `class_probabilities`.
std::vector<RocCurve> one_vs_all_roc(const Eigen::MatrixXd& class_probabilities,
                                     const std::vector<int>& labels);

void export_roc(const RocCurve& curve, const std::string& path);

}  // namespace cbnn
