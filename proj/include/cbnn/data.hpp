#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cbnn/model.hpp"

namespace cbnn {

/// Column roles for CSV ingestion. Feature columns parse as numbers; the
/// target column parses as a number (regression) or as a label mapped to
/// contiguous integers in first-appearance order (classification).
struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::string target_column;
  Task task = Task::kClassification;
};

struct Dataset {
  std::string name;
  Task task = Task::kClassification;
  Eigen::MatrixXd features;     // N x F
  Eigen::MatrixXd targets;      // N x output_size (regression)
  std::vector<int> labels;      // N (classification), values in 0..K-1
  std::vector<std::string> label_names;  // classification, index = label
  int num_classes = 0;

  int rows() const { return static_cast<int>(features.rows()); }
  int num_features() const { return static_cast<int>(features.cols()); }
};

struct SplitIndices {
  std::vector<int> train;
  std::vector<int> test;
};

Dataset load_csv(const std::string& path, const CsvSchema& schema);

/// ordered=true keeps temporal order (first 60% train); otherwise a seeded
/// uniform shuffle. |train| = floor(ratio * N).
SplitIndices split_train_test(int n, double ratio, std::uint64_t seed,
                              bool ordered);

struct MinMaxScaler {
  Eigen::VectorXd feature_min, feature_max;
  double target_min = 0.0, target_max = 1.0;  // regression only
};

/// Fits column min/max on the train rows and maps all rows through
/// x' = (x - min)/(max - min). Regression targets are scaled the same way.
/// A constant train column is an error (must be dropped explicitly).
MinMaxScaler normalize_minmax(Dataset& dataset, const SplitIndices& split);

/// Lag embedding: sample i = (s_i .. s_{i+window-1}), target
/// s_{i+window+horizon-1}; count = len - window - horizon + 1.
Dataset window_series(const Eigen::VectorXd& series, int window, int horizon,
                      const std::string& name = "series");

Eigen::MatrixXd one_hot(const std::vector<int>& labels, int k);

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m,
                            const std::vector<int>& idx);
std::vector<int> select_rows(const std::vector<int>& v,
                             const std::vector<int>& idx);

}  // namespace cbnn
