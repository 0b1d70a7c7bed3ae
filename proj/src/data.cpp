#include "cbnn/data.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cbnn {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, int row, const std::string& col) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("unparseable cell '" + cell + "' at row " +
                             std::to_string(row) + ", column " + col);
  }
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty dataset: " + path);
  const std::vector<std::string> header = split_line(line);

  auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw std::runtime_error("missing column '" + name + "' in " + path);
    return static_cast<int>(it - header.begin());
  };
  std::vector<int> feat_idx;
  for (const auto& c : schema.feature_columns) feat_idx.push_back(column_index(c));
  const int target_idx = column_index(schema.target_column);

  std::vector<std::vector<double>> feat_rows;
  std::vector<double> reg_targets;
  std::vector<int> labels;
  std::vector<std::string> label_names;
  int row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error("ragged row " + std::to_string(row) + " in " + path);
    std::vector<double> feats;
    for (std::size_t j = 0; j < feat_idx.size(); ++j)
      feats.push_back(parse_cell(cells[static_cast<std::size_t>(feat_idx[j])],
                                 row, schema.feature_columns[j]));
    feat_rows.push_back(std::move(feats));
    const std::string& tcell = cells[static_cast<std::size_t>(target_idx)];
    if (schema.task == Task::kRegression) {
      reg_targets.push_back(parse_cell(tcell, row, schema.target_column));
    } else {
      // labels become contiguous integers in first-appearance order
      const auto it = std::find(label_names.begin(), label_names.end(), tcell);
      if (it == label_names.end()) {
        labels.push_back(static_cast<int>(label_names.size()));
        label_names.push_back(tcell);
      } else {
        labels.push_back(static_cast<int>(it - label_names.begin()));
      }
    }
  }

  Dataset d;
  d.name = path;
  d.task = schema.task;
  const int n = static_cast<int>(feat_rows.size());
  const int nf = static_cast<int>(feat_idx.size());
  d.features.resize(n, nf);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < nf; ++j)
      d.features(i, j) = feat_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  if (schema.task == Task::kRegression) {
    d.targets.resize(n, 1);
    for (int i = 0; i < n; ++i) d.targets(i, 0) = reg_targets[static_cast<std::size_t>(i)];
  } else {
    d.labels = std::move(labels);
    d.label_names = std::move(label_names);
    d.num_classes = static_cast<int>(d.label_names.size());
  }
  return d;
}

SplitIndices split_train_test(int n, double ratio, std::uint64_t seed,
                              bool ordered) {
  if (n < 5) throw std::invalid_argument("split_train_test: need >= 5 rows");
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  if (!ordered) {
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
  }
  const int n_train = static_cast<int>(ratio * n);
  SplitIndices s;
  s.train.assign(idx.begin(), idx.begin() + n_train);
  s.test.assign(idx.begin() + n_train, idx.end());
  return s;
}

MinMaxScaler normalize_minmax(Dataset& dataset, const SplitIndices& split) {
  if (split.train.empty())
    throw std::invalid_argument("normalize_minmax: empty train split");
  const int nf = dataset.num_features();
  MinMaxScaler scaler;
  scaler.feature_min.resize(nf);
  scaler.feature_max.resize(nf);
  for (int j = 0; j < nf; ++j) {
    double lo = dataset.features(split.train[0], j), hi = lo;
    for (int i : split.train) {
      lo = std::min(lo, dataset.features(i, j));
      hi = std::max(hi, dataset.features(i, j));
    }
    if (hi <= lo)
      throw std::runtime_error("normalize_minmax: constant column " +
                               std::to_string(j) + " (drop it explicitly)");
    scaler.feature_min(j) = lo;
    scaler.feature_max(j) = hi;
    dataset.features.col(j) =
        (dataset.features.col(j).array() - lo) / (hi - lo);
  }
  if (dataset.task == Task::kRegression) {
    double lo = dataset.targets(split.train[0], 0), hi = lo;
    for (int i : split.train) {
      lo = std::min(lo, dataset.targets(i, 0));
      hi = std::max(hi, dataset.targets(i, 0));
    }
    if (hi <= lo)
      throw std::runtime_error("normalize_minmax: constant regression target");
    scaler.target_min = lo;
    scaler.target_max = hi;
    dataset.targets = (dataset.targets.array() - lo) / (hi - lo);
  }
  return scaler;
}

Dataset window_series(const Eigen::VectorXd& series, int window, int horizon,
                      const std::string& name) {
  if (window < 1 || horizon < 1)
    throw std::invalid_argument("window_series: window/horizon must be >= 1");
  const int len = static_cast<int>(series.size());
  const int n = len - window - horizon + 1;
  if (n < 1) throw std::invalid_argument("window_series: series too short");
  Dataset d;
  d.name = name;
  d.task = Task::kRegression;
  d.features.resize(n, window);
  d.targets.resize(n, 1);
  for (int i = 0; i < n; ++i) {
    d.features.row(i) = series.segment(i, window).transpose();
    d.targets(i, 0) = series(i + window + horizon - 1);
  }
  return d;
}

Eigen::MatrixXd one_hot(const std::vector<int>& labels, int k) {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(static_cast<int>(labels.size()), k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k)
      throw std::out_of_range("one_hot: label out of range at row " +
                              std::to_string(i));
    z(static_cast<int>(i), labels[i]) = 1.0;
  }
  return z;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m,
                            const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<int>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    out.row(static_cast<int>(i)) = m.row(idx[i]);
  return out;
}

std::vector<int> select_rows(const std::vector<int>& v,
                             const std::vector<int>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(v[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace cbnn
