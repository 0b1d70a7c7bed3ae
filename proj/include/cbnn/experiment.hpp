#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cbnn/data.hpp"
#include "cbnn/mask.hpp"
#include "cbnn/model.hpp"
#include "cbnn/posterior.hpp"
#include "cbnn/sampler.hpp"

namespace cbnn {

struct ExperimentConfig {
  std::string dataset;        // builtin name or a CSV path
  std::string data_dir = "data";
  CsvSchema schema;           // used when dataset is a CSV path
  bool ordered_split = false; // time series keep temporal order
  int window = 4;             // series embedding
  int horizon = 1;

  ModelSpec model;
  SamplerConfig sampler;
  PriorConfig prior;

  PruneMethod method = PruneMethod::kStn;
  double level = 0.25;
  int resample_length = 1000;
  int thinning = 10;
  double init_std = 0.5;      // theta_0 ~ Normal(0, init_std^2)

  int n_runs = 30;
  std::uint64_t master_seed = 0;
  std::string out_dir = "out";

  void validate() const;
};

/// Fills dataset-specific defaults (architecture, prior variance, proposal
/// scales, split policy) for the bundled datasets: iris, abalone, sunspots,
/// lazer. Throws on an unknown name.
void apply_builtin_defaults(ExperimentConfig& cfg, const std::string& name);
bool is_builtin_dataset(const std::string& name);
std::vector<std::string> builtin_dataset_names();

/// Loads either a bundled dataset by name (resolved against cfg.data_dir) or
/// a user CSV through cfg.schema.
Dataset load_experiment_dataset(const ExperimentConfig& cfg);

/// Plain-text `key = value` config lines; '#' starts a comment. Unknown keys
/// are an error. `dataset = <builtin>` pulls in the builtin defaults first so
/// later lines can override them.
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& key,
                       const std::string& value);

struct StageMetrics {
  double primary = 0.0;            // accuracy % or RMSE, per task
  std::vector<double> auc;         // per class, classification only
};

struct RunResult {
  int run_index = 0;
  bool failed = false;
  std::string failure_stage;
  StageMetrics pre_prune, post_prune, post_resample;
  double acceptance_rate = 0.0;
  double max_split_rhat = 0.0;
  Eigen::VectorXd per_parameter_rhat;  // split-Rhat of the pre-prune chain
  double seconds = 0.0;
  PruneMask mask;
  Eigen::MatrixXd mean_class_probabilities;  // test-set posterior mean, cls
};

struct PosteriorPredictive {
  Eigen::MatrixXd mean;       // N x output_size
  Eigen::MatrixXd lower;      // 5th percentile per point/output
  Eigen::MatrixXd upper;      // 95th percentile per point/output
  std::vector<int> labels;    // argmax of mean rows (classification)
};

/// Forward pass per thinned post-burn-in sample; mean and 5%/95% band across
/// samples. An optional mask is applied to every sample first.
PosteriorPredictive posterior_predictive(const ModelSpec& spec,
                                         const Eigen::MatrixXd& samples,
                                         const Eigen::MatrixXd& inputs,
                                         int thinning,
                                         const PruneMask* mask = nullptr);

/// Algorithm stages: init, sample, evaluate, prune, evaluate masked,
/// resample, evaluate. Deterministic given (cfg, run_index). Failures are
/// recorded in the result, not thrown.
RunResult run_pipeline(const ExperimentConfig& cfg, const Dataset& dataset,
                       const SplitIndices& split, int run_index,
                       Chain* chain_out = nullptr,
                       Chain* resampled_out = nullptr);

struct MetricSummary {
  std::string stage;
  std::string metric;
  double mean = 0.0;
  double std_dev = 0.0;  // sample std (n-1); 0 with a flag for single runs
  int n_runs = 0;
};

struct ExperimentSummary {
  std::string dataset;
  std::string method;
  double level = 0.0;
  std::vector<MetricSummary> metrics;
  int n_failed = 0;
  bool single_run = false;
};

ExperimentSummary aggregate_runs(const ExperimentConfig& cfg,
                                 const std::vector<RunResult>& results);

/// Writes results.csv, rhat.csv, per-class roc_class_k.csv, and per-run
/// chain/mask files into out_dir.
void export_results(const ExperimentConfig& cfg,
                    const ExperimentSummary& summary,
                    const std::vector<RunResult>& results,
                    const Dataset& dataset, const SplitIndices& split);

/// Full experiment: n_runs pipelines plus aggregation and export.
ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 bool write_outputs = true,
                                 std::vector<RunResult>* results_out = nullptr);

}  // namespace cbnn
