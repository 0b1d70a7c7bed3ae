#include "cbnn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cbnn/diagnostics.hpp"
#include "cbnn/metrics.hpp"
#include "cbnn/pruning.hpp"

namespace cbnn {
namespace {

namespace fs = std::filesystem;

Eigen::VectorXd read_series_column(const std::string& path,
                                   const std::string& column) {
  CsvSchema schema;
  schema.feature_columns = {column};
  schema.target_column = column;
  schema.task = Task::kRegression;
  const Dataset d = load_csv(path, schema);
  return d.features.col(0);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool parse_bool(const std::string& v) {
  const std::string s = lower(v);
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw std::invalid_argument("config: expected a boolean, got '" + v + "'");
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

/// Initial sampler state from theta: for regression, log tau^2 starts at the
/// log residual variance so the initial likelihood is finite and well-scaled.
Eigen::VectorXd initial_state(const ModelSpec& spec,
                              const Eigen::VectorXd& theta,
                              const Eigen::MatrixXd& train_inputs,
                              const Eigen::MatrixXd& train_targets) {
  if (!spec.has_noise_param()) return theta;
  const Eigen::MatrixXd resid =
      train_targets - forward(spec, theta, train_inputs);
  const double var = resid.array().square().mean() -
                     resid.array().mean() * resid.array().mean();
  Eigen::VectorXd state(theta.size() + 1);
  state.head(theta.size()) = theta;
  state(theta.size()) = std::log(std::max(var, 1e-6));
  return state;
}

double percentile(std::vector<double>& values, double q) {
  // linear interpolation between order statistics
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

StageMetrics evaluate_stage(const ExperimentConfig& cfg, const Dataset& data,
                            const SplitIndices& split,
                            const Eigen::MatrixXd& samples,
                            const PruneMask* mask,
                            Eigen::MatrixXd* mean_probs_out) {
  const Eigen::MatrixXd test_x = select_rows(data.features, split.test);
  const PosteriorPredictive pp =
      posterior_predictive(cfg.model, samples, test_x, cfg.thinning, mask);
  StageMetrics out;
  if (cfg.model.task == Task::kClassification) {
    const std::vector<int> truth = select_rows(data.labels, split.test);
    out.primary = accuracy_percent(pp.labels, truth);
    for (const auto& curve : one_vs_all_roc(pp.mean, truth))
      out.auc.push_back(auc(curve));
    if (mean_probs_out) *mean_probs_out = pp.mean;
  } else {
    const Eigen::MatrixXd test_y = select_rows(data.targets, split.test);
    out.primary = rmse(pp.mean.col(0), test_y.col(0));
  }
  return out;
}

void append_metric(ExperimentSummary& summary,
                   const std::vector<RunResult>& ok, const std::string& stage,
                   const std::string& metric,
                   const std::function<double(const RunResult&)>& get) {
  const int n = static_cast<int>(ok.size());
  double mean = 0.0;
  for (const auto& r : ok) mean += get(r);
  mean /= n;
  double var = 0.0;
  for (const auto& r : ok) var += (get(r) - mean) * (get(r) - mean);
  MetricSummary m;
  m.stage = stage;
  m.metric = metric;
  m.mean = mean;
  m.std_dev = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  m.n_runs = n;
  summary.metrics.push_back(std::move(m));
}

}  // namespace

void ExperimentConfig::validate() const {
  model.validate();
  sampler.validate();
  prior.validate();
  if (level < 0.0 || level >= 1.0)
    throw std::invalid_argument("ExperimentConfig: level must be in [0,1)");
  if (n_runs < 1) throw std::invalid_argument("ExperimentConfig: n_runs must be >= 1");
  if (resample_length < 1 || thinning < 1)
    throw std::invalid_argument("ExperimentConfig: resample_length/thinning must be >= 1");
  if (init_std <= 0.0) throw std::invalid_argument("ExperimentConfig: init_std must be > 0");
  if (dataset.empty()) throw std::invalid_argument("ExperimentConfig: dataset not set");
}

std::vector<std::string> builtin_dataset_names() {
  return {"iris", "abalone", "sunspots", "lazer"};
}

bool is_builtin_dataset(const std::string& name) {
  const auto names = builtin_dataset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

void apply_builtin_defaults(ExperimentConfig& cfg, const std::string& name) {
  cfg.dataset = name;
  cfg.sampler.proposal_std = 0.025;
  cfg.sampler.step_size_epsilon = 0.025 * 0.025;
  cfg.sampler.langevin_probability = 0.5;
  if (name == "iris") {
    cfg.model = {4, 12, 3, Task::kClassification};
    cfg.prior.sigma_sq = 25.0;
    cfg.schema.feature_columns = {"sepal_length", "sepal_width",
                                  "petal_length", "petal_width"};
    cfg.schema.target_column = "species";
    cfg.schema.task = Task::kClassification;
    cfg.ordered_split = false;
  } else if (name == "abalone") {
    cfg.model = {8, 12, 4, Task::kClassification};
    // a tight prior concentrates importance so heavy pruning stays lossless
    cfg.prior.sigma_sq = 1.0;
    cfg.schema.feature_columns = {"sex",          "length",
                                  "diameter",     "height",
                                  "whole_weight", "shucked_weight",
                                  "viscera_weight", "shell_weight"};
    cfg.schema.target_column = "ring_class";
    cfg.schema.task = Task::kClassification;
    cfg.ordered_split = false;
  } else if (name == "sunspots" || name == "lazer") {
    cfg.model = {4, 5, 1, Task::kRegression};
    cfg.prior.sigma_sq = 25.0;
    cfg.ordered_split = true;
    cfg.window = 4;
    cfg.horizon = 1;
  } else {
    throw std::invalid_argument("unknown builtin dataset: " + name);
  }
}

Dataset load_experiment_dataset(const ExperimentConfig& cfg) {
  if (is_builtin_dataset(cfg.dataset)) {
    const std::string path =
        (fs::path(cfg.data_dir) / (cfg.dataset + ".csv")).string();
    if (cfg.dataset == "sunspots" || cfg.dataset == "lazer") {
      Dataset d = window_series(read_series_column(path, "value"), cfg.window,
                                cfg.horizon, cfg.dataset);
      return d;
    }
    Dataset d = load_csv(path, cfg.schema);
    d.name = cfg.dataset;
    return d;
  }
  if (cfg.schema.feature_columns.empty() || cfg.schema.target_column.empty())
    throw std::invalid_argument(
        "custom CSV dataset needs feature_columns and target_column");
  return load_csv(cfg.dataset, cfg.schema);
}

void apply_config_line(ExperimentConfig& cfg, const std::string& key,
                       const std::string& value) {
  if (key == "dataset") {
    if (is_builtin_dataset(value)) apply_builtin_defaults(cfg, value);
    else cfg.dataset = value;
  } else if (key == "data_dir") cfg.data_dir = value;
  else if (key == "ordered_split") cfg.ordered_split = parse_bool(value);
  else if (key == "window") cfg.window = std::stoi(value);
  else if (key == "horizon") cfg.horizon = std::stoi(value);
  else if (key == "input_size") cfg.model.input_size = std::stoi(value);
  else if (key == "hidden_size") cfg.model.hidden_size = std::stoi(value);
  else if (key == "output_size") cfg.model.output_size = std::stoi(value);
  else if (key == "task") {
    const std::string t = lower(value);
    if (t == "regression") { cfg.model.task = Task::kRegression; cfg.schema.task = Task::kRegression; }
    else if (t == "classification") { cfg.model.task = Task::kClassification; cfg.schema.task = Task::kClassification; }
    else throw std::invalid_argument("config: unknown task '" + value + "'");
  } else if (key == "feature_columns") {
    cfg.schema.feature_columns.clear();
    std::stringstream ss(value);
    std::string c;
    while (ss >> c) cfg.schema.feature_columns.push_back(c);
  } else if (key == "target_column") cfg.schema.target_column = value;
  else if (key == "sigma_sq") cfg.prior.sigma_sq = std::stod(value);
  else if (key == "nu1") cfg.prior.nu1 = std::stod(value);
  else if (key == "nu2") cfg.prior.nu2 = std::stod(value);
  else if (key == "max_samples" || key == "samples")
    cfg.sampler.max_samples = std::stoi(value);
  else if (key == "burn_in_fraction") cfg.sampler.burn_in_fraction = std::stod(value);
  else if (key == "step_size_epsilon") cfg.sampler.step_size_epsilon = std::stod(value);
  else if (key == "proposal_std") cfg.sampler.proposal_std = std::stod(value);
  else if (key == "tau_proposal_std") cfg.sampler.tau_proposal_std = std::stod(value);
  else if (key == "langevin_probability") cfg.sampler.langevin_probability = std::stod(value);
  else if (key == "method") cfg.method = prune_method_from_string(value);
  else if (key == "level") cfg.level = std::stod(value);
  else if (key == "resample_length") cfg.resample_length = std::stoi(value);
  else if (key == "thinning") cfg.thinning = std::stoi(value);
  else if (key == "init_std") cfg.init_std = std::stod(value);
  else if (key == "n_runs" || key == "runs") cfg.n_runs = std::stoi(value);
  else if (key == "seed") cfg.master_seed = std::stoull(value);
  else if (key == "out_dir") cfg.out_dir = value;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

PosteriorPredictive posterior_predictive(const ModelSpec& spec,
                                         const Eigen::MatrixXd& samples,
                                         const Eigen::MatrixXd& inputs,
                                         int thinning, const PruneMask* mask) {
  if (samples.rows() == 0)
    throw std::invalid_argument("posterior_predictive: no retained samples");
  const int t = spec.param_count();
  std::vector<Eigen::MatrixXd> outputs;
  for (int i = 0; i < samples.rows(); i += thinning) {
    Eigen::VectorXd theta = samples.row(i).head(t);
    if (mask) apply_mask(*mask, theta);
    outputs.push_back(forward(spec, theta, inputs));
  }
  const int s = static_cast<int>(outputs.size());
  const auto n = inputs.rows();
  const int o = spec.output_size;

  PosteriorPredictive pp;
  pp.mean = Eigen::MatrixXd::Zero(n, o);
  for (const auto& m : outputs) pp.mean += m;
  pp.mean /= s;
  pp.lower.resize(n, o);
  pp.upper.resize(n, o);
  std::vector<double> column(static_cast<std::size_t>(s));
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < o; ++j) {
      for (int k = 0; k < s; ++k)
        column[static_cast<std::size_t>(k)] = outputs[static_cast<std::size_t>(k)](i, j);
      pp.lower(i, j) = percentile(column, 0.05);
      pp.upper(i, j) = percentile(column, 0.95);
    }
  if (spec.task == Task::kClassification) {
    pp.labels.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index arg;
      pp.mean.row(i).maxCoeff(&arg);
      pp.labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
    }
  }
  return pp;
}

RunResult run_pipeline(const ExperimentConfig& cfg, const Dataset& dataset,
                       const SplitIndices& split, int run_index,
                       Chain* chain_out, Chain* resampled_out) {
  RunResult result;
  result.run_index = run_index;
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t run_seed =
      cfg.master_seed + static_cast<std::uint64_t>(run_index);
  std::string stage = "init";
  try {
    const Eigen::MatrixXd train_x = select_rows(dataset.features, split.train);
    const Eigen::MatrixXd train_y =
        cfg.model.task == Task::kClassification
            ? one_hot(select_rows(dataset.labels, split.train),
                      cfg.model.output_size)
            : select_rows(dataset.targets, split.train);
    const BnnTarget target(cfg.model, train_x, train_y, cfg.prior);

    std::mt19937_64 init_rng(run_seed * 131 + 17);
    std::normal_distribution<double> init_draw(0.0, cfg.init_std);
    Eigen::VectorXd theta0(cfg.model.param_count());
    for (int i = 0; i < theta0.size(); ++i) theta0(i) = init_draw(init_rng);

    stage = "sample";
    SamplerConfig scfg = cfg.sampler;
    scfg.seed = run_seed * 31 + 1;
    const Chain chain = sample_chain(
        target, scfg, initial_state(cfg.model, theta0, train_x, train_y));
    result.acceptance_rate = acceptance_rate(chain);

    stage = "evaluate_pre_prune";
    const Eigen::MatrixXd post = chain.post_burn_in(scfg.burn_in_fraction);
    result.pre_prune = evaluate_stage(cfg, dataset, split, post, nullptr, nullptr);
    {
      const PsrfReport report = split_psrf(post.leftCols(chain.theta_dim()));
      result.max_split_rhat = report.max_rhat;
      result.per_parameter_rhat = report.per_parameter_rhat;
    }

    stage = "prune";
    const PosteriorStats stats =
        chain_statistics(chain, scfg.burn_in_fraction);
    result.mask = build_mask(stats, cfg.method, cfg.level, run_seed * 7 + 3);

    stage = "evaluate_post_prune";
    result.post_prune =
        evaluate_stage(cfg, dataset, split, post, &result.mask, nullptr);

    stage = "resample";
    Eigen::VectorXd theta_init = apply_mask_copy(result.mask, stats.means);
    SamplerConfig rcfg = cfg.sampler;
    rcfg.seed = run_seed * 31 + 2;
    const Chain resampled = resample_chain(
        target, rcfg, initial_state(cfg.model, theta_init, train_x, train_y),
        result.mask, cfg.resample_length);

    stage = "evaluate_post_resample";
    result.post_resample =
        evaluate_stage(cfg, dataset, split, resampled.samples, &result.mask,
                       &result.mean_class_probabilities);

    if (chain_out) *chain_out = chain;
    if (resampled_out) *resampled_out = resampled;
  } catch (const std::exception& e) {
    result.failed = true;
    result.failure_stage = stage + ": " + e.what();
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

ExperimentSummary aggregate_runs(const ExperimentConfig& cfg,
                                 const std::vector<RunResult>& results) {
  std::vector<RunResult> ok;
  int failed = 0;
  for (const auto& r : results) {
    if (r.failed) ++failed;
    else ok.push_back(r);
  }
  if (ok.empty())
    throw std::runtime_error("aggregate_runs: no successful runs");
  ExperimentSummary summary;
  summary.dataset = cfg.dataset;
  summary.method = to_string(cfg.method);
  summary.level = cfg.level;
  summary.n_failed = failed;
  summary.single_run = ok.size() == 1;
  const std::string metric =
      cfg.model.task == Task::kClassification ? "accuracy" : "rmse";
  append_metric(summary, ok, "pre_prune", metric,
                [](const RunResult& r) { return r.pre_prune.primary; });
  append_metric(summary, ok, "post_prune", metric,
                [](const RunResult& r) { return r.post_prune.primary; });
  append_metric(summary, ok, "post_resample", metric,
                [](const RunResult& r) { return r.post_resample.primary; });
  for (std::size_t k = 0; k < ok.front().post_resample.auc.size(); ++k)
    append_metric(summary, ok, "post_resample", "auc_class_" + std::to_string(k),
                  [k](const RunResult& r) { return r.post_resample.auc[k]; });
  append_metric(summary, ok, "diagnostics", "acceptance_rate",
                [](const RunResult& r) { return r.acceptance_rate; });
  append_metric(summary, ok, "diagnostics", "max_split_rhat",
                [](const RunResult& r) { return r.max_split_rhat; });
  return summary;
}

void export_results(const ExperimentConfig& cfg,
                    const ExperimentSummary& summary,
                    const std::vector<RunResult>& results,
                    const Dataset& dataset, const SplitIndices& split) {
  fs::create_directories(cfg.out_dir);
  const fs::path out(cfg.out_dir);
  {
    std::ofstream f(out / "results.csv");
    if (!f) throw std::runtime_error("cannot write results.csv in " + cfg.out_dir);
    f.precision(17);
    f << "dataset,method,level,stage,metric,mean,std,n_runs\n";
    for (const auto& m : summary.metrics)
      f << summary.dataset << "," << summary.method << "," << summary.level
        << "," << m.stage << "," << m.metric << "," << m.mean << ","
        << m.std_dev << "," << m.n_runs << "\n";
  }
  const RunResult* first_ok = nullptr;
  for (const auto& r : results)
    if (!r.failed) { first_ok = &r; break; }
  if (first_ok) {
    PsrfReport report;
    report.per_parameter_rhat = first_ok->per_parameter_rhat;
    report.max_rhat = first_ok->max_split_rhat;
    export_psrf(report, (out / "rhat.csv").string());
    if (cfg.model.task == Task::kClassification &&
        first_ok->mean_class_probabilities.rows() > 0) {
      const std::vector<int> truth = select_rows(dataset.labels, split.test);
      for (const auto& curve :
           one_vs_all_roc(first_ok->mean_class_probabilities, truth))
        export_roc(curve, (out / ("roc_class_" +
                                  std::to_string(curve.class_index) + ".csv"))
                              .string());
    }
  }
  for (const auto& r : results)
    if (!r.failed)
      save_mask(r.mask,
                (out / ("mask_run" + std::to_string(r.run_index) + ".txt"))
                    .string());
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 bool write_outputs,
                                 std::vector<RunResult>* results_out) {
  cfg.validate();
  const Dataset raw = load_experiment_dataset(cfg);
  std::vector<RunResult> results;
  Dataset first_data;
  SplitIndices first_split;
  for (int run = 0; run < cfg.n_runs; ++run) {
    Dataset data = raw;  // normalization is fit per run's own train split
    const SplitIndices split =
        split_train_test(data.rows(), 0.6,
                         cfg.master_seed + static_cast<std::uint64_t>(run),
                         cfg.ordered_split);
    normalize_minmax(data, split);
    Chain chain, resampled;
    RunResult r = run_pipeline(cfg, data, split, run,
                               write_outputs ? &chain : nullptr,
                               write_outputs ? &resampled : nullptr);
    if (write_outputs && !r.failed) {
      fs::create_directories(cfg.out_dir);
      save_chain_csv(chain, (fs::path(cfg.out_dir) /
                             ("chain_run" + std::to_string(run) + ".csv"))
                                .string());
      save_chain_csv(resampled,
                     (fs::path(cfg.out_dir) /
                      ("resampled_run" + std::to_string(run) + ".csv"))
                         .string());
    }
    if (run == 0) { first_data = data; first_split = split; }
    results.push_back(std::move(r));
  }
  const ExperimentSummary summary = aggregate_runs(cfg, results);
  if (write_outputs)
    export_results(cfg, summary, results, first_data, first_split);
  if (results_out) *results_out = std::move(results);
  return summary;
}

}  // namespace cbnn
