// Command-line front end: stage-by-stage subcommands plus the full
// multi-run experiment pipeline. File layout inside --out:
//   chain.csv[.meta]      training chain (train)
//   mask.txt              pruning mask (prune)
//   resampled.csv[.meta]  post-prune chain (resample)
//   results.csv, rhat.csv, roc_class_k.csv, per-run chains/masks (experiment)
#include <CLI11.hpp>

#include <Eigen/Dense>
#include <filesystem>
#include <iostream>
#include <random>

#include "cbnn/diagnostics.hpp"
#include "cbnn/experiment.hpp"
#include "cbnn/metrics.hpp"
#include "cbnn/pruning.hpp"

namespace fs = std::filesystem;
using namespace cbnn;

namespace {

struct CliOptions {
  std::string config;
  std::string dataset;
  std::string method;
  double level = -1.0;
  int samples = 0;
  int runs = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config, "key = value config file");
  cmd->add_option("--dataset", opt.dataset, "builtin dataset name or CSV path");
  cmd->add_option("--method", opt.method, "pruning method: stn, spn, rnd");
  cmd->add_option("--level", opt.level, "pruning level in [0,1)");
  cmd->add_option("--samples", opt.samples, "chain length");
  cmd->add_option("--runs", opt.runs, "number of independent runs");
  cmd->add_option("--seed", opt.seed, "master seed")
      ->each([&opt](const std::string&) { opt.seed_set = true; });
  cmd->add_option("--out", opt.out, "output directory");
}

ExperimentConfig build_config(const CliOptions& opt) {
  ExperimentConfig cfg;
  if (!opt.config.empty()) cfg = parse_config_file(opt.config);
  if (!opt.dataset.empty()) {
    if (is_builtin_dataset(opt.dataset)) apply_builtin_defaults(cfg, opt.dataset);
    else cfg.dataset = opt.dataset;
  }
  if (!opt.method.empty()) cfg.method = prune_method_from_string(opt.method);
  if (opt.level >= 0.0) cfg.level = opt.level;
  if (opt.samples > 0) cfg.sampler.max_samples = opt.samples;
  if (opt.runs > 0) cfg.n_runs = opt.runs;
  if (opt.seed_set) cfg.master_seed = opt.seed;
  if (!opt.out.empty()) cfg.out_dir = opt.out;
  cfg.validate();
  return cfg;
}

struct Prepared {
  Dataset data;
  SplitIndices split;
};

Prepared prepare(const ExperimentConfig& cfg) {
  Prepared p;
  p.data = load_experiment_dataset(cfg);
  p.split = split_train_test(p.data.rows(), 0.6, cfg.master_seed,
                             cfg.ordered_split);
  normalize_minmax(p.data, p.split);
  return p;
}

BnnTarget make_target(const ExperimentConfig& cfg, const Prepared& p) {
  const Eigen::MatrixXd train_x = select_rows(p.data.features, p.split.train);
  const Eigen::MatrixXd train_y =
      cfg.model.task == Task::kClassification
          ? one_hot(select_rows(p.data.labels, p.split.train),
                    cfg.model.output_size)
          : select_rows(p.data.targets, p.split.train);
  return BnnTarget(cfg.model, train_x, train_y, cfg.prior);
}

void print_stage(const ExperimentConfig& cfg, const std::string& stage,
                 const StageMetrics& m) {
  const char* name =
      cfg.model.task == Task::kClassification ? "accuracy" : "rmse";
  std::cout << stage << " " << name << " = " << m.primary << "\n";
  for (std::size_t k = 0; k < m.auc.size(); ++k)
    std::cout << stage << " auc_class_" << k << " = " << m.auc[k] << "\n";
}

int cmd_train(const CliOptions& opt) {
  const ExperimentConfig cfg = build_config(opt);
  const Prepared p = prepare(cfg);
  const BnnTarget target = make_target(cfg, p);

  std::mt19937_64 init_rng(cfg.master_seed * 131 + 17);
  std::normal_distribution<double> draw(0.0, cfg.init_std);
  Eigen::VectorXd theta0(cfg.model.param_count());
  for (int i = 0; i < theta0.size(); ++i) theta0(i) = draw(init_rng);
  Eigen::VectorXd init(target.state_dim());
  init.head(theta0.size()) = theta0;
  if (cfg.model.has_noise_param()) {
    const Eigen::MatrixXd train_x = select_rows(p.data.features, p.split.train);
    const Eigen::MatrixXd train_y = select_rows(p.data.targets, p.split.train);
    const Eigen::MatrixXd resid =
        train_y - forward(cfg.model, theta0, train_x);
    const double mean = resid.array().mean();
    init(theta0.size()) = std::log(
        std::max(resid.array().square().mean() - mean * mean, 1e-6));
  }

  SamplerConfig scfg = cfg.sampler;
  scfg.seed = cfg.master_seed * 31 + 1;
  const Chain chain = sample_chain(target, scfg, init);
  fs::create_directories(cfg.out_dir);
  save_chain_csv(chain, (fs::path(cfg.out_dir) / "chain.csv").string());
  std::cout << "sampled " << chain.size() << " states, acceptance rate "
            << acceptance_rate(chain) << "\n";
  print_stage(cfg, "pre_prune",
              [&] {
                const Eigen::MatrixXd post =
                    chain.post_burn_in(scfg.burn_in_fraction);
                const Eigen::MatrixXd test_x =
                    select_rows(p.data.features, p.split.test);
                const PosteriorPredictive pp = posterior_predictive(
                    cfg.model, post, test_x, cfg.thinning);
                StageMetrics m;
                if (cfg.model.task == Task::kClassification) {
                  m.primary = accuracy_percent(
                      pp.labels, select_rows(p.data.labels, p.split.test));
                } else {
                  m.primary = rmse(pp.mean.col(0),
                                   select_rows(p.data.targets, p.split.test).col(0));
                }
                return m;
              }());
  return 0;
}

int cmd_prune(const CliOptions& opt) {
  const ExperimentConfig cfg = build_config(opt);
  const Chain chain =
      load_chain_csv((fs::path(cfg.out_dir) / "chain.csv").string());
  const PosteriorStats stats =
      chain_statistics(chain, cfg.sampler.burn_in_fraction);
  const PruneMask mask =
      build_mask(stats, cfg.method, cfg.level, cfg.master_seed * 7 + 3);
  save_mask(mask, (fs::path(cfg.out_dir) / "mask.txt").string());
  std::cout << "pruned " << mask.pruned_count() << " of " << mask.size()
            << " parameters (" << to_string(cfg.method) << ", level "
            << cfg.level << ")\n";
  return 0;
}

int cmd_resample(const CliOptions& opt) {
  const ExperimentConfig cfg = build_config(opt);
  const Prepared p = prepare(cfg);
  const BnnTarget target = make_target(cfg, p);
  const Chain chain =
      load_chain_csv((fs::path(cfg.out_dir) / "chain.csv").string());
  const PruneMask mask =
      load_mask((fs::path(cfg.out_dir) / "mask.txt").string());
  const PosteriorStats stats =
      chain_statistics(chain, cfg.sampler.burn_in_fraction);

  Eigen::VectorXd theta = apply_mask_copy(mask, stats.means);
  Eigen::VectorXd init(target.state_dim());
  init.head(theta.size()) = theta;
  if (cfg.model.has_noise_param()) {
    const Eigen::MatrixXd train_x = select_rows(p.data.features, p.split.train);
    const Eigen::MatrixXd train_y = select_rows(p.data.targets, p.split.train);
    const Eigen::MatrixXd resid = train_y - forward(cfg.model, theta, train_x);
    const double mean = resid.array().mean();
    init(theta.size()) = std::log(
        std::max(resid.array().square().mean() - mean * mean, 1e-6));
  }
  SamplerConfig rcfg = cfg.sampler;
  rcfg.seed = cfg.master_seed * 31 + 2;
  const Chain resampled =
      resample_chain(target, rcfg, init, mask, cfg.resample_length);
  save_chain_csv(resampled,
                 (fs::path(cfg.out_dir) / "resampled.csv").string());
  std::cout << "resampled " << resampled.size() << " states, acceptance rate "
            << acceptance_rate(resampled) << "\n";
  return 0;
}

int cmd_evaluate(const CliOptions& opt) {
  const ExperimentConfig cfg = build_config(opt);
  const Prepared p = prepare(cfg);
  const Eigen::MatrixXd test_x = select_rows(p.data.features, p.split.test);

  auto evaluate = [&](const Eigen::MatrixXd& samples, const PruneMask* mask,
                      const std::string& stage) {
    const PosteriorPredictive pp =
        posterior_predictive(cfg.model, samples, test_x, cfg.thinning, mask);
    StageMetrics m;
    if (cfg.model.task == Task::kClassification) {
      const std::vector<int> truth = select_rows(p.data.labels, p.split.test);
      m.primary = accuracy_percent(pp.labels, truth);
      const auto curves = one_vs_all_roc(pp.mean, truth);
      for (const auto& c : curves) {
        m.auc.push_back(auc(c));
        export_roc(c, (fs::path(cfg.out_dir) /
                       ("roc_class_" + std::to_string(c.class_index) + ".csv"))
                          .string());
      }
    } else {
      m.primary =
          rmse(pp.mean.col(0), select_rows(p.data.targets, p.split.test).col(0));
    }
    print_stage(cfg, stage, m);
  };

  const fs::path out(cfg.out_dir);
  const Chain chain = load_chain_csv((out / "chain.csv").string());
  evaluate(chain.post_burn_in(cfg.sampler.burn_in_fraction), nullptr,
           "pre_prune");
  if (fs::exists(out / "mask.txt")) {
    const PruneMask mask = load_mask((out / "mask.txt").string());
    evaluate(chain.post_burn_in(cfg.sampler.burn_in_fraction), &mask,
             "post_prune");
    if (fs::exists(out / "resampled.csv")) {
      const Chain resampled = load_chain_csv((out / "resampled.csv").string());
      evaluate(resampled.samples, &mask, "post_resample");
    }
  }
  return 0;
}

int cmd_diagnose(const CliOptions& opt) {
  const ExperimentConfig cfg = build_config(opt);
  const Prepared p = prepare(cfg);
  const BnnTarget target = make_target(cfg, p);
  const int n_chains = std::max(2, cfg.n_runs);

  std::vector<Eigen::MatrixXd> post_burn_in;
  double last_rate = 0.0;
  for (int c = 0; c < n_chains; ++c) {
    const std::uint64_t chain_seed =
        cfg.master_seed + static_cast<std::uint64_t>(c);
    std::mt19937_64 init_rng(chain_seed * 131 + 17);
    std::normal_distribution<double> draw(0.0, cfg.init_std);
    Eigen::VectorXd init(target.state_dim());
    for (int i = 0; i < cfg.model.param_count(); ++i) init(i) = draw(init_rng);
    if (cfg.model.has_noise_param()) init(cfg.model.param_count()) = 0.0;
    SamplerConfig scfg = cfg.sampler;
    scfg.seed = chain_seed * 31 + 1;
    const Chain chain = sample_chain(target, scfg, init);
    last_rate = acceptance_rate(chain);
    post_burn_in.push_back(chain.post_burn_in(scfg.burn_in_fraction)
                               .leftCols(cfg.model.param_count()));
  }
  const PsrfReport report = psrf(post_burn_in);
  fs::create_directories(cfg.out_dir);
  export_psrf(report, (fs::path(cfg.out_dir) / "rhat.csv").string());
  std::cout << "chains " << report.n_chains << ", post-burn-in samples "
            << report.n_samples << ", acceptance rate " << last_rate
            << "\nmax rhat = " << report.max_rhat
            << (report.degenerate ? " (degenerate coordinates present)" : "")
            << "\n";
  return 0;
}

int cmd_experiment(const CliOptions& opt) {
  const ExperimentConfig cfg = build_config(opt);
  const ExperimentSummary summary = run_experiment(cfg);
  std::cout << "dataset " << summary.dataset << ", method " << summary.method
            << ", level " << summary.level << ", failed runs "
            << summary.n_failed << "\n";
  for (const auto& m : summary.metrics)
    std::cout << m.stage << " " << m.metric << " = " << m.mean << " +/- "
              << m.std_dev << " (n=" << m.n_runs << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian neural network training, pruning, and evaluation"};
  app.require_subcommand(1);
  CliOptions opt;
  auto* train = app.add_subcommand("train", "sample the posterior");
  auto* prune = app.add_subcommand("prune", "build a pruning mask from a chain");
  auto* resample = app.add_subcommand("resample", "resample the pruned network");
  auto* evaluate = app.add_subcommand("evaluate", "evaluate stored chains");
  auto* diagnose = app.add_subcommand("diagnose", "multi-chain convergence check");
  auto* experiment = app.add_subcommand("experiment", "full multi-run pipeline");
  for (auto* cmd : {train, prune, resample, evaluate, diagnose, experiment})
    add_common_flags(cmd, opt);
  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(opt);
    if (prune->parsed()) return cmd_prune(opt);
    if (resample->parsed()) return cmd_resample(opt);
    if (evaluate->parsed()) return cmd_evaluate(opt);
    if (diagnose->parsed()) return cmd_diagnose(opt);
    if (experiment->parsed()) return cmd_experiment(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
