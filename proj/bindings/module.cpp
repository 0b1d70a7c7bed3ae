#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cbnn/data.hpp"
#include "cbnn/diagnostics.hpp"
#include "cbnn/experiment.hpp"
#include "cbnn/metrics.hpp"
#include "cbnn/model.hpp"
#include "cbnn/posterior.hpp"
#include "cbnn/pruning.hpp"
#include "cbnn/sampler.hpp"

namespace py = pybind11;
using namespace cbnn;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bayesian neural network training, pruning, and evaluation";

  py::enum_<Task>(m, "Task")
      .value("REGRESSION", Task::kRegression)
      .value("CLASSIFICATION", Task::kClassification);

  py::enum_<PruneMethod>(m, "PruneMethod")
      .value("STN", PruneMethod::kStn)
      .value("SPN", PruneMethod::kSpn)
      .value("RND", PruneMethod::kRnd);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init([](int input_size, int hidden_size, int output_size,
                       Task task) {
             ModelSpec s{input_size, hidden_size, output_size, task};
             s.validate();
             return s;
           }),
           py::arg("input_size"), py::arg("hidden_size"),
           py::arg("output_size"), py::arg("task"))
      .def_readonly("input_size", &ModelSpec::input_size)
      .def_readonly("hidden_size", &ModelSpec::hidden_size)
      .def_readonly("output_size", &ModelSpec::output_size)
      .def_readonly("task", &ModelSpec::task)
      .def("param_count", &ModelSpec::param_count)
      .def("state_dim", &ModelSpec::state_dim);

  py::class_<PriorConfig>(m, "PriorConfig")
      .def(py::init<>())
      .def_readwrite("sigma_sq", &PriorConfig::sigma_sq)
      .def_readwrite("nu1", &PriorConfig::nu1)
      .def_readwrite("nu2", &PriorConfig::nu2);

  py::class_<SamplerConfig>(m, "SamplerConfig")
      .def(py::init<>())
      .def_readwrite("max_samples", &SamplerConfig::max_samples)
      .def_readwrite("burn_in_fraction", &SamplerConfig::burn_in_fraction)
      .def_readwrite("step_size_epsilon", &SamplerConfig::step_size_epsilon)
      .def_readwrite("proposal_std", &SamplerConfig::proposal_std)
      .def_readwrite("tau_proposal_std", &SamplerConfig::tau_proposal_std)
      .def_readwrite("langevin_probability", &SamplerConfig::langevin_probability)
      .def_readwrite("seed", &SamplerConfig::seed);

  py::class_<PruneMask>(m, "PruneMask")
      .def_property_readonly(
          "keep",
          [](const PruneMask& mask) {
            std::vector<bool> keep(mask.keep.begin(), mask.keep.end());
            return keep;
          })
      .def_readonly("method", &PruneMask::method)
      .def_readonly("level", &PruneMask::level)
      .def("pruned_count", &PruneMask::pruned_count)
      .def("size", &PruneMask::size);

  py::class_<Chain>(m, "Chain")
      .def_readonly("samples", &Chain::samples)
      .def_readonly("log_likelihoods", &Chain::log_likelihoods)
      .def_property_readonly(
          "accepted",
          [](const Chain& c) {
            std::vector<bool> a(c.accepted.begin(), c.accepted.end());
            return a;
          })
      .def("post_burn_in", &Chain::post_burn_in, py::arg("burn_in_fraction"))
      .def("acceptance_rate", [](const Chain& c) { return acceptance_rate(c); });

  py::class_<PosteriorStats>(m, "PosteriorStats")
      .def_readonly("means", &PosteriorStats::means)
      .def_readonly("stds", &PosteriorStats::stds);

  py::class_<BnnTarget>(m, "BnnTarget")
      .def(py::init<ModelSpec, Eigen::MatrixXd, Eigen::MatrixXd, PriorConfig>(),
           py::arg("spec"), py::arg("inputs"), py::arg("targets"),
           py::arg("prior") = PriorConfig{})
      .def("log_likelihood", &BnnTarget::log_likelihood)
      .def("log_posterior", &BnnTarget::log_posterior)
      .def("gradient", &BnnTarget::gradient);

  m.def("forward", &forward, py::arg("spec"), py::arg("theta"),
        py::arg("inputs"));
  m.def("log_posterior_gradient", &log_posterior_gradient, py::arg("spec"),
        py::arg("theta"), py::arg("inputs"), py::arg("targets"),
        py::arg("prior_sigma_sq"), py::arg("tau_sq") = 1.0);
  m.def(
      "sample_chain",
      [](const BnnTarget& target, const SamplerConfig& cfg,
         const Eigen::VectorXd& init, const std::optional<PruneMask>& mask) {
        return sample_chain(target, cfg, init, mask);
      },
      py::arg("target"), py::arg("config"), py::arg("init"),
      py::arg("mask") = std::nullopt);
  m.def(
      "resample_chain",
      [](const BnnTarget& target, const SamplerConfig& cfg,
         const Eigen::VectorXd& init, const PruneMask& mask, int length) {
        return resample_chain(target, cfg, init, mask, length);
      },
      py::arg("target"), py::arg("config"), py::arg("init"), py::arg("mask"),
      py::arg("resample_length") = 1000);

  m.def("chain_statistics",
        py::overload_cast<const Chain&, double>(&chain_statistics),
        py::arg("chain"), py::arg("burn_in_fraction"));
  m.def("pruning_scores", &pruning_scores, py::arg("stats"), py::arg("method"));
  m.def("build_mask", &build_mask, py::arg("stats"), py::arg("method"),
        py::arg("level"), py::arg("seed") = std::nullopt);
  m.def("build_random_mask", &build_random_mask, py::arg("size"),
        py::arg("level"), py::arg("seed"));
  m.def("apply_mask", &apply_mask_copy, py::arg("mask"), py::arg("state"));

  m.def("gelman_rubin", &gelman_rubin, py::arg("chains"));
  m.def("psrf_max", [](const std::vector<Eigen::MatrixXd>& chains) {
    return psrf(chains).max_rhat;
  });
  m.def("split_psrf_max",
        [](const Eigen::MatrixXd& samples) { return split_psrf(samples).max_rhat; });

  m.def("rmse", &rmse, py::arg("predictions"), py::arg("targets"));
  m.def("accuracy_percent", &accuracy_percent, py::arg("predicted"),
        py::arg("truth"));
  m.def(
      "roc_auc",
      [](const Eigen::VectorXd& scores, const std::vector<int>& labels) {
        return auc(roc_curve(scores, labels));
      },
      py::arg("scores"), py::arg("binary_labels"));

  m.def("one_hot", &one_hot, py::arg("labels"), py::arg("num_classes"));
  m.def(
      "window_series",
      [](const Eigen::VectorXd& series, int window, int horizon) {
        const Dataset d = window_series(series, window, horizon);
        return py::make_tuple(d.features, d.targets);
      },
      py::arg("series"), py::arg("window"), py::arg("horizon") = 1);

  m.def(
      "run_experiment_config",
      [](const std::string& config_path, bool write_outputs) {
        const ExperimentConfig cfg = parse_config_file(config_path);
        const ExperimentSummary s = run_experiment(cfg, write_outputs);
        py::dict out;
        out["dataset"] = s.dataset;
        out["method"] = s.method;
        out["level"] = s.level;
        out["n_failed"] = s.n_failed;
        py::list metrics;
        for (const auto& m2 : s.metrics) {
          py::dict row;
          row["stage"] = m2.stage;
          row["metric"] = m2.metric;
          row["mean"] = m2.mean;
          row["std"] = m2.std_dev;
          row["n_runs"] = m2.n_runs;
          metrics.append(row);
        }
        out["metrics"] = metrics;
        return out;
      },
      py::arg("config_path"), py::arg("write_outputs") = false);
}
