#include "cbnn/diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace cbnn {
namespace {

double sample_variance(const Eigen::VectorXd& v) {
  const double n = static_cast<double>(v.size());
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / (n - 1.0);
}

}  // namespace

double gelman_rubin(const std::vector<Eigen::VectorXd>& chains) {
  const int m = static_cast<int>(chains.size());
  if (m < 2) throw std::invalid_argument("gelman_rubin: need >= 2 chains");
  const auto n = chains[0].size();
  if (n < 2) throw std::invalid_argument("gelman_rubin: chain length must be >= 2");
  Eigen::VectorXd chain_means(m);
  double w = 0.0;
  for (int c = 0; c < m; ++c) {
    if (chains[static_cast<std::size_t>(c)].size() != n)
      throw std::invalid_argument("gelman_rubin: chains must have equal length");
    chain_means(c) = chains[static_cast<std::size_t>(c)].mean();
    w += sample_variance(chains[static_cast<std::size_t>(c)]);
  }
  w /= m;
  if (w == 0.0) return std::numeric_limits<double>::infinity();  // degenerate
  const double b_over_n = sample_variance(chain_means);
  const double v_hat = (double(n - 1) / double(n)) * w + b_over_n;
  return std::sqrt(v_hat / w);
}

PsrfReport psrf(const std::vector<Eigen::MatrixXd>& chains) {
  const int m = static_cast<int>(chains.size());
  if (m < 2) throw std::invalid_argument("psrf: need >= 2 chains");
  const auto n = chains[0].rows();
  const auto d = chains[0].cols();
  PsrfReport report;
  report.n_chains = m;
  report.n_samples = static_cast<int>(n);
  report.per_parameter_rhat.resize(d);
  std::vector<Eigen::VectorXd> column(static_cast<std::size_t>(m));
  for (int j = 0; j < d; ++j) {
    for (int c = 0; c < m; ++c)
      column[static_cast<std::size_t>(c)] = chains[static_cast<std::size_t>(c)].col(j);
    const double r = gelman_rubin(column);
    report.per_parameter_rhat(j) = r;
    if (std::isinf(r)) report.degenerate = true;
  }
  report.max_rhat = report.per_parameter_rhat.maxCoeff();
  return report;
}

PsrfReport split_psrf(const Eigen::MatrixXd& samples) {
  const auto n = samples.rows();
  if (n < 4) throw std::invalid_argument("split_psrf: need >= 4 rows");
  const auto half = n / 2;
  // odd row counts drop the middle row so the halves are equal length
  return psrf({samples.topRows(half), samples.bottomRows(half)});
}

double acceptance_rate(const Chain& chain) {
  if (chain.accepted.empty())
    throw std::invalid_argument("acceptance_rate: empty chain");
  double n_acc = 0;
  for (auto a : chain.accepted) n_acc += a;
  return n_acc / static_cast<double>(chain.accepted.size());
}

void export_trace(const Chain& chain, const std::vector<int>& parameter_indices,
                  const std::string& path) {
  for (int idx : parameter_indices)
    if (idx < 0 || idx >= chain.state_dim())
      throw std::out_of_range("export_trace: parameter index out of range");
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write trace file: " + path);
  f.precision(17);
  f << "sample_index";
  for (int idx : parameter_indices) f << ",p" << idx;
  f << "\n";
  for (int i = 0; i < chain.size(); ++i) {
    f << i;
    for (int idx : parameter_indices) f << "," << chain.samples(i, idx);
    f << "\n";
  }
}

void export_psrf(const PsrfReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write rhat file: " + path);
  f.precision(17);
  f << "parameter,rhat\n";
  for (int j = 0; j < report.per_parameter_rhat.size(); ++j)
    f << j << "," << report.per_parameter_rhat(j) << "\n";
}

}  // namespace cbnn
