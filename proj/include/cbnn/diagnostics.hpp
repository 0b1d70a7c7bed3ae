#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cbnn/sampler.hpp"

namespace cbnn {

struct PsrfReport {
  Eigen::VectorXd per_parameter_rhat;  // +inf marks a degenerate coordinate
  double max_rhat = 0.0;
  int n_chains = 0;
  int n_samples = 0;
  bool degenerate = false;  // some coordinate had zero within-chain variance
};

/// Gelman-Rubin PSRF for one scalar parameter across m >= 2 chains of equal
/// length n >= 2. W = mean within-chain variance, B/n = variance of chain
/// means, Vhat = ((n-1)/n) W + B/n, Rhat = sqrt(Vhat/W). W = 0 returns +inf.
double gelman_rubin(const std::vector<Eigen::VectorXd>& chains);

/// Per-parameter PSRF over aligned sample matrices (each n x d); headline is
/// the max over parameters.
PsrfReport psrf(const std::vector<Eigen::MatrixXd>& chains);

/// Single-run variant: the rows are halved and treated as two chains.
PsrfReport split_psrf(const Eigen::MatrixXd& samples);

double acceptance_rate(const Chain& chain);

/// Plot-ready trace CSV: sample_index plus one column per selected parameter.
void export_trace(const Chain& chain, const std::vector<int>& parameter_indices,
                  const std::string& path);

void export_psrf(const PsrfReport& report, const std::string& path);

}  // namespace cbnn
