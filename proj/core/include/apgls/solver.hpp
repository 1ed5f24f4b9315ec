#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "apgls/array.hpp"

namespace apgls {

// Raised when an inner decomposition fails; message carries the iteration.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ToeplitzMode { verbatim, masked };

struct SolverConfig {
  double eps_min = 1e-3;
  int max_iter = 2000;
  std::uint64_t seed = 0;
  ToeplitzMode toeplitz_mode = ToeplitzMode::verbatim;
  int rank = 1;  // assumed source count K
  // one extra randomly re-initialized attempt when the first run does not
  // converge; off by default
  bool restart_on_failure = false;
  bool record_trace = false;
};

struct IterationRecord {
  int iter = 0;
  double residual = 0.0;
  double min_eig_s = 0.0;    // smallest eigenvalue of the assembled lifted matrix
  double sigma_ratio = 0.0;  // sigma_{K+1} / sigma_1 of the iterate
};

struct SolverResult {
  // aperture x aperture Hermitian Toeplitz estimate
  Eigen::MatrixXcd toeplitz_cov;
  int iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
  std::vector<IterationRecord> trace;
};

// Alternating projections on the lifted 2M x 2M matrix
//   S = [[Gamma R Gamma^T, R_tilde], [R_tilde, Z]]
// cycling PSD projection, back-projection to the virtual aperture, rank
// truncation and Toeplitz averaging until ||S - S_old||_F < eps_min or
// max_iter is reached.
SolverResult solve(const Eigen::MatrixXcd& sample_cov,
                   const SelectionMatrix& gamma, const SolverConfig& config);

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace);

}  // namespace apgls
