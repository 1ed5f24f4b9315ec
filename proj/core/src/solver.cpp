#include "apgls/solver.hpp"

#include <ostream>
#include <string>

#include "apgls/format.hpp"
#include "apgls/projections.hpp"
#include "apgls/rng.hpp"

namespace apgls {

namespace {

Eigen::MatrixXcd random_complex(int rows, int cols, Rng& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      m(i, j) = {rng.uniform(), rng.uniform()};
    }
  }
  return m;
}

double smallest_eigenvalue(const Eigen::MatrixXcd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(symmetrized(s),
                                                      Eigen::EigenvaluesOnly);
  return eig.info() == Eigen::Success ? eig.eigenvalues().minCoeff() : 0.0;
}

double rank_gap_ratio(const Eigen::MatrixXcd& r, int rank) {
  if (rank >= std::min(r.rows(), r.cols())) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
  const auto& sv = svd.singularValues();
  return sv(0) > 0.0 ? sv(rank) / sv(0) : 0.0;
}

SolverResult run_attempt(const Eigen::MatrixXcd& sample_cov,
                         const SelectionMatrix& gamma, const SolverConfig& config,
                         std::uint64_t seed) {
  const int m = gamma.rows();
  const int n = gamma.cols();

  Rng rng(seed);
  Eigen::MatrixXcd r = symmetrized(random_complex(n, n, rng));
  Eigen::MatrixXcd z = random_complex(m, m, rng);

  Eigen::MatrixXcd s(2 * m, 2 * m);
  const auto assemble = [&]() {
    s.topLeftCorner(m, m) = gamma.compress(r);
    s.topRightCorner(m, m) = sample_cov;
    s.bottomLeftCorner(m, m) = sample_cov;
    s.bottomRightCorner(m, m) = z;
  };

  assemble();
  Eigen::MatrixXcd s_prev = s;

  SolverResult result;
  result.residual_history.reserve(static_cast<std::size_t>(config.max_iter));

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    try {
      assemble();
      double min_eig = 0.0;
      if (config.record_trace) min_eig = smallest_eigenvalue(s);

      s = project_psd(s);
      r = gamma.embed(s.topLeftCorner(m, m));
      r = project_rank(r, config.rank);
      r = config.toeplitz_mode == ToeplitzMode::verbatim
              ? project_toeplitz(r)
              : project_toeplitz_masked(r, gamma.positions);
      s.topLeftCorner(m, m) = gamma.compress(r);
      z = s.bottomRightCorner(m, m);

      const double residual = (s - s_prev).norm();
      s_prev = s;
      result.residual_history.push_back(residual);
      result.iterations = iter;
      if (config.record_trace) {
        result.trace.push_back(
            {iter, residual, min_eig, rank_gap_ratio(r, config.rank)});
      }
      if (residual < config.eps_min) {
        result.converged = true;
        break;
      }
    } catch (const numeric_error& err) {
      throw numeric_error(std::string(err.what()) + " at iteration " +
                          std::to_string(iter));
    }
  }

  result.toeplitz_cov = std::move(r);
  return result;
}

}  // namespace

SolverResult solve(const Eigen::MatrixXcd& sample_cov,
                   const SelectionMatrix& gamma, const SolverConfig& config) {
  const int m = gamma.rows();
  const int n = gamma.cols();
  if (sample_cov.rows() != m || sample_cov.cols() != m)
    throw std::invalid_argument("solve: sample covariance size does not match selection");
  if (n < m) throw std::invalid_argument("solve: aperture smaller than sensor count");
  if (!(config.eps_min > 0.0)) throw std::invalid_argument("solve: eps_min must be positive");
  if (config.max_iter < 1) throw std::invalid_argument("solve: max_iter must be >= 1");
  if (config.rank < 1 || config.rank > n)
    throw std::invalid_argument("solve: rank outside [1, aperture]");

  const Eigen::MatrixXcd r_tilde = symmetrized(sample_cov);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r_tilde, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw numeric_error("solve: eigendecomposition of the sample covariance failed");
  const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (eig.eigenvalues().minCoeff() < -1e-8 * std::max(scale, 1e-300))
    throw std::invalid_argument("solve: sample covariance is not PSD");

  SolverResult result = run_attempt(r_tilde, gamma, config, config.seed);
  if (!result.converged && config.restart_on_failure) {
    SolverResult retry =
        run_attempt(r_tilde, gamma, config, substream_seed(config.seed, 1));
    if (retry.converged ||
        (!result.residual_history.empty() && !retry.residual_history.empty() &&
         retry.residual_history.back() < result.residual_history.back())) {
      return retry;
    }
  }
  return result;
}

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace) {
  out << "iter,residual,min_eig_s,sigma_ratio\n";
  for (const auto& rec : trace) {
    out << rec.iter << ',' << format_double(rec.residual) << ','
        << format_double(rec.min_eig_s) << ',' << format_double(rec.sigma_ratio)
        << '\n';
  }
}

}  // namespace apgls
