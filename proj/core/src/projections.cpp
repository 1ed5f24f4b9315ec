#include "apgls/projections.hpp"

#include <algorithm>
#include <stdexcept>

#include "apgls/solver.hpp"

namespace apgls {

Eigen::MatrixXcd symmetrized(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("symmetrized: non-square input");
  return ((a + a.adjoint()) * 0.5).eval();
}

Eigen::MatrixXcd ToeplitzParam::expand() const {
  const Eigen::Index n = first_row.size();
  Eigen::MatrixXcd t(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      t(i, j) = j >= i ? first_row(j - i) : std::conj(first_row(i - j));
    }
  }
  return t;
}

ToeplitzParam toeplitz_nearest(const Eigen::MatrixXcd& r) {
  if (r.rows() != r.cols())
    throw std::invalid_argument("toeplitz_nearest: non-square input");
  const Eigen::Index n = r.rows();
  ToeplitzParam param;
  param.first_row.resize(n);
  for (Eigen::Index offset = 0; offset < n; ++offset) {
    std::complex<double> sum = 0.0;
    for (Eigen::Index i = 0; i + offset < n; ++i) {
      sum += r(i, i + offset) + std::conj(r(i + offset, i));
    }
    param.first_row(offset) = sum / (2.0 * static_cast<double>(n - offset));
  }
  // the diagonal average is exactly real by construction
  param.first_row(0) = param.first_row(0).real();
  return param;
}

Eigen::MatrixXcd project_toeplitz(const Eigen::MatrixXcd& r) {
  return toeplitz_nearest(r).expand();
}

Eigen::MatrixXcd project_toeplitz_masked(const Eigen::MatrixXcd& r,
                                         const std::vector<int>& support) {
  if (r.rows() != r.cols())
    throw std::invalid_argument("project_toeplitz_masked: non-square input");
  const Eigen::Index n = r.rows();
  std::vector<bool> observed(static_cast<std::size_t>(n), false);
  for (int pos : support) {
    if (pos < 0 || pos >= n)
      throw std::invalid_argument("project_toeplitz_masked: support outside matrix");
    observed[static_cast<std::size_t>(pos)] = true;
  }
  ToeplitzParam param;
  param.first_row.resize(n);
  for (Eigen::Index offset = 0; offset < n; ++offset) {
    std::complex<double> sum = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i + offset < n; ++i) {
      if (observed[static_cast<std::size_t>(i)] &&
          observed[static_cast<std::size_t>(i + offset)]) {
        sum += r(i, i + offset) + std::conj(r(i + offset, i));
        ++count;
      }
    }
    if (count == 0) {
      // co-array hole: no observed pair at this lag, use the full average
      for (Eigen::Index i = 0; i + offset < n; ++i) {
        sum += r(i, i + offset) + std::conj(r(i + offset, i));
      }
      count = n - offset;
    }
    param.first_row(offset) = sum / (2.0 * static_cast<double>(count));
  }
  param.first_row(0) = param.first_row(0).real();
  return param.expand();
}

Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& s) {
  const Eigen::MatrixXcd sym = symmetrized(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sym);
  if (eig.info() != Eigen::Success)
    throw numeric_error("project_psd: eigendecomposition failed");
  Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().adjoint();
}

Eigen::MatrixXcd project_rank(const Eigen::MatrixXcd& r, int rank) {
  const Eigen::Index n = std::min(r.rows(), r.cols());
  if (rank < 1 || rank > n)
    throw std::invalid_argument("project_rank: rank out of range");
  if (rank == n) return r;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  return svd.matrixU().leftCols(rank) * sv.head(rank).asDiagonal() *
         svd.matrixV().leftCols(rank).adjoint();
}

}  // namespace apgls
