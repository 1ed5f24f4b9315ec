#pragma once

#include <Eigen/Dense>
#include <vector>

namespace apgls {

// (A + A^H) / 2
Eigen::MatrixXcd symmetrized(const Eigen::MatrixXcd& a);

// First row of a Hermitian Toeplitz matrix; first_row(0) is real.
struct ToeplitzParam {
  Eigen::VectorXcd first_row;
  Eigen::MatrixXcd expand() const;
};

// Frobenius-nearest Hermitian Toeplitz matrix: entry m of the parameter
// averages the m-th diagonal together with the conjugate of the -m-th one.
ToeplitzParam toeplitz_nearest(const Eigen::MatrixXcd& r);
Eigen::MatrixXcd project_toeplitz(const Eigen::MatrixXcd& r);

// Variant for zero-filled sparse-array matrices: each diagonal averages only
// entries whose row and column both lie on `support`; offsets with no such
// pair fall back to the full-diagonal average.
Eigen::MatrixXcd project_toeplitz_masked(const Eigen::MatrixXcd& r,
                                         const std::vector<int>& support);

// Eigenvalue clamp onto the PSD cone; input is symmetrized first.
Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& s);

// Truncated SVD keeping the `rank` largest singular values.
Eigen::MatrixXcd project_rank(const Eigen::MatrixXcd& r, int rank);

}  // namespace apgls
