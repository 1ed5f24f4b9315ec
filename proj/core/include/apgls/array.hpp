#pragma once

#include <Eigen/Dense>
#include <vector>

namespace apgls {

// Linear array described by integer sensor positions on a common base grid.
// positions are unitless indices delta_1..delta_M into the virtual full ULA
// whose size is aperture(); spacing_d is the base spacing in wavelengths.
struct ArrayGeometry {
  std::vector<int> positions;
  double spacing_d = 0.5;

  int num_sensors() const { return static_cast<int>(positions.size()); }
  int aperture() const { return positions.empty() ? 0 : positions.back() + 1; }
  bool is_ula() const;
};

ArrayGeometry make_ula(int num_sensors, double spacing_d = 0.5);

// Union of one ULA with spacing m2 (m1 sensors) and one with spacing m1
// (2*m2 - 1 sensors, starting at m1); m1, m2 must be co-prime.
ArrayGeometry make_coprime(int m1, int m2, double spacing_d = 0.5);

// Narrowband plane-wave response; element m is
// exp(-j 2*pi/lambda * delta_m * d * sin(theta)), theta in [-90, 90) degrees.
Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double theta_deg,
                                 double wavelength = 1.0);

Eigen::MatrixXcd steering_matrix(const ArrayGeometry& geom,
                                 const std::vector<double>& thetas_deg,
                                 double wavelength = 1.0);

// Row-selection operator embedding a sparse array into its virtual full ULA.
// Row m has a single 1 at column positions[m]; rows are orthonormal, so the
// Moore-Penrose pseudo-inverse is the plain transpose.
struct SelectionMatrix {
  std::vector<int> positions;
  int aperture = 0;

  int rows() const { return static_cast<int>(positions.size()); }
  int cols() const { return aperture; }
  Eigen::MatrixXd dense() const;

  // Gamma * X * Gamma^T: keep the observed rows/columns of an N x N matrix.
  Eigen::MatrixXcd compress(const Eigen::MatrixXcd& full) const;
  // Gamma^T * X * Gamma: zero-fill an M x M matrix back to N x N.
  Eigen::MatrixXcd embed(const Eigen::MatrixXcd& sub) const;
};

SelectionMatrix selection_matrix(const ArrayGeometry& geom);

}  // namespace apgls
