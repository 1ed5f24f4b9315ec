#include "apgls/array.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

namespace apgls {

namespace {

void validate_geometry(const ArrayGeometry& geom) {
  if (geom.positions.empty()) throw std::invalid_argument("geometry: no sensors");
  if (geom.positions.front() != 0)
    throw std::invalid_argument("geometry: first position must be 0");
  for (std::size_t i = 1; i < geom.positions.size(); ++i) {
    if (geom.positions[i] <= geom.positions[i - 1])
      throw std::invalid_argument("geometry: positions must be strictly increasing");
  }
  if (!(geom.spacing_d > 0.0))
    throw std::invalid_argument("geometry: spacing must be positive");
}

}  // namespace

bool ArrayGeometry::is_ula() const {
  for (int i = 0; i < num_sensors(); ++i) {
    if (positions[static_cast<std::size_t>(i)] != i) return false;
  }
  return !positions.empty();
}

ArrayGeometry make_ula(int num_sensors, double spacing_d) {
  if (num_sensors < 2) throw std::invalid_argument("make_ula: need at least 2 sensors");
  ArrayGeometry geom;
  geom.spacing_d = spacing_d;
  geom.positions.resize(static_cast<std::size_t>(num_sensors));
  std::iota(geom.positions.begin(), geom.positions.end(), 0);
  validate_geometry(geom);
  return geom;
}

ArrayGeometry make_coprime(int m1, int m2, double spacing_d) {
  if (m1 <= 1 || m2 < 1) throw std::invalid_argument("make_coprime: need m1 > 1, m2 >= 1");
  if (std::gcd(m1, m2) != 1)
    throw std::invalid_argument("make_coprime: m1 and m2 must be co-prime");
  std::set<int> merged;
  for (int i = 0; i < m1; ++i) merged.insert(i * m2);
  for (int i = 1; i <= 2 * m2 - 1; ++i) merged.insert(i * m1);
  ArrayGeometry geom;
  geom.spacing_d = spacing_d;
  geom.positions.assign(merged.begin(), merged.end());
  validate_geometry(geom);
  return geom;
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double theta_deg,
                                 double wavelength) {
  if (theta_deg < -90.0 || theta_deg >= 90.0)
    throw std::invalid_argument("steering_vector: theta outside [-90, 90)");
  if (!(wavelength > 0.0))
    throw std::invalid_argument("steering_vector: wavelength must be positive");
  const double theta = theta_deg * std::numbers::pi / 180.0;
  const double phase_per_step =
      -2.0 * std::numbers::pi / wavelength * geom.spacing_d * std::sin(theta);
  Eigen::VectorXcd a(geom.num_sensors());
  for (int m = 0; m < geom.num_sensors(); ++m) {
    a(m) = std::polar(1.0, phase_per_step * geom.positions[static_cast<std::size_t>(m)]);
  }
  return a;
}

Eigen::MatrixXcd steering_matrix(const ArrayGeometry& geom,
                                 const std::vector<double>& thetas_deg,
                                 double wavelength) {
  Eigen::MatrixXcd a(geom.num_sensors(), static_cast<Eigen::Index>(thetas_deg.size()));
  for (std::size_t k = 0; k < thetas_deg.size(); ++k) {
    a.col(static_cast<Eigen::Index>(k)) = steering_vector(geom, thetas_deg[k], wavelength);
  }
  return a;
}

Eigen::MatrixXd SelectionMatrix::dense() const {
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(rows(), cols());
  for (int m = 0; m < rows(); ++m) {
    gamma(m, positions[static_cast<std::size_t>(m)]) = 1.0;
  }
  return gamma;
}

Eigen::MatrixXcd SelectionMatrix::compress(const Eigen::MatrixXcd& full) const {
  if (full.rows() != aperture || full.cols() != aperture)
    throw std::invalid_argument("SelectionMatrix::compress: size mismatch");
  const int m = rows();
  Eigen::MatrixXcd sub(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      sub(i, j) = full(positions[static_cast<std::size_t>(i)],
                       positions[static_cast<std::size_t>(j)]);
    }
  }
  return sub;
}

Eigen::MatrixXcd SelectionMatrix::embed(const Eigen::MatrixXcd& sub) const {
  const int m = rows();
  if (sub.rows() != m || sub.cols() != m)
    throw std::invalid_argument("SelectionMatrix::embed: size mismatch");
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(aperture, aperture);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      full(positions[static_cast<std::size_t>(i)],
           positions[static_cast<std::size_t>(j)]) = sub(i, j);
    }
  }
  return full;
}

SelectionMatrix selection_matrix(const ArrayGeometry& geom) {
  validate_geometry(geom);
  return SelectionMatrix{geom.positions, geom.aperture()};
}

}  // namespace apgls
