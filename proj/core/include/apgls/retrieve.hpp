#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "apgls/array.hpp"

namespace apgls {

struct DoaEstimate {
  std::vector<double> doas_deg;               // sorted ascending
  std::vector<double> powers;                 // empty unless computed
  std::vector<std::complex<double>> roots;    // selected roots, |z| <= 1
};

// Fewer usable roots than requested sources; carries what was found.
class degenerate_retrieval_error : public std::runtime_error {
 public:
  degenerate_retrieval_error(const std::string& what, DoaEstimate partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const DoaEstimate& partial() const { return partial_; }

 private:
  DoaEstimate partial_;
};

// Vandermonde retrieval of num_sources DOAs from a Hermitian N x N matrix via
// root-MUSIC: eigen-split into signal/noise subspaces, root the polynomial
// z^{N-1} a^T(1/z) U_N U_N^H a(z), keep the roots inside the unit circle that
// lie closest to it, map each to -asin(lambda * arg(z) / (2 pi d)).
DoaEstimate vandermonde_retrieve(const Eigen::MatrixXcd& r, int num_sources,
                                 double spacing_d = 0.5, double wavelength = 1.0);

// Least-squares source powers: argmin_{p >= 0} ||R - A diag(p) A^H||_F for the
// steering matrix of the given DOAs, negatives clamped to zero.
std::vector<double> estimate_powers(const Eigen::MatrixXcd& r,
                                    const std::vector<double>& doas_deg,
                                    const ArrayGeometry& geom,
                                    double wavelength = 1.0);

namespace detail {

// Coefficients (ascending degree, length 2N-1) of z^{N-1} a^T(1/z) G a(z):
// coefficient k is the sum of the (k - N + 1)-th diagonal of G.
Eigen::VectorXcd music_polynomial(const Eigen::MatrixXcd& noise_projector);

// Companion-matrix roots; near-zero leading/trailing coefficients stripped.
std::vector<std::complex<double>> polynomial_roots(const Eigen::VectorXcd& coeffs);

}  // namespace detail

}  // namespace apgls
