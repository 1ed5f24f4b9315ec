#include "apgls/retrieve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "apgls/projections.hpp"
#include "apgls/solver.hpp"

namespace apgls {

namespace detail {

Eigen::VectorXcd music_polynomial(const Eigen::MatrixXcd& noise_projector) {
  const Eigen::Index n = noise_projector.rows();
  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(2 * n - 1);
  for (Eigen::Index offset = -(n - 1); offset <= n - 1; ++offset) {
    std::complex<double> sum = 0.0;
    for (Eigen::Index i = 0; i + std::abs(offset) < n; ++i) {
      sum += offset >= 0 ? noise_projector(i, i + offset)
                         : noise_projector(i - offset, i);
    }
    coeffs(offset + n - 1) = sum;
  }
  return coeffs;
}

std::vector<std::complex<double>> polynomial_roots(const Eigen::VectorXcd& coeffs) {
  const double max_abs = coeffs.size() > 0 ? coeffs.cwiseAbs().maxCoeff() : 0.0;
  if (max_abs <= 0.0) return {};
  const double cutoff = 1e-14 * max_abs;

  Eigen::Index hi = coeffs.size() - 1;
  while (hi > 0 && std::abs(coeffs(hi)) <= cutoff) --hi;
  Eigen::Index lo = 0;
  while (lo < hi && std::abs(coeffs(lo)) <= cutoff) ++lo;

  std::vector<std::complex<double>> roots;
  // each stripped constant-term coefficient contributes a root at the origin
  for (Eigen::Index i = 0; i < lo; ++i) roots.emplace_back(0.0, 0.0);
  const Eigen::Index degree = hi - lo;
  if (degree < 1) return roots;

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (Eigen::Index i = 0; i + 1 < degree; ++i) companion(i + 1, i) = 1.0;
  for (Eigen::Index i = 0; i < degree; ++i) {
    companion(i, degree - 1) = -coeffs(lo + i) / coeffs(hi);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(companion, false);
  if (eig.info() != Eigen::Success)
    throw numeric_error("polynomial_roots: companion eigendecomposition failed");
  for (Eigen::Index i = 0; i < degree; ++i) roots.push_back(eig.eigenvalues()(i));
  return roots;
}

}  // namespace detail

namespace {

double root_to_doa_deg(std::complex<double> root, double spacing_d,
                       double wavelength) {
  double x = wavelength * std::arg(root) / (2.0 * std::numbers::pi * spacing_d);
  x = std::clamp(x, -1.0, 1.0);
  double theta = -std::asin(x) * 180.0 / std::numbers::pi;
  // arg() returns (-pi, pi], so +90 only appears via clamping at spacings
  // other than half-wavelength; fold it onto the aliased -90 end of the domain
  if (theta >= 90.0) theta = -90.0;
  return theta;
}

}  // namespace

DoaEstimate vandermonde_retrieve(const Eigen::MatrixXcd& r, int num_sources,
                                 double spacing_d, double wavelength) {
  const Eigen::Index n = r.rows();
  if (r.cols() != n) throw std::invalid_argument("vandermonde_retrieve: non-square input");
  if (num_sources < 1 || num_sources >= n)
    throw std::invalid_argument("vandermonde_retrieve: need 1 <= K < N");
  if (!(spacing_d > 0.0) || !(wavelength > 0.0))
    throw std::invalid_argument("vandermonde_retrieve: bad spacing or wavelength");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(symmetrized(r));
  if (eig.info() != Eigen::Success)
    throw numeric_error("vandermonde_retrieve: eigendecomposition failed");
  // eigenvalues ascend, so the noise subspace is the leading N-K columns
  const Eigen::MatrixXcd noise_basis = eig.eigenvectors().leftCols(n - num_sources);
  const Eigen::MatrixXcd projector = noise_basis * noise_basis.adjoint();

  const auto roots = detail::polynomial_roots(detail::music_polynomial(projector));

  std::vector<std::complex<double>> candidates;
  for (const auto& z : roots) {
    if (std::abs(z) <= 1.0) candidates.push_back(z);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              const double da = 1.0 - std::abs(a);
              const double db = 1.0 - std::abs(b);
              if (da != db) return da < db;
              return std::arg(a) < std::arg(b);
            });

  std::vector<std::complex<double>> selected;
  for (const auto& z : candidates) {
    if (static_cast<int>(selected.size()) == num_sources) break;
    const bool duplicate =
        std::any_of(selected.begin(), selected.end(), [&](const std::complex<double>& s) {
          return std::abs(s - z) < 1e-8;
        });
    if (!duplicate) selected.push_back(z);
  }

  DoaEstimate estimate;
  for (const auto& z : selected) {
    estimate.doas_deg.push_back(root_to_doa_deg(z, spacing_d, wavelength));
  }
  estimate.roots = selected;

  // sort by angle, keeping roots aligned
  std::vector<std::size_t> order(estimate.doas_deg.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return estimate.doas_deg[a] < estimate.doas_deg[b];
  });
  DoaEstimate sorted;
  for (std::size_t i : order) {
    sorted.doas_deg.push_back(estimate.doas_deg[i]);
    sorted.roots.push_back(estimate.roots[i]);
  }

  if (static_cast<int>(sorted.doas_deg.size()) < num_sources) {
    throw degenerate_retrieval_error(
        "vandermonde_retrieve: found " + std::to_string(sorted.doas_deg.size()) +
            " of " + std::to_string(num_sources) + " roots inside the unit circle",
        std::move(sorted));
  }
  return sorted;
}

std::vector<double> estimate_powers(const Eigen::MatrixXcd& r,
                                    const std::vector<double>& doas_deg,
                                    const ArrayGeometry& geom,
                                    double wavelength) {
  if (r.rows() != r.cols() || r.rows() != geom.num_sensors())
    throw std::invalid_argument("estimate_powers: size mismatch");
  const int k = static_cast<int>(doas_deg.size());
  if (k < 1) throw std::invalid_argument("estimate_powers: no DOAs");

  const Eigen::MatrixXcd a = steering_matrix(geom, doas_deg, wavelength);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  if (qr.rank() < k)
    throw std::invalid_argument("estimate_powers: rank-deficient steering matrix");

  // normal equations of min_p ||R - A diag(p) A^H||_F over real p:
  // gram(k,l) = |a_k^H a_l|^2,  rhs(k) = Re(a_k^H R a_k)
  const Eigen::MatrixXcd inner = a.adjoint() * a;
  const Eigen::MatrixXd gram = inner.cwiseAbs2();
  Eigen::VectorXd rhs(k);
  for (int i = 0; i < k; ++i) {
    rhs(i) = (a.col(i).adjoint() * r * a.col(i)).value().real();
  }
  Eigen::VectorXd powers = gram.ldlt().solve(rhs);
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = std::max(powers(i), 0.0);
  return out;
}

}  // namespace apgls
