#include <cmath>
#include <complex>

#include "apgls/retrieve.hpp"
#include "apgls/rng.hpp"
#include "apgls/sigsim.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apgls;

TEST_CASE("single broadside source is recovered exactly") {
  const ArrayGeometry ula = make_ula(8, 0.5);
  const Eigen::MatrixXcd r = oracles::analytic_covariance(ula, {0.0}, {1.0});
  const DoaEstimate est = vandermonde_retrieve(r, 1, ula.spacing_d);
  REQUIRE(est.doas_deg.size() == 1);
  CHECK(std::abs(est.doas_deg[0]) < 1e-6);
}

TEST_CASE("two analytic sources are recovered exactly") {
  const ArrayGeometry ula = make_ula(16, 0.5);
  const Eigen::MatrixXcd r =
      oracles::analytic_covariance(ula, {-10.0, 25.0}, {1.0, 2.0});
  const DoaEstimate est = vandermonde_retrieve(r, 2, ula.spacing_d);
  REQUIRE(est.doas_deg.size() == 2);
  CHECK(std::abs(est.doas_deg[0] - (-10.0)) < 1e-6);
  CHECK(std::abs(est.doas_deg[1] - 25.0) < 1e-6);
}

TEST_CASE("retrieval is invariant to positive scaling") {
  // generic full-rank covariance: simple polynomial roots, so the comparison
  // is numerically tight
  SourceScenario sc;
  sc.doas_deg = {-33.0, 8.5, 47.0};
  const ArrayGeometry ula = make_ula(12, 0.5);
  const SnapshotData data = generate_snapshots(ula, sc, 30, 10.0, 12);
  const Eigen::MatrixXcd r = sample_covariance(data.observed);
  const DoaEstimate a = vandermonde_retrieve(r, 3, ula.spacing_d);
  const DoaEstimate b = vandermonde_retrieve(7.25 * r, 3, ula.spacing_d);
  REQUIRE(a.doas_deg.size() == b.doas_deg.size());
  for (std::size_t i = 0; i < a.doas_deg.size(); ++i) {
    CHECK(std::abs(a.doas_deg[i] - b.doas_deg[i]) < 1e-9);
  }
}

TEST_CASE("closed loop: retrieve then rebuild reproduces the matrix") {
  Rng rng(21);
  const int n = 16;
  const ArrayGeometry ula = make_ula(n, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + static_cast<int>(rng.uniform() * (n / 2));
    // distinct DOAs separated by at least 4 degrees
    std::vector<double> doas;
    while (static_cast<int>(doas.size()) < k) {
      const double cand = rng.uniform(-80.0, 80.0);
      bool ok = true;
      for (double d : doas) {
        if (std::abs(d - cand) < 4.0) ok = false;
      }
      if (ok) doas.push_back(cand);
    }
    std::vector<double> powers;
    for (int i = 0; i < k; ++i) powers.push_back(rng.uniform(0.5, 3.0));
    const Eigen::MatrixXcd r = oracles::analytic_covariance(ula, doas, powers);

    const DoaEstimate est = vandermonde_retrieve(r, k, ula.spacing_d);
    const std::vector<double> p_hat = estimate_powers(r, est.doas_deg, ula);
    const Eigen::MatrixXcd rebuilt =
        oracles::analytic_covariance(ula, est.doas_deg, p_hat);
    CHECK((rebuilt - r).norm() < 1e-6 * r.norm());
  }
}

TEST_CASE("root multiset is conjugate-reciprocal symmetric") {
  Rng rng(22);
  const ArrayGeometry ula = make_ula(10, 0.5);
  const Eigen::MatrixXcd noisy =
      oracles::analytic_covariance(ula, {-28.0, 4.0, 36.0}, {1.0, 1.0, 1.0}) +
      0.1 * Eigen::MatrixXcd::Identity(10, 10) +
      0.01 * oracles::random_hermitian(10, rng);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
      ((noisy + noisy.adjoint()) * 0.5).eval());
  const Eigen::MatrixXcd basis = eig.eigenvectors().leftCols(7);
  const Eigen::MatrixXcd projector = basis * basis.adjoint();
  const auto roots = detail::polynomial_roots(detail::music_polynomial(projector));
  CHECK(roots.size() == 18);
  for (const auto& z : roots) {
    if (std::abs(z) < 0.05) continue;
    const std::complex<double> partner = 1.0 / std::conj(z);
    bool found = false;
    for (const auto& w : roots) {
      if (std::abs(w - partner) < 1e-6 * (1.0 + std::abs(partner))) found = true;
    }
    CHECK(found);
  }
  // the selected roots all sit inside the closed unit disk
  const DoaEstimate est = vandermonde_retrieve(noisy, 3, ula.spacing_d);
  for (const auto& z : est.roots) CHECK(std::abs(z) <= 1.0 + 1e-12);
}

TEST_CASE("output is sorted ascending") {
  const ArrayGeometry ula = make_ula(14, 0.5);
  const Eigen::MatrixXcd r = oracles::analytic_covariance(
      ula, {50.0, -20.0, 5.0, -65.0}, {1.0, 2.0, 0.5, 1.5});
  const DoaEstimate est = vandermonde_retrieve(r, 4, ula.spacing_d);
  REQUIRE(est.doas_deg.size() == 4);
  for (std::size_t i = 1; i < est.doas_deg.size(); ++i) {
    CHECK(est.doas_deg[i] > est.doas_deg[i - 1]);
  }
}

TEST_CASE("argument checks") {
  const Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(6, 6);
  CHECK_THROWS_AS(vandermonde_retrieve(r, 6, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(vandermonde_retrieve(r, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(vandermonde_retrieve(r, 2, -0.5), std::invalid_argument);
}

TEST_CASE("estimate_powers on an exact model") {
  const ArrayGeometry ula = make_ula(12, 0.5);
  const std::vector<double> doas = {-15.0, 22.0};
  const Eigen::MatrixXcd r = oracles::analytic_covariance(ula, doas, {1.0, 2.0});
  const std::vector<double> p = estimate_powers(r, doas, ula);
  REQUIRE(p.size() == 2);
  CHECK(std::abs(p[0] - 1.0) < 1e-8);
  CHECK(std::abs(p[1] - 2.0) < 1e-8);

  const std::vector<double> zero =
      estimate_powers(Eigen::MatrixXcd::Zero(12, 12), doas, ula);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
}

TEST_CASE("estimate_powers from a noisy covariance") {
  SourceScenario sc;
  sc.doas_deg = {-15.0, 22.0};
  const ArrayGeometry ula = make_ula(12, 0.5);
  const SnapshotData data = generate_snapshots(ula, sc, 100, 20.0, 33);
  const std::vector<double> p =
      estimate_powers(sample_covariance(data.observed), sc.doas_deg, ula);
  // noise adds a diagonal component the fit spreads over the atoms
  CHECK(std::abs(p[0] - 1.0) < 0.2);
  CHECK(std::abs(p[1] - 1.0) < 0.2);
}

TEST_CASE("estimate_powers rejects rank-deficient steering") {
  const ArrayGeometry ula = make_ula(8, 0.5);
  const Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(8, 8);
  CHECK_THROWS_AS(estimate_powers(r, {10.0, 10.0}, ula), std::invalid_argument);
}
