#include <cmath>

#include "apgls/sigsim.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apgls;

namespace {

SourceScenario fig1_scenario() {
  SourceScenario sc;
  sc.doas_deg = {-60.0, -3.0, 3.0, 50.0};
  sc.amplitude = AmplitudeModel::db_range(12.0, 20.0);
  return sc;
}

}  // namespace

TEST_CASE("scenario validation") {
  SourceScenario sc;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);  // empty
  sc.doas_deg = {10.0, 10.0};
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);  // duplicate
  sc.doas_deg = {10.0, 95.0};
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);  // out of range
  sc.doas_deg = {10.0, -20.0};
  sc.amplitude = AmplitudeModel::db_range(20.0, 12.0);
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);  // lo > hi
  sc.amplitude = AmplitudeModel::db_range(12.0, 20.0);
  CHECK_NOTHROW(sc.validate());
}

TEST_CASE("single broadside source, noise free") {
  SourceScenario sc;
  sc.doas_deg = {0.0};
  sc.noise_free = true;
  const SnapshotData data = generate_snapshots(make_ula(8, 0.5), sc, 1, 20.0, 3);
  CHECK(data.observed.cols() == 1);
  // column proportional to the all-ones vector
  for (int i = 1; i < 8; ++i) {
    CHECK(std::abs(data.observed(i, 0) - data.observed(0, 0)) < 1e-14);
  }
  CHECK(data.noise.norm() == 0.0);
}

TEST_CASE("fig1-style snapshot matrix is well formed") {
  const SnapshotData data =
      generate_snapshots(make_coprime(5, 2, 0.5), fig1_scenario(), 20, 20.0, 1);
  CHECK(data.observed.rows() == 8);
  CHECK(data.observed.cols() == 20);
  CHECK(data.observed.allFinite());
  CHECK((data.observed - data.signal - data.noise).norm() <
        1e-14 * data.observed.norm());
}

TEST_CASE("generation is deterministic in the seed") {
  const ArrayGeometry geom = make_coprime(5, 2, 0.5);
  const SnapshotData a = generate_snapshots(geom, fig1_scenario(), 20, 20.0, 42);
  const SnapshotData b = generate_snapshots(geom, fig1_scenario(), 20, 20.0, 42);
  CHECK((a.observed - b.observed).norm() == 0.0);
  const SnapshotData c = generate_snapshots(geom, fig1_scenario(), 20, 20.0, 43);
  CHECK((a.observed - c.observed).norm() > 0.0);
}

TEST_CASE("sample_covariance matches the outer-product sum") {
  Rng rng(5);
  const Eigen::MatrixXcd y = oracles::random_complex(4, 50, rng);
  Eigen::MatrixXcd brute = Eigen::MatrixXcd::Zero(4, 4);
  for (int l = 0; l < 50; ++l) brute += y.col(l) * y.col(l).adjoint();
  brute /= 50.0;
  CHECK((sample_covariance(y) - brute).norm() < 1e-12 * brute.norm());
}

TEST_CASE("sample_covariance simple cases") {
  Rng rng(6);
  const Eigen::MatrixXcd y = oracles::random_complex(5, 1, rng);
  const Eigen::MatrixXcd r1 = sample_covariance(y);
  CHECK((r1 - y * y.adjoint()).norm() < 1e-14 * r1.norm());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r1);
  CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));

  CHECK((sample_covariance(Eigen::MatrixXcd::Identity(2, 2)) -
         0.5 * Eigen::MatrixXcd::Identity(2, 2))
            .norm() < 1e-15);
}

TEST_CASE("sample_covariance is Hermitian PSD") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd y = oracles::random_complex(6, 12, rng);
    const Eigen::MatrixXcd cov = sample_covariance(y);
    CHECK((cov - cov.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(cov);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * cov.norm());
  }
}

TEST_CASE("realized SNR tracks the request") {
  SourceScenario sc;
  sc.doas_deg = {-20.0, 35.0};
  sc.amplitude = AmplitudeModel::db_range(12.0, 20.0);
  const ArrayGeometry geom = make_ula(16, 0.5);
  for (double requested : {0.0, 10.0, 20.0}) {
    const SnapshotData data = generate_snapshots(geom, sc, 100, requested, 17);
    const double realized = 10.0 * std::log10(data.signal.squaredNorm() /
                                              data.noise.squaredNorm());
    CHECK(std::abs(realized - requested) < 0.5);
  }
}

TEST_CASE("noise-free incoherent covariance has rank K") {
  SourceScenario sc;
  sc.doas_deg = {-40.0, 5.0, 30.0};
  sc.noise_free = true;
  const SnapshotData data = generate_snapshots(make_ula(16, 0.5), sc, 100, 0.0, 9);
  const Eigen::MatrixXcd cov = sample_covariance(data.observed);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cov);
  CHECK(svd.singularValues()(2) / svd.singularValues()(3) > 1e6);
}

TEST_CASE("coherent sources give a rank-1 source covariance") {
  SourceScenario sc;
  sc.doas_deg = {-40.0, 5.0, 30.0};
  sc.coherence = Coherence::coherent;
  sc.noise_free = true;
  const SnapshotData data = generate_snapshots(make_ula(16, 0.5), sc, 50, 0.0, 10);
  const Eigen::MatrixXcd cov = sample_covariance(data.observed);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cov);
  CHECK(svd.singularValues()(1) < 1e-10 * svd.singularValues()(0));
}

TEST_CASE("generate_snapshots argument checks") {
  SourceScenario sc;
  sc.doas_deg = {0.0};
  CHECK_THROWS_AS(generate_snapshots(make_ula(4, 0.5), sc, 0, 10.0, 1),
                  std::invalid_argument);
}
