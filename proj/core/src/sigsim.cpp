#include "apgls/sigsim.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "apgls/rng.hpp"

namespace apgls {

void SourceScenario::validate() const {
  if (doas_deg.empty()) throw std::invalid_argument("scenario: need at least one source");
  std::set<double> seen;
  for (double doa : doas_deg) {
    if (doa < -90.0 || doa >= 90.0)
      throw std::invalid_argument("scenario: DOA outside [-90, 90)");
    if (!seen.insert(doa).second)
      throw std::invalid_argument("scenario: duplicate DOA");
  }
  if (amplitude.kind == AmplitudeModel::Kind::db_range &&
      amplitude.lo_db > amplitude.hi_db)
    throw std::invalid_argument("scenario: db_range requires lo <= hi");
}

namespace {

double draw_magnitude(const AmplitudeModel& model, Rng& rng) {
  switch (model.kind) {
    case AmplitudeModel::Kind::equal_power:
      return std::pow(10.0, model.power_db / 20.0);
    case AmplitudeModel::Kind::db_range:
      return std::pow(10.0, rng.uniform(model.lo_db, model.hi_db) / 20.0);
  }
  throw std::invalid_argument("scenario: unknown amplitude model");
}

// K x L source amplitudes. Incoherent: independent magnitude and phase per
// source and snapshot. Coherent: one unit-norm snapshot profile shared by all
// sources, scaled per source so the average per-snapshot power matches the
// amplitude model.
Eigen::MatrixXcd draw_amplitudes(const SourceScenario& scenario, int num_snapshots,
                                 Rng& rng) {
  const int k = scenario.num_sources();
  Eigen::MatrixXcd s(k, num_snapshots);
  if (scenario.coherence == Coherence::incoherent) {
    for (int i = 0; i < k; ++i) {
      for (int l = 0; l < num_snapshots; ++l) {
        const double mag = draw_magnitude(scenario.amplitude, rng);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        s(i, l) = std::polar(mag, phase);
      }
    }
  } else {
    Eigen::VectorXcd profile(num_snapshots);
    for (int l = 0; l < num_snapshots; ++l) profile(l) = rng.complex_gaussian();
    profile /= profile.norm();
    const double scale = std::sqrt(static_cast<double>(num_snapshots));
    for (int i = 0; i < k; ++i) {
      const double c = draw_magnitude(scenario.amplitude, rng) * scale;
      s.row(i) = c * profile.transpose();
    }
  }
  return s;
}

}  // namespace

SnapshotData generate_snapshots(const ArrayGeometry& geom,
                                const SourceScenario& scenario,
                                int num_snapshots, double snr_db,
                                std::uint64_t seed) {
  scenario.validate();
  if (num_snapshots < 1)
    throw std::invalid_argument("generate_snapshots: need at least one snapshot");

  Rng rng(seed);
  const Eigen::MatrixXcd a = steering_matrix(geom, scenario.doas_deg);
  const Eigen::MatrixXcd amplitudes = draw_amplitudes(scenario, num_snapshots, rng);

  SnapshotData data;
  data.signal = a * amplitudes;
  data.scenario = scenario;
  data.snr_db = snr_db;
  data.seed = seed;

  const int m = geom.num_sensors();
  if (scenario.noise_free) {
    data.noise = Eigen::MatrixXcd::Zero(m, num_snapshots);
  } else {
    // E||e_l||^2 = M for unit-variance entries; scale against the realized
    // per-snapshot signal power so the SNR definition holds in expectation.
    const double signal_power = data.signal.squaredNorm() / num_snapshots;
    const double noise_power = signal_power / std::pow(10.0, snr_db / 10.0);
    const double sigma = std::sqrt(noise_power / m);
    data.noise.resize(m, num_snapshots);
    for (int l = 0; l < num_snapshots; ++l) {
      for (int i = 0; i < m; ++i) {
        data.noise(i, l) = sigma * rng.complex_gaussian();
      }
    }
  }
  data.observed = data.signal + data.noise;
  return data;
}

Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& observed) {
  if (observed.cols() < 1)
    throw std::invalid_argument("sample_covariance: need at least one snapshot");
  Eigen::MatrixXcd cov =
      observed * observed.adjoint() / static_cast<double>(observed.cols());
  return ((cov + cov.adjoint()) * 0.5).eval();
}

}  // namespace apgls
