#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "apgls/array.hpp"

namespace apgls {

struct AmplitudeModel {
  enum class Kind { equal_power, db_range };

  Kind kind = Kind::equal_power;
  double power_db = 0.0;  // equal_power
  double lo_db = 0.0;     // db_range
  double hi_db = 0.0;

  static AmplitudeModel equal_power(double power_db) {
    return {Kind::equal_power, power_db, 0.0, 0.0};
  }
  static AmplitudeModel db_range(double lo_db, double hi_db) {
    return {Kind::db_range, 0.0, lo_db, hi_db};
  }
};

enum class Coherence { incoherent, coherent };

struct SourceScenario {
  std::vector<double> doas_deg;
  AmplitudeModel amplitude = AmplitudeModel::equal_power(0.0);
  Coherence coherence = Coherence::incoherent;
  bool noise_free = false;

  int num_sources() const { return static_cast<int>(doas_deg.size()); }
  // throws std::invalid_argument on bad DOAs or an empty/ill-ordered model
  void validate() const;
};

// Snapshot matrix plus the separated signal and noise parts that produced it;
// observed = signal + noise.
struct SnapshotData {
  Eigen::MatrixXcd observed;
  Eigen::MatrixXcd signal;
  Eigen::MatrixXcd noise;
  SourceScenario scenario;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

// Draws source amplitudes per the scenario's model, then noise scaled so that
// 10*log10(E||A s_l||^2 / E||e_l||^2) matches snr_db in expectation against
// the realized signal power. Deterministic given the seed.
SnapshotData generate_snapshots(const ArrayGeometry& geom,
                                const SourceScenario& scenario,
                                int num_snapshots, double snr_db,
                                std::uint64_t seed);

// Y Y^H / L, explicitly symmetrized.
Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& observed);

}  // namespace apgls
