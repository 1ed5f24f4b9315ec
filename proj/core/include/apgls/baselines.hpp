#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "apgls/array.hpp"
#include "apgls/retrieve.hpp"

namespace apgls {

struct Spectrum {
  std::vector<double> angles_deg;  // strictly increasing grid
  std::vector<double> power_db;    // relative to the peak
};

// Bartlett beamformer a^H R a / M^2 over a uniform angle grid, in dB relative
// to the spectrum peak.
Spectrum cbf_spectrum(const Eigen::MatrixXcd& sample_cov,
                      const ArrayGeometry& geom, double grid_step_deg = 0.5,
                      double wavelength = 1.0);

// Indices of local maxima of the spectrum (one-sided at the grid edges).
std::vector<int> spectrum_peaks(const Spectrum& spectrum);

// Angles of the `count` strongest local maxima, sorted ascending. May return
// fewer when the spectrum has fewer peaks.
std::vector<double> cbf_doas(const Spectrum& spectrum, int count);

// root-MUSIC applied directly to the sample covariance matrix; ULA only.
DoaEstimate root_music_scm(const Eigen::MatrixXcd& sample_cov, int num_sources,
                           const ArrayGeometry& geom, double wavelength = 1.0);

// Two columns: angle_deg, power_db.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

}  // namespace apgls
