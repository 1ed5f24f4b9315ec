#include "apgls/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "apgls/format.hpp"
#include "apgls/projections.hpp"

namespace apgls {

Spectrum cbf_spectrum(const Eigen::MatrixXcd& sample_cov,
                      const ArrayGeometry& geom, double grid_step_deg,
                      double wavelength) {
  if (!(grid_step_deg > 0.0))
    throw std::invalid_argument("cbf_spectrum: grid step must be positive");
  if (sample_cov.rows() != geom.num_sensors() ||
      sample_cov.cols() != geom.num_sensors())
    throw std::invalid_argument("cbf_spectrum: covariance does not match geometry");

  const double m2 = static_cast<double>(geom.num_sensors()) *
                    static_cast<double>(geom.num_sensors());
  Spectrum spectrum;
  std::vector<double> linear;
  for (double angle = -90.0; angle < 90.0; angle += grid_step_deg) {
    const Eigen::VectorXcd a = steering_vector(geom, angle, wavelength);
    const double power = (a.adjoint() * sample_cov * a).value().real() / m2;
    spectrum.angles_deg.push_back(angle);
    linear.push_back(power);
  }

  const double peak = *std::max_element(linear.begin(), linear.end());
  spectrum.power_db.reserve(linear.size());
  for (double power : linear) {
    if (peak <= 0.0) {
      spectrum.power_db.push_back(0.0);
    } else {
      spectrum.power_db.push_back(10.0 *
                                  std::log10(std::max(power, peak * 1e-300) / peak));
    }
  }
  return spectrum;
}

std::vector<int> spectrum_peaks(const Spectrum& spectrum) {
  const int n = static_cast<int>(spectrum.power_db.size());
  std::vector<int> peaks;
  for (int i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || spectrum.power_db[static_cast<std::size_t>(i)] >
                                       spectrum.power_db[static_cast<std::size_t>(i - 1)];
    const bool right_ok = i == n - 1 ||
                          spectrum.power_db[static_cast<std::size_t>(i)] >
                              spectrum.power_db[static_cast<std::size_t>(i + 1)];
    if (left_ok && right_ok) peaks.push_back(i);
  }
  return peaks;
}

std::vector<double> cbf_doas(const Spectrum& spectrum, int count) {
  std::vector<int> peaks = spectrum_peaks(spectrum);
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
    return spectrum.power_db[static_cast<std::size_t>(a)] >
           spectrum.power_db[static_cast<std::size_t>(b)];
  });
  if (static_cast<int>(peaks.size()) > count) peaks.resize(static_cast<std::size_t>(count));
  std::vector<double> doas;
  doas.reserve(peaks.size());
  for (int idx : peaks) doas.push_back(spectrum.angles_deg[static_cast<std::size_t>(idx)]);
  std::sort(doas.begin(), doas.end());
  return doas;
}

DoaEstimate root_music_scm(const Eigen::MatrixXcd& sample_cov, int num_sources,
                           const ArrayGeometry& geom, double wavelength) {
  if (!geom.is_ula())
    throw std::invalid_argument("root_music_scm: geometry must be a ULA");
  if (num_sources >= geom.num_sensors())
    throw std::invalid_argument("root_music_scm: need K < M");
  return vandermonde_retrieve(symmetrized(sample_cov), num_sources,
                              geom.spacing_d, wavelength);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "angle_deg,power_db\n";
  for (std::size_t i = 0; i < spectrum.angles_deg.size(); ++i) {
    out << format_double(spectrum.angles_deg[i]) << ','
        << format_double(spectrum.power_db[i]) << '\n';
  }
}

}  // namespace apgls
