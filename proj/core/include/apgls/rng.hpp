#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace apgls {

// One SplitMix64 step. Used to expand seeds and derive trial substreams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed for substream `index` of a master seed. Trials drawn from
// distinct substreams are independent of execution order, so parallel and
// serial runs see identical randomness.
inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t state = master_seed;
  (void)splitmix64_next(state);
  state ^= 0x9e3779b97f4a7c15ULL * (index + 1);
  return splitmix64_next(state);
}

// Seeded generator with hand-rolled output distributions; std:: distributions
// are implementation-defined, these are bit-reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // circularly symmetric complex Gaussian with E|z|^2 = 1
  std::complex<double> complex_gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log1p(-u1));
    return std::polar(radius, 2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace apgls
