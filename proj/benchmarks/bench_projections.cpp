#include <benchmark/benchmark.h>

#include "apgls/projections.hpp"
#include "apgls/rng.hpp"

namespace {

Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed) {
  apgls::Rng rng(seed);
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      a(i, j) = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    }
  }
  return ((a + a.adjoint()) * 0.5).eval();
}

void BM_ProjectToeplitz(benchmark::State& state) {
  const Eigen::MatrixXcd r = random_hermitian(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apgls::project_toeplitz(r));
  }
}
BENCHMARK(BM_ProjectToeplitz)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_ProjectPsd(benchmark::State& state) {
  const Eigen::MatrixXcd r = random_hermitian(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apgls::project_psd(r));
  }
}
BENCHMARK(BM_ProjectPsd)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_ProjectRank(benchmark::State& state) {
  const Eigen::MatrixXcd r = random_hermitian(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apgls::project_rank(r, 4));
  }
}
BENCHMARK(BM_ProjectRank)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
