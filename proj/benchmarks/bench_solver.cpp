#include <benchmark/benchmark.h>

#include "apgls/retrieve.hpp"
#include "apgls/sigsim.hpp"
#include "apgls/solver.hpp"

namespace {

struct Scene {
  apgls::ArrayGeometry geom;
  apgls::SelectionMatrix selection;
  Eigen::MatrixXcd cov;
};

Scene coprime_scene(int num_snapshots) {
  apgls::SourceScenario sc;
  sc.doas_deg = {-60.0, -3.0, 3.0, 50.0};
  sc.amplitude = apgls::AmplitudeModel::db_range(12.0, 20.0);
  Scene scene{apgls::make_coprime(5, 2, 0.5), {}, {}};
  scene.selection = apgls::selection_matrix(scene.geom);
  const apgls::SnapshotData data =
      apgls::generate_snapshots(scene.geom, sc, num_snapshots, 20.0, 7);
  scene.cov = apgls::sample_covariance(data.observed);
  return scene;
}

// fixed iteration count, so the benchmark measures per-iteration cost
void BM_SolverIterations(benchmark::State& state) {
  const Scene scene = coprime_scene(20);
  apgls::SolverConfig cfg;
  cfg.rank = 4;
  cfg.max_iter = static_cast<int>(state.range(0));
  cfg.eps_min = 1e-12;
  for (auto _ : state) {
    benchmark::DoNotOptimize(apgls::solve(scene.cov, scene.selection, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SolverIterations)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SolveToConvergence(benchmark::State& state) {
  const Scene scene = coprime_scene(20);
  apgls::SolverConfig cfg;
  cfg.rank = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(apgls::solve(scene.cov, scene.selection, cfg));
  }
}
BENCHMARK(BM_SolveToConvergence)->Unit(benchmark::kMillisecond);

void BM_VandermondeRetrieve(benchmark::State& state) {
  const Scene scene = coprime_scene(20);
  apgls::SolverConfig cfg;
  cfg.rank = 4;
  const apgls::SolverResult res = apgls::solve(scene.cov, scene.selection, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        apgls::vandermonde_retrieve(res.toeplitz_cov, 4, scene.geom.spacing_d));
  }
}
BENCHMARK(BM_VandermondeRetrieve)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
