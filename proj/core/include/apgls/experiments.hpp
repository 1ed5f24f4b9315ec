#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apgls/array.hpp"
#include "apgls/eval.hpp"
#include "apgls/format.hpp"
#include "apgls/rng.hpp"
#include "apgls/sigsim.hpp"
#include "apgls/solver.hpp"

namespace apgls {

enum class Method { apgls, cbf, music };

const char* method_name(Method method);

struct GeometrySpec {
  enum class Kind { ula, coprime };
  Kind kind = Kind::ula;
  int m = 16;        // ula
  int m1 = 5;        // coprime
  int m2 = 2;
  double spacing_d = 0.5;
};

ArrayGeometry make_geometry(const GeometrySpec& spec);

// Per-trial random equal-strength DOAs with a pairwise separation guard.
struct RandomDoaSpec {
  int count = 2;
  double lo_deg = -65.0;
  double hi_deg = 65.0;
  double min_separation_deg = 4.0;
};

std::vector<double> draw_random_doas(const RandomDoaSpec& spec, Rng& rng);

// One sweep point: everything needed to run `trials` independent trials.
struct CellSpec {
  GeometrySpec geometry;
  SourceScenario scenario;  // doas ignored when random_doas is set
  std::optional<RandomDoaSpec> random_doas;
  int num_snapshots = 20;
  double snr_db = 20.0;
  int solver_rank = 1;
};

struct MethodCellResult {
  Method method = Method::apgls;
  std::vector<TrialReport> reports;  // trial-index order
  AggregateRmse aggregate;
};

struct CellResult {
  CellSpec spec;
  std::vector<MethodCellResult> methods;
};

// Runs trials x cells across a worker pool. Trial t of cell c draws from
// substream c * trials + t of the master seed, so results do not depend on
// `jobs`; aggregation is by trial index.
std::vector<CellResult> run_cells(const std::vector<CellSpec>& cells,
                                  const std::vector<Method>& methods,
                                  int trials, std::uint64_t master_seed,
                                  const SolverConfig& solver_base,
                                  int jobs = 1);

struct ExperimentConfig {
  GeometrySpec geometry;
  SourceScenario scenario;
  std::optional<RandomDoaSpec> random_doas;
  int num_snapshots = 20;
  std::vector<double> snr_db = {20.0};
  int solver_rank = 0;  // 0 = number of scenario sources
  int trials = 100;
  std::uint64_t master_seed = 0;
  std::vector<Method> methods = {Method::apgls};
  SolverConfig solver;
  std::string output_path;
};

// Parses the JSON config documented in the README; throws
// std::invalid_argument with field diagnostics on malformed input.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct RunOptions {
  std::uint64_t seed = 0;
  int trials = 0;  // 0 = figure default
  int jobs = 1;
  std::string output_path;  // empty = figure default
  ToeplitzMode toeplitz_mode = ToeplitzMode::verbatim;
  std::string trace_path;   // fig1/run: dump solver iteration trace
  bool markdown = false;    // run: print a summary table to stdout
};

// Figure scenario runners; each writes one CSV and returns its path.
std::string run_fig1(char variant, const RunOptions& options);
std::string run_fig2(const RunOptions& options);
std::string run_fig3(char variant, const RunOptions& options);
std::string run_fig4(const RunOptions& options);
std::string run_custom(const ExperimentConfig& config, const RunOptions& options);

}  // namespace apgls
