#include "apgls/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "apgls/baselines.hpp"
#include "apgls/retrieve.hpp"

namespace apgls {

const char* method_name(Method method) {
  switch (method) {
    case Method::apgls: return "apgls";
    case Method::cbf: return "cbf";
    case Method::music: return "music";
  }
  return "?";
}

ArrayGeometry make_geometry(const GeometrySpec& spec) {
  switch (spec.kind) {
    case GeometrySpec::Kind::ula: return make_ula(spec.m, spec.spacing_d);
    case GeometrySpec::Kind::coprime: return make_coprime(spec.m1, spec.m2, spec.spacing_d);
  }
  throw std::invalid_argument("make_geometry: unknown kind");
}

std::vector<double> draw_random_doas(const RandomDoaSpec& spec, Rng& rng) {
  if (spec.count < 1) throw std::invalid_argument("random_doas: count must be >= 1");
  if (spec.lo_deg < -90.0 || spec.hi_deg > 90.0 || spec.lo_deg >= spec.hi_deg)
    throw std::invalid_argument("random_doas: range must lie in [-90, 90)");
  if (spec.min_separation_deg < 0.0 ||
      (spec.count - 1) * spec.min_separation_deg > spec.hi_deg - spec.lo_deg)
    throw std::invalid_argument("random_doas: separation guard infeasible");

  std::vector<double> doas(static_cast<std::size_t>(spec.count));
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (auto& d : doas) d = rng.uniform(spec.lo_deg, spec.hi_deg);
    std::sort(doas.begin(), doas.end());
    bool ok = true;
    for (std::size_t i = 1; i < doas.size(); ++i) {
      if (doas[i] - doas[i - 1] < spec.min_separation_deg) {
        ok = false;
        break;
      }
    }
    if (ok) return doas;
  }
  throw std::runtime_error("random_doas: rejection sampling did not terminate");
}

namespace {

struct CellContext {
  const CellSpec* spec = nullptr;
  ArrayGeometry geom;
  SelectionMatrix selection;
};

void run_single_trial(const CellContext& ctx, const std::vector<Method>& methods,
                      const SolverConfig& solver_base, std::uint64_t master_seed,
                      std::uint64_t stream_index, int trial, CellResult& out) {
  const std::uint64_t stream = substream_seed(master_seed, stream_index);
  SourceScenario scenario = ctx.spec->scenario;
  if (ctx.spec->random_doas) {
    Rng doa_rng(substream_seed(stream, 1));
    scenario.doas_deg = draw_random_doas(*ctx.spec->random_doas, doa_rng);
  }
  const SnapshotData data =
      generate_snapshots(ctx.geom, scenario, ctx.spec->num_snapshots,
                         ctx.spec->snr_db, substream_seed(stream, 2));
  const Eigen::MatrixXcd cov = sample_covariance(data.observed);
  const int k_true = scenario.num_sources();

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    TrialReport report;
    report.trial_index = trial;
    report.true_doas_deg = scenario.doas_deg;
    std::vector<double> est;
    try {
      switch (methods[mi]) {
        case Method::apgls: {
          SolverConfig cfg = solver_base;
          cfg.rank = ctx.spec->solver_rank;
          cfg.seed = substream_seed(stream, 3);
          const SolverResult res = solve(cov, ctx.selection, cfg);
          report.converged = res.converged;
          report.iterations = res.iterations;
          est = vandermonde_retrieve(res.toeplitz_cov, cfg.rank, ctx.geom.spacing_d)
                    .doas_deg;
          break;
        }
        case Method::cbf: {
          est = cbf_doas(cbf_spectrum(cov, ctx.geom), k_true);
          report.converged = true;
          break;
        }
        case Method::music: {
          est = root_music_scm(cov, k_true, ctx.geom).doas_deg;
          report.converged = true;
          break;
        }
      }
    } catch (const degenerate_retrieval_error& err) {
      est = err.partial().doas_deg;
      report.failed = true;
    } catch (const numeric_error&) {
      report.failed = true;
    }
    if (!report.failed && static_cast<int>(est.size()) == k_true) {
      report.est_doas_deg = match_doas(est, scenario.doas_deg);
      report.rmse_deg = rmse_deg(est, scenario.doas_deg);
    } else {
      report.est_doas_deg = est;
      report.failed = true;
      report.rmse_deg = std::numeric_limits<double>::quiet_NaN();
    }
    out.methods[mi].reports[static_cast<std::size_t>(trial)] = std::move(report);
  }
}

}  // namespace

std::vector<CellResult> run_cells(const std::vector<CellSpec>& cells,
                                  const std::vector<Method>& methods,
                                  int trials, std::uint64_t master_seed,
                                  const SolverConfig& solver_base, int jobs) {
  if (cells.empty()) throw std::invalid_argument("run_cells: no cells");
  if (methods.empty()) throw std::invalid_argument("run_cells: no methods");
  if (trials < 1) throw std::invalid_argument("run_cells: trials must be >= 1");

  std::vector<CellContext> contexts(cells.size());
  std::vector<CellResult> results(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    contexts[c].spec = &cells[c];
    contexts[c].geom = make_geometry(cells[c].geometry);
    contexts[c].selection = selection_matrix(contexts[c].geom);
    if (std::find(methods.begin(), methods.end(), Method::music) != methods.end() &&
        !contexts[c].geom.is_ula())
      throw std::invalid_argument("run_cells: music requires a ULA geometry");
    results[c].spec = cells[c];
    results[c].methods.resize(methods.size());
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      results[c].methods[mi].method = methods[mi];
      results[c].methods[mi].reports.resize(static_cast<std::size_t>(trials));
    }
  }

  const std::uint64_t total = cells.size() * static_cast<std::uint64_t>(trials);
  const auto run_index = [&](std::uint64_t idx) {
    const std::size_t c = static_cast<std::size_t>(idx / static_cast<std::uint64_t>(trials));
    const int t = static_cast<int>(idx % static_cast<std::uint64_t>(trials));
    run_single_trial(contexts[c], methods, solver_base, master_seed, idx, t,
                     results[c]);
  };

  const int workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(std::min<std::uint64_t>(
                                          total, std::numeric_limits<int>::max()))));
  if (workers == 1) {
    for (std::uint64_t idx = 0; idx < total; ++idx) run_index(idx);
  } else {
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::uint64_t idx = static_cast<std::uint64_t>(w); idx < total;
             idx += static_cast<std::uint64_t>(workers)) {
          try {
            run_index(idx);
          } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  for (auto& cell : results) {
    for (auto& per_method : cell.methods) {
      per_method.aggregate = aggregate_rmse(per_method.reports);
    }
  }
  return results;
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
  throw std::invalid_argument("config: " + message);
}

const json& require_field(const json& j, const char* key, const char* where) {
  if (!j.contains(key))
    config_error(std::string("missing field '") + key + "' in " + where);
  return j.at(key);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) {
      return item.key() == k;
    });
    if (!known) config_error("unknown field '" + item.key() + "' in " + where);
  }
}

template <typename T>
T field_as(const json& j, const char* key, const char* where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    config_error(std::string("field '") + key + "' in " + where + " has the wrong type");
  }
}

GeometrySpec parse_geometry(const json& j) {
  if (!j.is_object()) config_error("'geometry' must be an object");
  check_keys(j, {"type", "m", "m1", "m2", "spacing_d"}, "geometry");
  GeometrySpec spec;
  const auto type = field_as<std::string>(require_field(j, "type", "geometry"), "type", "geometry");
  if (type == "ula") {
    spec.kind = GeometrySpec::Kind::ula;
    spec.m = field_as<int>(require_field(j, "m", "geometry"), "m", "geometry");
  } else if (type == "coprime") {
    spec.kind = GeometrySpec::Kind::coprime;
    spec.m1 = field_as<int>(require_field(j, "m1", "geometry"), "m1", "geometry");
    spec.m2 = field_as<int>(require_field(j, "m2", "geometry"), "m2", "geometry");
  } else {
    config_error("geometry type must be 'ula' or 'coprime'");
  }
  if (j.contains("spacing_d"))
    spec.spacing_d = field_as<double>(j.at("spacing_d"), "spacing_d", "geometry");
  return spec;
}

AmplitudeModel parse_amplitude(const json& j) {
  if (!j.is_object()) config_error("'amplitude' must be an object");
  check_keys(j, {"model", "power_db", "lo_db", "hi_db"}, "amplitude");
  const auto model = field_as<std::string>(require_field(j, "model", "amplitude"), "model", "amplitude");
  if (model == "equal_power") {
    double power = 0.0;
    if (j.contains("power_db"))
      power = field_as<double>(j.at("power_db"), "power_db", "amplitude");
    return AmplitudeModel::equal_power(power);
  }
  if (model == "db_range") {
    return AmplitudeModel::db_range(
        field_as<double>(require_field(j, "lo_db", "amplitude"), "lo_db", "amplitude"),
        field_as<double>(require_field(j, "hi_db", "amplitude"), "hi_db", "amplitude"));
  }
  config_error("amplitude model must be 'equal_power' or 'db_range'");
}

SourceScenario parse_scenario(const json& j) {
  if (!j.is_object()) config_error("'scenario' must be an object");
  check_keys(j, {"doas_deg", "amplitude", "coherent", "noise_free"}, "scenario");
  SourceScenario scenario;
  if (j.contains("doas_deg"))
    scenario.doas_deg =
        field_as<std::vector<double>>(j.at("doas_deg"), "doas_deg", "scenario");
  if (j.contains("amplitude")) scenario.amplitude = parse_amplitude(j.at("amplitude"));
  if (j.contains("coherent") && field_as<bool>(j.at("coherent"), "coherent", "scenario"))
    scenario.coherence = Coherence::coherent;
  if (j.contains("noise_free"))
    scenario.noise_free = field_as<bool>(j.at("noise_free"), "noise_free", "scenario");
  return scenario;
}

RandomDoaSpec parse_random_doas(const json& j) {
  if (!j.is_object()) config_error("'random_doas' must be an object");
  check_keys(j, {"count", "lo_deg", "hi_deg", "min_separation_deg"}, "random_doas");
  RandomDoaSpec spec;
  spec.count = field_as<int>(require_field(j, "count", "random_doas"), "count", "random_doas");
  spec.lo_deg = field_as<double>(require_field(j, "lo_deg", "random_doas"), "lo_deg", "random_doas");
  spec.hi_deg = field_as<double>(require_field(j, "hi_deg", "random_doas"), "hi_deg", "random_doas");
  if (j.contains("min_separation_deg"))
    spec.min_separation_deg =
        field_as<double>(j.at("min_separation_deg"), "min_separation_deg", "random_doas");
  return spec;
}

SolverConfig parse_solver(const json& j) {
  if (!j.is_object()) config_error("'solver' must be an object");
  check_keys(j, {"eps_min", "max_iter", "toeplitz_mode", "restart_on_failure"}, "solver");
  SolverConfig cfg;
  if (j.contains("eps_min"))
    cfg.eps_min = field_as<double>(j.at("eps_min"), "eps_min", "solver");
  if (j.contains("max_iter"))
    cfg.max_iter = field_as<int>(j.at("max_iter"), "max_iter", "solver");
  if (j.contains("toeplitz_mode")) {
    const auto mode =
        field_as<std::string>(j.at("toeplitz_mode"), "toeplitz_mode", "solver");
    if (mode == "verbatim") {
      cfg.toeplitz_mode = ToeplitzMode::verbatim;
    } else if (mode == "masked") {
      cfg.toeplitz_mode = ToeplitzMode::masked;
    } else {
      config_error("toeplitz_mode must be 'verbatim' or 'masked'");
    }
  }
  if (j.contains("restart_on_failure"))
    cfg.restart_on_failure =
        field_as<bool>(j.at("restart_on_failure"), "restart_on_failure", "solver");
  return cfg;
}

std::vector<Method> parse_methods(const json& j) {
  const auto names = field_as<std::vector<std::string>>(j, "methods", "config");
  if (names.empty()) config_error("'methods' must not be empty");
  std::vector<Method> methods;
  for (const auto& name : names) {
    if (name == "apgls") {
      methods.push_back(Method::apgls);
    } else if (name == "cbf") {
      methods.push_back(Method::cbf);
    } else if (name == "music") {
      methods.push_back(Method::music);
    } else {
      config_error("unknown method '" + name + "'");
    }
  }
  return methods;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& err) {
    config_error(err.what());
  }
  if (!root.is_object()) config_error("top level must be an object");
  check_keys(root,
             {"geometry", "scenario", "random_doas", "snapshots", "snr_db",
              "solver_rank", "trials", "seed", "methods", "out", "solver"},
             "config");

  ExperimentConfig config;
  config.geometry = parse_geometry(require_field(root, "geometry", "config"));
  config.scenario = parse_scenario(require_field(root, "scenario", "config"));
  if (root.contains("random_doas"))
    config.random_doas = parse_random_doas(root.at("random_doas"));
  if (config.scenario.doas_deg.empty() && !config.random_doas)
    config_error("need scenario.doas_deg or random_doas");

  config.num_snapshots =
      field_as<int>(require_field(root, "snapshots", "config"), "snapshots", "config");
  if (config.num_snapshots < 1) config_error("'snapshots' must be >= 1");

  const json& snr = require_field(root, "snr_db", "config");
  if (snr.is_array()) {
    config.snr_db = field_as<std::vector<double>>(snr, "snr_db", "config");
    if (config.snr_db.empty()) config_error("'snr_db' sweep must not be empty");
  } else {
    config.snr_db = {field_as<double>(snr, "snr_db", "config")};
  }

  if (root.contains("solver_rank")) {
    config.solver_rank =
        field_as<int>(root.at("solver_rank"), "solver_rank", "config");
    if (config.solver_rank < 1) config_error("'solver_rank' must be >= 1");
  }
  if (root.contains("trials")) {
    config.trials = field_as<int>(root.at("trials"), "trials", "config");
    if (config.trials < 1) config_error("'trials' must be >= 1");
  }
  if (root.contains("seed"))
    config.master_seed = field_as<std::uint64_t>(root.at("seed"), "seed", "config");
  config.methods = parse_methods(require_field(root, "methods", "config"));
  if (root.contains("out"))
    config.output_path = field_as<std::string>(root.at("out"), "out", "config");
  if (root.contains("solver")) config.solver = parse_solver(root.at("solver"));
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

// ---------------------------------------------------------------------------
// figure runners

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

double power_to_db(double power) {
  return 10.0 * std::log10(std::max(power, 1e-12));
}

void dump_trace(const std::string& path, const std::string& command,
                std::uint64_t seed, const std::vector<IterationRecord>& trace) {
  auto out = open_output(path);
  out << csv_header_comment(command, seed) << '\n';
  write_trace_csv(out, trace);
}

struct Fig1Scenario {
  SourceScenario scenario;
  int num_snapshots = 20;
  double snr_db = 20.0;
};

Fig1Scenario fig1_scenario(char variant) {
  Fig1Scenario fig;
  fig.scenario.doas_deg = {-60.0, -3.0, 3.0, 50.0};
  fig.scenario.amplitude = AmplitudeModel::db_range(12.0, 20.0);
  switch (variant) {
    case 'a': fig.num_snapshots = 1; break;
    case 'b': break;
    case 'c': fig.snr_db = 0.0; break;
    case 'd': fig.scenario.coherence = Coherence::coherent; break;
    default: throw std::invalid_argument("fig1: unknown variant");
  }
  return fig;
}

void write_markdown_summary(const std::vector<CellResult>& results) {
  std::cout << "| snr_db | method | rmse_deg | kept | dropped | failed |\n";
  std::cout << "|-------:|:-------|---------:|-----:|--------:|-------:|\n";
  for (const auto& cell : results) {
    for (const auto& per_method : cell.methods) {
      std::cout << "| " << format_double(cell.spec.snr_db) << " | "
                << method_name(per_method.method) << " | "
                << format_double(per_method.aggregate.rmse_deg) << " | "
                << per_method.aggregate.trials_kept << " | "
                << per_method.aggregate.dropped << " | "
                << per_method.aggregate.failed << " |\n";
    }
  }
}

}  // namespace

std::string run_fig1(char variant, const RunOptions& options) {
  const Fig1Scenario fig = fig1_scenario(variant);
  const ArrayGeometry geom = make_geometry(
      {GeometrySpec::Kind::coprime, 16, 5, 2, 0.5});
  const SelectionMatrix selection = selection_matrix(geom);
  const int k = fig.scenario.num_sources();

  const std::uint64_t stream = substream_seed(options.seed, 0);
  const SnapshotData data = generate_snapshots(
      geom, fig.scenario, fig.num_snapshots, fig.snr_db, substream_seed(stream, 2));
  const Eigen::MatrixXcd cov = sample_covariance(data.observed);

  const Spectrum spectrum = cbf_spectrum(cov, geom);

  SolverConfig cfg;
  cfg.rank = k;
  cfg.toeplitz_mode = options.toeplitz_mode;
  cfg.seed = substream_seed(stream, 3);
  cfg.record_trace = !options.trace_path.empty();
  const SolverResult res = solve(cov, selection, cfg);
  if (cfg.record_trace) {
    dump_trace(options.trace_path, std::string("fig1 ") + variant + " trace",
               options.seed, res.trace);
  }

  const DoaEstimate est =
      vandermonde_retrieve(res.toeplitz_cov, k, geom.spacing_d);
  const ArrayGeometry virtual_ula = make_ula(geom.aperture(), geom.spacing_d);
  const std::vector<double> powers =
      estimate_powers(res.toeplitz_cov, est.doas_deg, virtual_ula);

  const std::string path = options.output_path.empty()
                               ? std::string("fig1") + variant + ".csv"
                               : options.output_path;
  auto out = open_output(path);
  out << csv_header_comment(std::string("fig1 ") + variant, options.seed) << '\n';
  out << "method,kind,angle_deg,power_db\n";
  for (std::size_t i = 0; i < spectrum.angles_deg.size(); ++i) {
    out << "cbf,spectrum," << format_double(spectrum.angles_deg[i]) << ','
        << format_double(spectrum.power_db[i]) << '\n';
  }
  for (std::size_t i = 0; i < est.doas_deg.size(); ++i) {
    out << "apgls,estimate," << format_double(est.doas_deg[i]) << ','
        << format_double(power_to_db(powers[i])) << '\n';
  }
  return path;
}

std::string run_fig2(const RunOptions& options) {
  const int trials = options.trials > 0 ? options.trials : 100;
  CellSpec cell;
  cell.geometry = {GeometrySpec::Kind::coprime, 16, 5, 2, 0.5};
  cell.scenario.amplitude = AmplitudeModel::equal_power(0.0);
  for (int i = 0; i < 10; ++i) {
    cell.scenario.doas_deg.push_back(-60.0 + 120.0 * i / 9.0);
  }
  cell.num_snapshots = 20;
  cell.snr_db = 20.0;
  cell.solver_rank = 10;

  SolverConfig base;
  base.toeplitz_mode = options.toeplitz_mode;
  const auto results = run_cells({cell}, {Method::apgls}, trials, options.seed,
                                 base, options.jobs);
  const auto& reports = results[0].methods[0].reports;

  std::array<int, 180> hist{};
  int failed = 0;
  for (const auto& report : reports) {
    if (report.failed) {
      ++failed;
      continue;
    }
    for (double angle : report.est_doas_deg) {
      const int bin = std::clamp(static_cast<int>(std::floor(angle + 90.0)), 0, 179);
      ++hist[static_cast<std::size_t>(bin)];
    }
  }

  const std::string path =
      options.output_path.empty() ? "fig2.csv" : options.output_path;
  auto out = open_output(path);
  out << csv_header_comment("fig2", options.seed) << '\n';
  out << "# trials: " << trials << " | failed: " << failed << '\n';
  out << "kind,trial,angle_deg,count\n";
  for (const auto& report : reports) {
    if (report.failed) continue;
    for (double angle : report.est_doas_deg) {
      out << "estimate," << report.trial_index << ',' << format_double(angle)
          << ",\n";
    }
  }
  for (int bin = 0; bin < 180; ++bin) {
    out << "hist,," << format_double(-90.0 + bin) << ','
        << hist[static_cast<std::size_t>(bin)] << '\n';
  }
  return path;
}

std::string run_fig3(char variant, const RunOptions& options) {
  const int trials = options.trials > 0 ? options.trials : 100;
  GeometrySpec geometry{GeometrySpec::Kind::coprime, 16, 5, 2, 0.5};
  int num_snapshots = 20;
  Coherence coherence = Coherence::incoherent;
  std::vector<Method> methods = {Method::apgls, Method::cbf};
  switch (variant) {
    case 'a':
      geometry = {GeometrySpec::Kind::ula, 16, 5, 2, 0.5};
      methods.push_back(Method::music);
      break;
    case 'b': break;
    case 'c': num_snapshots = 1; break;
    case 'd': coherence = Coherence::coherent; break;
    default: throw std::invalid_argument("fig3: unknown variant");
  }

  std::vector<CellSpec> cells;
  for (double snr = -10.0; snr <= 30.0; snr += 5.0) {
    CellSpec cell;
    cell.geometry = geometry;
    cell.scenario.doas_deg = {-60.0, -3.0, 3.0, 50.0};
    cell.scenario.amplitude = AmplitudeModel::equal_power(0.0);
    cell.scenario.coherence = coherence;
    cell.num_snapshots = num_snapshots;
    cell.snr_db = snr;
    cell.solver_rank = 4;
    cells.push_back(cell);
  }

  SolverConfig base;
  base.toeplitz_mode = options.toeplitz_mode;
  const auto results =
      run_cells(cells, methods, trials, options.seed, base, options.jobs);

  const std::string path = options.output_path.empty()
                               ? std::string("fig3") + variant + ".csv"
                               : options.output_path;
  auto out = open_output(path);
  out << csv_header_comment(std::string("fig3 ") + variant, options.seed) << '\n';
  out << "snr_db,method,rmse_deg,trials_kept\n";
  for (const auto& cell : results) {
    for (const auto& per_method : cell.methods) {
      out << format_double(cell.spec.snr_db) << ',' << method_name(per_method.method)
          << ',' << format_double(per_method.aggregate.rmse_deg) << ','
          << per_method.aggregate.trials_kept << '\n';
    }
  }
  return path;
}

std::string run_fig4(const RunOptions& options) {
  const int trials = options.trials > 0 ? options.trials : 100;
  std::vector<CellSpec> cells;
  for (int k = 2; k <= 12; ++k) {
    CellSpec cell;
    cell.geometry = {GeometrySpec::Kind::coprime, 16, 5, 2, 0.5};
    cell.scenario.amplitude = AmplitudeModel::equal_power(0.0);
    cell.random_doas = RandomDoaSpec{k, -65.0, 65.0, 4.0};
    cell.num_snapshots = 20;
    cell.snr_db = 20.0;
    cell.solver_rank = k;
    cells.push_back(cell);
  }

  SolverConfig base;
  base.toeplitz_mode = options.toeplitz_mode;
  const auto results = run_cells(cells, {Method::apgls, Method::cbf}, trials,
                                 options.seed, base, options.jobs);

  const std::string path =
      options.output_path.empty() ? "fig4.csv" : options.output_path;
  auto out = open_output(path);
  out << csv_header_comment("fig4", options.seed) << '\n';
  out << "k,method,rmse_deg,trials_kept\n";
  for (const auto& cell : results) {
    for (const auto& per_method : cell.methods) {
      out << cell.spec.random_doas->count << ',' << method_name(per_method.method)
          << ',' << format_double(per_method.aggregate.rmse_deg) << ','
          << per_method.aggregate.trials_kept << '\n';
    }
  }
  return path;
}

std::string run_custom(const ExperimentConfig& config, const RunOptions& options) {
  const int solver_rank =
      config.solver_rank > 0
          ? config.solver_rank
          : (config.random_doas ? config.random_doas->count
                                : config.scenario.num_sources());

  std::vector<CellSpec> cells;
  for (double snr : config.snr_db) {
    CellSpec cell;
    cell.geometry = config.geometry;
    cell.scenario = config.scenario;
    cell.random_doas = config.random_doas;
    cell.num_snapshots = config.num_snapshots;
    cell.snr_db = snr;
    cell.solver_rank = solver_rank;
    cells.push_back(cell);
  }

  const auto results = run_cells(cells, config.methods, config.trials,
                                 config.master_seed, config.solver, options.jobs);

  const std::string path =
      config.output_path.empty() ? "run.csv" : config.output_path;
  auto out = open_output(path);
  out << csv_header_comment("run", config.master_seed) << '\n';
  out << "trial,method,K,L,snr_db,rmse_deg,converged,iterations,dropped_as_outlier\n";
  for (const auto& cell : results) {
    for (const auto& per_method : cell.methods) {
      for (std::size_t t = 0; t < per_method.reports.size(); ++t) {
        const TrialReport& report = per_method.reports[t];
        out << report.trial_index << ',' << method_name(per_method.method) << ','
            << report.true_doas_deg.size() << ',' << cell.spec.num_snapshots << ','
            << format_double(cell.spec.snr_db) << ','
            << format_double(report.rmse_deg) << ',' << (report.converged ? 1 : 0)
            << ',' << report.iterations << ','
            << (per_method.aggregate.is_outlier[t] ? 1 : 0) << '\n';
      }
    }
  }
  out.close();

  if (!options.trace_path.empty() &&
      std::find(config.methods.begin(), config.methods.end(), Method::apgls) !=
          config.methods.end()) {
    // re-run the first trial's solve with tracing enabled
    const ArrayGeometry geom = make_geometry(config.geometry);
    const std::uint64_t stream = substream_seed(config.master_seed, 0);
    SourceScenario scenario = config.scenario;
    if (config.random_doas) {
      Rng doa_rng(substream_seed(stream, 1));
      scenario.doas_deg = draw_random_doas(*config.random_doas, doa_rng);
    }
    const SnapshotData data =
        generate_snapshots(geom, scenario, config.num_snapshots,
                           config.snr_db.front(), substream_seed(stream, 2));
    SolverConfig cfg = config.solver;
    cfg.rank = solver_rank;
    cfg.seed = substream_seed(stream, 3);
    cfg.record_trace = true;
    const SolverResult res =
        solve(sample_covariance(data.observed), selection_matrix(geom), cfg);
    dump_trace(options.trace_path, "run trace", config.master_seed, res.trace);
  }

  if (options.markdown) write_markdown_summary(results);
  return path;
}

}  // namespace apgls
