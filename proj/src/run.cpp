#include "darcyheat/run.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "darcyheat/errors.hpp"
#include "darcyheat/vtk.hpp"

namespace darcyheat {

namespace {

namespace fs = std::filesystem;

std::string frame_path(const fs::path& dir, const char* stem, int iteration) {
  char name[64];
  std::snprintf(name, sizeof(name), "%s_%04d.vtk", stem, iteration);
  return (dir / name).string();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw Error("failed writing: " + path.string());
}

}  // namespace

std::string records_to_csv(const std::vector<AdaptiveRecord>& records) {
  std::ostringstream oss;
  oss << "iter,ndof,est_heat,est_curl,est_pressure,est_total,picard_iters,elements\n";
  for (const auto& r : records)
    oss << r.iteration << ',' << r.ndof << ',' << format_double(r.est_heat) << ','
        << format_double(r.est_curl) << ',' << format_double(r.est_pressure) << ','
        << format_double(r.est_total) << ',' << r.picard_iterations << ',' << r.elements << '\n';
  return oss.str();
}

RunOutcome execute_run(const RunConfig& config) {
  validate_config(config);

  ProblemSpec problem = builtin_problem(config.problem);
  if (!config.mesh_file.empty()) {
    problem.domain = DomainTag::CustomMesh;
    problem.mesh_file = config.mesh_file;
  }
  validate_problem(problem);

  Mesh mesh = initial_mesh(problem, config.cells);
  for (const Vec2& z : problem.dirac_points) locate(mesh, z);  // domain membership

  fs::path out_dir(config.out);
  fs::create_directories(out_dir);
  write_file(out_dir / "config.resolved", serialize_config(config));

  AdaptiveOptions options;
  options.p = config.p;
  options.iterations = config.iters;
  options.quad_degree = config.quad_degree;
  options.picard.tol = config.tol;
  options.picard.max_iter = config.max_picard;
  options.mark_factor = config.mark_factor;

  IterationObserver observer;
  if (config.vtk)
    observer = [&](const AdaptiveRecord& record, const Mesh& m, const DofLayout& layout,
                   const CoupledState& state, const IndicatorField& indicators) {
      export_vtk(m, nullptr, nullptr, nullptr, frame_path(out_dir, "mesh", record.iteration));
      export_vtk(m, &layout, &state, &indicators,
                 frame_path(out_dir, "solution", record.iteration));
    };

  AdaptiveResult result = run_adaptive(problem, std::move(mesh), options, observer);

  RunOutcome outcome;
  outcome.records = result.records;
  outcome.stagnated = result.stagnated;
  outcome.csv_path = (out_dir / "convergence.csv").string();
  write_file(outcome.csv_path, records_to_csv(result.records));

  if (result.aborted) {
    std::ostringstream oss;
    oss << "Picard iteration failed to converge at adaptive iteration " << result.records.size()
        << " (final increment " << result.failure_report.final_increment
        << " after " << result.failure_report.iterations
        << " iterations); partial records written to " << outcome.csv_path;
    throw SolverError(oss.str());
  }

  std::vector<double> ndof, total;
  std::size_t n = result.records.size();
  std::size_t first = n > 10 ? n - 10 : 0;
  for (std::size_t i = first; i < n; ++i) {
    ndof.push_back(result.records[i].ndof);
    total.push_back(result.records[i].est_total);
  }
  outcome.slope = fit_loglog_slope(ndof, total);
  return outcome;
}

namespace {

void add_run_flags(CLI::App* cmd, RunConfig& config, std::string& config_path,
                   std::string& vtk_flag) {
  cmd->add_option("--config", config_path, "key = value config file; flags override");
  cmd->add_option("--problem", config.problem,
                  "example1 | example2 | verification-poisson | verification-darcy-gradient");
  cmd->add_option("--mesh", config.mesh_file, "custom initial mesh (text format)");
  cmd->add_option("--iters", config.iters, "adaptive iterations");
  cmd->add_option("--quad-degree", config.quad_degree, "quadrature exactness degree (1..20)");
  cmd->add_option("--tol", config.tol, "Picard increment tolerance");
  cmd->add_option("--max-picard", config.max_picard, "Picard iteration cap");
  cmd->add_option("--mark-factor", config.mark_factor, "maximum-marking threshold factor");
  cmd->add_option("--out", config.out, "output directory");
  cmd->add_option("--vtk", vtk_flag, "on | off: per-iteration VTK export");
  cmd->add_option("--cells", config.cells, "initial mesh subdivisions");
  cmd->add_option("--seed", config.seed, "reserved, echoed into config.resolved");
}

// Re-parse: file first, then explicit flags on top.
RunConfig merge_config(const CLI::App* cmd, const RunConfig& flags, const std::string& config_path,
                       const std::string& vtk_flag) {
  RunConfig config;
  if (!config_path.empty()) config = load_config_file(config_path);
  auto overridden = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (overridden("--problem")) config.problem = flags.problem;
  if (overridden("--mesh")) config.mesh_file = flags.mesh_file;
  if (overridden("--iters")) config.iters = flags.iters;
  if (overridden("--quad-degree")) config.quad_degree = flags.quad_degree;
  if (overridden("--tol")) config.tol = flags.tol;
  if (overridden("--max-picard")) config.max_picard = flags.max_picard;
  if (overridden("--mark-factor")) config.mark_factor = flags.mark_factor;
  if (overridden("--out")) config.out = flags.out;
  if (overridden("--cells")) config.cells = flags.cells;
  if (overridden("--seed")) config.seed = flags.seed;
  if (!vtk_flag.empty()) apply_config_entry(config, "vtk", vtk_flag);
  return config;
}

int do_run(const RunConfig& config) {
  RunOutcome outcome = execute_run(config);
  std::cout << "completed " << outcome.records.size() << " adaptive iterations ("
            << (outcome.stagnated ? "stagnated: all indicators zero" : "iteration budget reached")
            << ")\n";
  std::cout << "convergence table: " << outcome.csv_path << '\n';
  std::cout << "fitted est_total decay slope vs Ndof (last " << std::min<std::size_t>(10, outcome.records.size())
            << " iterations): " << format_double(outcome.slope) << '\n';
  return 0;
}

int do_sweep(const RunConfig& base, const std::vector<double>& p_values) {
  namespace fs = std::filesystem;
  std::vector<std::future<RunOutcome>> futures;
  std::vector<RunConfig> configs;
  for (double p : p_values) {
    RunConfig config = base;
    config.p = p;
    config.out = (fs::path(base.out) / ("p_" + format_double(p))).string();
    configs.push_back(config);
  }
  for (const auto& config : configs)
    futures.push_back(std::async(std::launch::async, [config] { return execute_run(config); }));
  int failures = 0;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    try {
      RunOutcome outcome = futures[i].get();
      std::cout << "p = " << format_double(p_values[i]) << ": slope "
                << format_double(outcome.slope) << " (" << outcome.csv_path << ")\n";
    } catch (const std::exception& err) {
      std::cerr << "p = " << format_double(p_values[i]) << " failed: " << err.what() << '\n';
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Adaptive mixed finite element solver for Darcy flow coupled with heat "
               "transport under point sources"};
  app.require_subcommand(1);

  RunConfig run_flags, sweep_flags;
  std::string run_config_path, sweep_config_path;
  std::string run_vtk, sweep_vtk;
  double run_p = 1.6;
  std::string p_list = "1.2,1.4,1.6,1.8";

  CLI::App* run_cmd = app.add_subcommand("run", "one adaptive run");
  add_run_flags(run_cmd, run_flags, run_config_path, run_vtk);
  run_cmd->add_option("--p", run_p, "integrability index, in (1, 2)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "independent runs over several p values");
  add_run_flags(sweep_cmd, sweep_flags, sweep_config_path, sweep_vtk);
  sweep_cmd->add_option("--p-list", p_list, "comma-separated p values");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (run_cmd->parsed()) {
      RunConfig config = merge_config(run_cmd, run_flags, run_config_path, run_vtk);
      if (run_cmd->count("--p") > 0) config.p = run_p;
      return do_run(config);
    }
    RunConfig config = merge_config(sweep_cmd, sweep_flags, sweep_config_path, sweep_vtk);
    std::vector<double> p_values;
    std::stringstream ss(p_list);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) p_values.push_back(std::stod(item));
    if (p_values.empty()) throw ConfigError("--p-list is empty");
    return do_sweep(config, p_values);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}

}  // namespace darcyheat
