#include "darcyheat/adapt.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "darcyheat/errors.hpp"

namespace darcyheat {

std::vector<int> mark(const std::vector<double>& indicator, double factor) {
  double max_value = 0.0;
  for (double v : indicator) max_value = std::max(max_value, v);
  std::vector<int> marked;
  if (max_value <= 0.0) return marked;
  double threshold = factor * max_value;
  for (int t = 0; t < static_cast<int>(indicator.size()); ++t)
    if (indicator[t] > threshold) marked.push_back(t);
  return marked;
}

AdaptiveResult run_adaptive(const ProblemSpec& problem, Mesh initial_mesh,
                            const AdaptiveOptions& options, const IterationObserver& observer) {
  if (options.iterations < 1) throw ConfigError("adaptive iteration count must be >= 1");
  validate_problem(problem);
  const QuadratureRule quad = quadrature_rule(options.quad_degree);

  AdaptiveResult result;
  Mesh mesh = std::move(initial_mesh);
  int previous_ndof = -1;

  for (int i = 0; i < options.iterations; ++i) {
    auto start = std::chrono::steady_clock::now();
    DofLayout layout = make_dof_layout(mesh);
    auto [state, report] = picard(mesh, layout, problem, quad, options.picard);
    if (!report.converged) {
      result.aborted = true;
      result.failure_report = report;
      result.final_mesh = std::move(mesh);
      return result;
    }
    IndicatorField indicators =
        compute_indicators(mesh, layout, state, problem, options.p, quad);

    AdaptiveRecord record;
    record.iteration = i;
    record.ndof = layout.ndof();
    record.est_heat = indicators.heat_total;
    record.est_curl = indicators.curl_total;
    record.est_pressure = indicators.pressure_total;
    record.est_total = indicators.total_total;
    record.elements = mesh.num_triangles();
    record.picard_iterations = report.iterations;
    record.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (record.ndof <= previous_ndof)
      throw Error("Ndof failed to increase across adaptive iterations");
    previous_ndof = record.ndof;
    result.records.push_back(record);

    if (observer) observer(record, mesh, layout, state, indicators);

    std::vector<int> marked = mark(indicators.total, options.mark_factor);
    result.marked_history.push_back(marked);
    result.state = std::move(state);
    result.indicators = std::move(indicators);

    if (marked.empty()) {
      result.stagnated = true;
      result.solved_mesh = mesh;
      result.final_mesh = std::move(mesh);
      return result;
    }
    result.solved_mesh = mesh;
    mesh = bisect(mesh, marked, options.min_angle_floor_deg).mesh;
  }

  result.final_mesh = std::move(mesh);
  return result;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) continue;
    double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

}  // namespace darcyheat
