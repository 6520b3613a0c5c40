#pragma once

#include <functional>

#include "darcyheat/estimator.hpp"

namespace darcyheat {

// Maximum marking: elements whose indicator strictly exceeds factor * max.
// With the default factor 1/2 the argmax is always marked when max > 0; an
// all-zero field marks nothing.
std::vector<int> mark(const std::vector<double>& indicator, double factor = 0.5);

struct AdaptiveRecord {
  int iteration = 0;
  int ndof = 0;
  double est_heat = 0.0;
  double est_curl = 0.0;
  double est_pressure = 0.0;
  double est_total = 0.0;
  int elements = 0;
  int picard_iterations = 0;
  double wall_time_seconds = 0.0;
};

struct AdaptiveOptions {
  double p = 1.6;
  int iterations = 10;
  int quad_degree = 19;
  PicardOptions picard;
  double mark_factor = 0.5;
  double min_angle_floor_deg = 5.0;
};

struct AdaptiveResult {
  std::vector<AdaptiveRecord> records;
  std::vector<std::vector<int>> marked_history;  // element ids marked per iteration
  Mesh final_mesh;          // after the last refinement
  Mesh solved_mesh;         // mesh of the last completed solve
  CoupledState state;       // solution on solved_mesh
  IndicatorField indicators;
  bool stagnated = false;   // empty marking ended the loop early
  bool aborted = false;     // Picard nonconvergence
  PicardReport failure_report;
};

// Called after each solve+estimate, before marking.
using IterationObserver =
    std::function<void(const AdaptiveRecord&, const Mesh&, const DofLayout&, const CoupledState&,
                       const IndicatorField&)>;

// Algorithm: solve (Picard), estimate, record, mark (maximum strategy),
// bisect; repeated for the requested number of iterations. Stops early on
// empty marking (stagnation) or Picard nonconvergence (aborted, with partial
// records and the failing report).
AdaptiveResult run_adaptive(const ProblemSpec& problem, Mesh initial_mesh,
                            const AdaptiveOptions& options, const IterationObserver& observer = {});

// Least-squares slope of log(y) against log(x); pairs with nonpositive
// entries are skipped. Returns NaN with fewer than two usable pairs.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace darcyheat
