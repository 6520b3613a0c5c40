#pragma once

#include "darcyheat/solver.hpp"

namespace darcyheat {

// Per-element residual indicators and their global aggregates. `heat` holds
// the L^p heat-equation indicator, `curl` and `pressure` the two L^2 Darcy
// indicators, `total` their elementwise sum used for marking. Global values:
// heat aggregates in the l^p sense, curl/pressure in l^2, and the total
// estimator is the plain sum of the three.
struct IndicatorField {
  double p = 0.0;
  std::vector<double> heat;
  std::vector<double> curl;
  std::vector<double> pressure;
  std::vector<double> total;
  double heat_total = 0.0;
  double curl_total = 0.0;
  double pressure_total = 0.0;
  double total_total = 0.0;
};

// Heat indicator: per element, (sum_{z in D cap K, z not a vertex} h_K^{2-p}
//   + h_K^p int_K |R_K|^p + h_K sum_{edges of K off the boundary} int |J|^p)^{1/p}
// with R_K = -grad(T_h).u_h - T_h div u_h and J the normal jump of
// kappa grad(T_h) - T_h u_h. Interior edges count toward both incident
// elements. Requires p in (1, 2).
std::vector<double> heat_indicator(const Mesh& mesh, const DofLayout& layout,
                                   const CoupledState& state, const ProblemSpec& problem,
                                   double p, const QuadratureRule& quad);

// Curl indicator: per element, sqrt(h_K^2 ||curl(f - nu(T_h) u_h)||^2
//   + h_K ||tangential jump of f - nu(T_h) u_h||^2_{edges off the boundary}).
// curl(nu(T_h) u_h) = nu'(T_h) (grad T_h x u_h) since RT0 fields are locally
// curl-free.
std::vector<double> curl_indicator(const Mesh& mesh, const DofLayout& layout,
                                   const CoupledState& state, const ProblemSpec& problem,
                                   const QuadratureRule& quad);

// Pressure indicator: per element, sqrt(h_K^2 ||f - nu(T_h) u_h||^2
//   + h_K ||[p_h n]||^2_{edges off the boundary}); grad p_h = 0 elementwise.
std::vector<double> pressure_indicator(const Mesh& mesh, const DofLayout& layout,
                                       const CoupledState& state, const ProblemSpec& problem,
                                       const QuadratureRule& quad);

IndicatorField aggregate(std::vector<double> heat, std::vector<double> curl,
                         std::vector<double> pressure, double p);

IndicatorField compute_indicators(const Mesh& mesh, const DofLayout& layout,
                                  const CoupledState& state, const ProblemSpec& problem, double p,
                                  const QuadratureRule& quad);

// Diagnostic: per-element h_K ||f - P0 f||_L2(K) (data oscillation).
std::vector<double> data_oscillation(const Mesh& mesh, const ProblemSpec& problem,
                                     const QuadratureRule& quad);

namespace detail {

// (1/|K|) int_K |R|^p for a linear R with the given vertex values; exact up
// to roundoff via the pushforward density of R (piecewise linear on the
// sorted value range).
double mean_abs_pow_linear_tri(double a1, double a2, double a3, double p);

// int_0^1 |j1 + s (j2 - j1)|^p ds, exact up to roundoff.
double mean_abs_pow_linear_segment(double j1, double j2, double p);

}  // namespace detail

}  // namespace darcyheat
