#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "darcyheat/geometry.hpp"
#include "darcyheat/mesh.hpp"

namespace darcyheat {

enum class DomainTag { UnitSquare, LShape, CustomMesh };

struct ExactSolution {
  std::function<double(Vec2)> temperature;
  std::function<Vec2(Vec2)> temperature_gradient;
};

// Data of one coupled Darcy / heat-transport problem: viscosity nu(T) with
// derivative and declared bounds, constant diffusivity kappa, body force f
// with analytic scalar curl, and the Dirac source points. The optional
// smooth heat source and exact solution exist only for manufactured
// verification problems.
struct ProblemSpec {
  std::string name;
  DomainTag domain = DomainTag::UnitSquare;
  std::string mesh_file;  // for DomainTag::CustomMesh

  std::function<double(double)> nu;
  std::function<double(double)> nu_prime;
  double nu_lower = 0.0;
  double nu_upper = 0.0;

  double kappa = 1.0;

  std::function<Vec2(Vec2)> force;
  std::function<double(Vec2)> curl_force;

  std::vector<Vec2> dirac_points;

  std::function<double(Vec2)> heat_source;  // optional, empty by default
  std::optional<ExactSolution> exact;
};

// Known names: example1, example2, verification-poisson,
// verification-darcy-gradient. Throws ConfigError for anything else.
ProblemSpec builtin_problem(const std::string& name);

// Checks nu against its declared bounds on a sample of [-50, 50], kappa > 0,
// and the presence of curl_force. Throws ConfigError on violations.
void validate_problem(const ProblemSpec& problem);

// Initial mesh for the problem's domain; `cells` counts subdivisions across
// the bounding box (unit square: cells x cells, L-shape: cells/2 per unit
// quadrant). For CustomMesh the file is read instead.
Mesh initial_mesh(const ProblemSpec& problem, int cells);

}  // namespace darcyheat
