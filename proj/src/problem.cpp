#include "darcyheat/problem.hpp"

#include <cmath>

#include "darcyheat/errors.hpp"

namespace darcyheat {

ProblemSpec builtin_problem(const std::string& name) {
  ProblemSpec p;
  p.name = name;
  p.kappa = 1.0;

  if (name == "example1") {
    p.domain = DomainTag::UnitSquare;
    p.nu = [](double s) { return std::sin(s) + 2.0; };
    p.nu_prime = [](double s) { return std::cos(s); };
    p.nu_lower = 1.0;
    p.nu_upper = 3.0;
    p.force = [](Vec2 x) -> Vec2 {
      return {x.x * x.y * (1.0 - x.x) * (1.0 - x.y), 0.0};
    };
    // curl f = d f2 / dx - d f1 / dy with f2 = 0.
    p.curl_force = [](Vec2 x) { return -x.x * (1.0 - x.x) * (1.0 - 2.0 * x.y); };
    p.dirac_points = {{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}};
    return p;
  }

  if (name == "example2") {
    p.domain = DomainTag::LShape;
    p.nu = [](double s) { return std::exp(-s * s) + 1.0; };
    p.nu_prime = [](double s) { return -2.0 * s * std::exp(-s * s); };
    p.nu_lower = 1.0;
    p.nu_upper = 2.0;
    p.force = [](Vec2 x) -> Vec2 {
      return {10.0 * x.y * (1.0 - x.x) * (1.0 + x.x), 5.0 * x.x * (1.0 - x.y) * (1.0 + x.x)};
    };
    p.curl_force = [](Vec2 x) {
      return 5.0 * (1.0 + 2.0 * x.x) * (1.0 - x.y) - 10.0 * (1.0 - x.x * x.x);
    };
    p.dirac_points = {{-0.5, -0.5}, {-0.5, 0.5}, {0.5, 0.5}};
    return p;
  }

  if (name == "verification-poisson") {
    // -kappa Laplace T = g with f = 0 (hence u = 0); exact T is known.
    p.domain = DomainTag::UnitSquare;
    p.nu = [](double) { return 1.0; };
    p.nu_prime = [](double) { return 0.0; };
    p.nu_lower = 1.0;
    p.nu_upper = 1.0;
    p.force = [](Vec2) -> Vec2 { return {0.0, 0.0}; };
    p.curl_force = [](Vec2) { return 0.0; };
    p.heat_source = [](Vec2 x) {
      return 2.0 * M_PI * M_PI * std::sin(M_PI * x.x) * std::sin(M_PI * x.y);
    };
    ExactSolution exact;
    exact.temperature = [](Vec2 x) { return std::sin(M_PI * x.x) * std::sin(M_PI * x.y); };
    exact.temperature_gradient = [](Vec2 x) -> Vec2 {
      return {M_PI * std::cos(M_PI * x.x) * std::sin(M_PI * x.y),
              M_PI * std::sin(M_PI * x.x) * std::cos(M_PI * x.y)};
    };
    p.exact = exact;
    return p;
  }

  if (name == "verification-darcy-gradient") {
    // f = grad(x1): the exact velocity is 0 and the pressure is the
    // zero-mean P0 projection of x1.
    p.domain = DomainTag::UnitSquare;
    p.nu = [](double) { return 1.0; };
    p.nu_prime = [](double) { return 0.0; };
    p.nu_lower = 1.0;
    p.nu_upper = 1.0;
    p.force = [](Vec2) -> Vec2 { return {1.0, 0.0}; };
    p.curl_force = [](Vec2) { return 0.0; };
    return p;
  }

  throw ConfigError("unknown problem '" + name +
                    "'; available: example1, example2, verification-poisson, "
                    "verification-darcy-gradient");
}

void validate_problem(const ProblemSpec& problem) {
  if (!problem.nu || !problem.nu_prime) throw ConfigError("problem lacks a viscosity function");
  if (!problem.force) throw ConfigError("problem lacks a body force");
  if (!problem.curl_force)
    throw ConfigError(
        "problem lacks an analytic curl of the body force; supply it analytically");
  if (!(problem.kappa > 0.0)) throw ConfigError("thermal diffusivity kappa must be positive");
  if (!(problem.nu_lower > 0.0) || !(problem.nu_upper >= problem.nu_lower))
    throw ConfigError("declared viscosity bounds must satisfy 0 < nu_lower <= nu_upper");
  for (int i = 0; i <= 1000; ++i) {
    double s = -50.0 + 0.1 * i;
    double v = problem.nu(s);
    // Tiny slack for bounds attained only in the limit.
    if (v < problem.nu_lower - 1e-12 || v > problem.nu_upper + 1e-12)
      throw ConfigError("viscosity leaves its declared bounds at s = " + std::to_string(s) +
                        ": nu = " + std::to_string(v));
  }
}

Mesh initial_mesh(const ProblemSpec& problem, int cells) {
  switch (problem.domain) {
    case DomainTag::UnitSquare:
      return make_unit_square_crisscross(cells);
    case DomainTag::LShape:
      return make_lshape_crisscross(std::max(1, cells / 2));
    case DomainTag::CustomMesh:
      return read_mesh_text_file(problem.mesh_file);
  }
  throw ConfigError("unhandled domain tag");
}

}  // namespace darcyheat
