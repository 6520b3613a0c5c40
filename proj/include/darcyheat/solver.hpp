#pragma once

#include <utility>
#include <vector>

#include "darcyheat/assembly.hpp"

namespace darcyheat {

// Direct sparse solve with relative residual <= 1e-10 and deterministic
// output for fixed input. Throws SolverError on singular or severely
// ill-conditioned factorizations.
Eigen::VectorXd solve_sparse(const SparseSystem& system);

// Velocity, pressure, and temperature coefficients of one coupled solution on
// a fixed mesh. The pressure has zero area-weighted mean.
struct CoupledState {
  Eigen::VectorXd u;
  Eigen::VectorXd p;
  Eigen::VectorXd T;
};

struct PicardReport {
  int iterations = 0;
  double final_increment = 0.0;
  std::vector<double> increment_history;
  bool converged = false;
};

struct PicardOptions {
  double tol = 1e-8;
  int max_iter = 200;
};

// Fixed-point iteration: Darcy solve with nu(T_i), then temperature solve
// with u_{i+1}, starting from the zero state, until the Euclidean norm of the
// concatenated coefficient increment drops to tol. A nonconverged run returns
// converged = false with the full increment history.
std::pair<CoupledState, PicardReport> picard(const Mesh& mesh, const DofLayout& layout,
                                             const ProblemSpec& problem,
                                             const QuadratureRule& quad,
                                             const PicardOptions& options = {});

// Euclidean norms of the algebraic residuals of both equations, reassembled
// independently at the given state (fixed-point consistency check).
struct ConsistencyResiduals {
  double darcy = 0.0;
  double temperature = 0.0;
};

ConsistencyResiduals fixed_point_residuals(const Mesh& mesh, const DofLayout& layout,
                                           const ProblemSpec& problem, const QuadratureRule& quad,
                                           const CoupledState& state);

}  // namespace darcyheat
