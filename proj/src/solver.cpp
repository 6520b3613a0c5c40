#include "darcyheat/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "darcyheat/errors.hpp"

namespace darcyheat {

Eigen::VectorXd solve_sparse(const SparseSystem& system) {
  if (system.matrix.rows() != system.matrix.cols())
    throw SolverError("system matrix is not square");
  if (system.matrix.rows() != system.rhs.size())
    throw SolverError("right-hand side size does not match the matrix");
  if (system.matrix.rows() == 0) return Eigen::VectorXd();

  Eigen::SparseMatrix<double> A = system.matrix;
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw SolverError("sparse LU factorization failed (matrix singular to working precision): " +
                      lu.lastErrorMessage());

  Eigen::VectorXd x = lu.solve(system.rhs);
  if (!x.allFinite())
    throw SolverError("sparse solve produced non-finite values (matrix numerically singular)");

  const double bnorm = system.rhs.norm();
  double residual = (A * x - system.rhs).norm();
  if (bnorm > 0.0 && residual > 1e-12 * bnorm) {
    // One step of iterative refinement.
    Eigen::VectorXd dx = lu.solve(system.rhs - A * x);
    if (dx.allFinite()) x += dx;
    residual = (A * x - system.rhs).norm();
  }
  double rel = bnorm > 0.0 ? residual / bnorm : residual;
  if (rel > 1e-10) {
    std::ostringstream oss;
    oss << "sparse solve residual " << rel
        << " exceeds 1e-10; the system is likely ill-conditioned (|b| = " << bnorm
        << ", |x| = " << x.norm() << ")";
    throw SolverError(oss.str());
  }
  return x;
}

std::pair<CoupledState, PicardReport> picard(const Mesh& mesh, const DofLayout& layout,
                                             const ProblemSpec& problem,
                                             const QuadratureRule& quad,
                                             const PicardOptions& options) {
  DarcyAssembler darcy(mesh, layout, problem, quad);
  TemperatureAssembler temperature(mesh, layout, problem, quad);

  CoupledState state;
  state.u = Eigen::VectorXd::Zero(layout.n_velocity);
  state.p = Eigen::VectorXd::Zero(layout.n_pressure);
  state.T = Eigen::VectorXd::Zero(layout.n_temperature);

  PicardReport report;
  for (int it = 1; it <= options.max_iter; ++it) {
    Eigen::VectorXd xd = solve_sparse(darcy.assemble(state.T));
    Eigen::VectorXd u_new = xd.head(layout.n_velocity);
    Eigen::VectorXd p_new = xd.segment(layout.n_velocity, layout.n_pressure);
    Eigen::VectorXd T_new = solve_sparse(temperature.assemble(u_new));

    double inc = std::sqrt((u_new - state.u).squaredNorm() + (p_new - state.p).squaredNorm() +
                           (T_new - state.T).squaredNorm());
    report.increment_history.push_back(inc);
    report.iterations = it;
    report.final_increment = inc;
    state.u = std::move(u_new);
    state.p = std::move(p_new);
    state.T = std::move(T_new);
    if (inc <= options.tol) {
      report.converged = true;
      break;
    }
  }
  return {std::move(state), std::move(report)};
}

ConsistencyResiduals fixed_point_residuals(const Mesh& mesh, const DofLayout& layout,
                                           const ProblemSpec& problem, const QuadratureRule& quad,
                                           const CoupledState& state) {
  SparseSystem darcy = assemble_darcy(mesh, layout, state.T, problem, quad);
  Eigen::VectorXd xd(layout.n_velocity + layout.n_pressure + 1);
  xd << state.u, state.p, 0.0;  // the multiplier vanishes for a consistent state
  SparseSystem temp = assemble_temperature(mesh, layout, state.u, problem, quad);

  ConsistencyResiduals res;
  res.darcy = (darcy.matrix * xd - darcy.rhs).norm();
  res.temperature = (temp.matrix * state.T - temp.rhs).norm();
  return res;
}

}  // namespace darcyheat
