#pragma once

#include <Eigen/Sparse>

#include "darcyheat/fem.hpp"
#include "darcyheat/problem.hpp"
#include "darcyheat/quadrature.hpp"

namespace darcyheat {

enum class SystemTag { Darcy, Temperature };

struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  SystemTag tag = SystemTag::Darcy;
};

// Darcy saddle-point system with viscosity nu(T_h):
//   [ A(T)  B^T  0 ] [u]   [F]
//   [ B     0    L ] [p] = [0]
//   [ 0     L^T  0 ] [l]   [0]
// with A_{gg'} = int nu(T_h) psi_g . psi_g', B_{Kg} = -int_K div psi_g
// (= -s |gamma|), F_g = int f . psi_g, and L_K = |K| the Lagrange multiplier
// column enforcing the zero pressure mean. Unknown order: velocities,
// pressures, multiplier. Throws AssemblyError when nu(T_h) <= 0 at a
// quadrature point.
SparseSystem assemble_darcy(const Mesh& mesh, const DofLayout& layout, const Eigen::VectorXd& T,
                            const ProblemSpec& problem, const QuadratureRule& quad);

// Temperature system (K + C) T = dirac_load(D) + smooth source load, with
// K_{ij} = kappa int grad(phi_j) . grad(phi_i) and
// C_{ij} = -int phi_j (u_h . grad(phi_i)), restricted to interior vertices.
SparseSystem assemble_temperature(const Mesh& mesh, const DofLayout& layout,
                                  const Eigen::VectorXd& u, const ProblemSpec& problem,
                                  const QuadratureRule& quad);

// Point-source load: entry i = sum_{z in D} phi_i(z), over interior vertices.
// Warns (stderr) when a point sits on the boundary, where the functional
// annihilates the discrete space; throws DomainError when outside the domain.
Eigen::VectorXd dirac_load(const Mesh& mesh, const DofLayout& layout,
                           const std::vector<Vec2>& points);

// Same functional over all vertices, before boundary elimination. The sum of
// the entries equals the number of points exactly.
Eigen::VectorXd dirac_load_all_vertices(const Mesh& mesh, const std::vector<Vec2>& points);

Eigen::VectorXd smooth_source_load(const Mesh& mesh, const DofLayout& layout,
                                   const std::function<double(Vec2)>& source,
                                   const QuadratureRule& quad);

// Incremental assemblers used by the Picard iteration: the parts independent
// of the iterate (B, F, the multiplier, and K plus the load) are built once
// per mesh.
class DarcyAssembler {
 public:
  DarcyAssembler(const Mesh& mesh, const DofLayout& layout, const ProblemSpec& problem,
                 const QuadratureRule& quad);
  SparseSystem assemble(const Eigen::VectorXd& T) const;

 private:
  const Mesh& mesh_;
  const DofLayout& layout_;
  const ProblemSpec& problem_;
  const QuadratureRule& quad_;
  std::vector<Eigen::Triplet<double>> fixed_triplets_;  // B, B^T, multiplier
  Eigen::VectorXd rhs_;
};

class TemperatureAssembler {
 public:
  TemperatureAssembler(const Mesh& mesh, const DofLayout& layout, const ProblemSpec& problem,
                       const QuadratureRule& quad);
  SparseSystem assemble(const Eigen::VectorXd& u) const;

 private:
  const Mesh& mesh_;
  const DofLayout& layout_;
  const QuadratureRule& quad_;
  std::vector<Eigen::Triplet<double>> stiffness_triplets_;
  Eigen::VectorXd rhs_;
};

}  // namespace darcyheat
