#pragma once

#include <Eigen/Core>
#include <array>

#include "darcyheat/mesh.hpp"

namespace darcyheat {

// Global numbering for the RT0 / P0 / P1 triple. Velocity DOFs live on
// interior edges only (boundary fluxes are eliminated, enforcing u.n = 0 on
// the boundary); pressure DOFs are one per triangle; temperature DOFs live on
// interior vertices (T = 0 on the boundary).
struct DofLayout {
  int n_velocity = 0;
  int n_pressure = 0;
  int n_temperature = 0;

  std::vector<int> edge_to_udof;    // -1 on boundary edges
  std::vector<int> udof_to_edge;
  std::vector<int> vertex_to_tdof;  // -1 on boundary vertices
  std::vector<int> tdof_to_vertex;

  // Reported DOF count: interior edges + triangles + interior vertices.
  int ndof() const { return n_velocity + n_pressure + n_temperature; }
};

DofLayout make_dof_layout(const Mesh& mesh);

// Velocity coefficient of each local edge of triangle t (0 for eliminated
// boundary edges). The coefficient multiplies the global RT0 basis function
// of the edge.
std::array<double, 3> gather_velocity(const Mesh& mesh, const DofLayout& layout,
                                      const Eigen::VectorXd& u, int t);

// Nodal temperature at each local vertex of triangle t (0 on the boundary).
std::array<double, 3> gather_temperature(const Mesh& mesh, const DofLayout& layout,
                                         const Eigen::VectorXd& T, int t);

// Local RT0 basis on triangle t: psi_le(x) = s * (|gamma| / (2|K|)) (x - P),
// with P the vertex opposite local edge le and s the orientation sign.
Vec2 rt0_basis(const Mesh& mesh, int t, int le, Vec2 x);
// div psi_le = s * |gamma| / |K|, constant on the triangle.
double rt0_basis_div(const Mesh& mesh, int t, int le);

// u_h(x) on triangle t from local edge coefficients.
Vec2 evaluate_rt0(const Mesh& mesh, int t, const std::array<double, 3>& coeffs, Vec2 x);
Vec2 evaluate_rt0(const Mesh& mesh, const DofLayout& layout, const Eigen::VectorXd& u, int t,
                  Vec2 x);
double rt0_divergence(const Mesh& mesh, int t, const std::array<double, 3>& coeffs);

// P1 evaluation from local nodal values; the gradient is constant per
// triangle.
double evaluate_p1(const Mesh& mesh, int t, const std::array<double, 3>& nodal, Vec2 x);
Vec2 evaluate_grad_p1(const Mesh& mesh, int t, const std::array<double, 3>& nodal);
// Gradient of the barycentric basis function of local vertex lv.
Vec2 grad_lambda(const Mesh& mesh, int t, int lv);

}  // namespace darcyheat
