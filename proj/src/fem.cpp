#include "darcyheat/fem.hpp"

namespace darcyheat {

DofLayout make_dof_layout(const Mesh& mesh) {
  DofLayout layout;
  layout.edge_to_udof.assign(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_on_boundary[e]) continue;
    layout.edge_to_udof[e] = layout.n_velocity++;
    layout.udof_to_edge.push_back(e);
  }
  layout.n_pressure = mesh.num_triangles();
  layout.vertex_to_tdof.assign(mesh.num_vertices(), -1);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.vertex_on_boundary[v]) continue;
    layout.vertex_to_tdof[v] = layout.n_temperature++;
    layout.tdof_to_vertex.push_back(v);
  }
  return layout;
}

std::array<double, 3> gather_velocity(const Mesh& mesh, const DofLayout& layout,
                                      const Eigen::VectorXd& u, int t) {
  std::array<double, 3> c{};
  for (int le = 0; le < 3; ++le) {
    int dof = layout.edge_to_udof[mesh.tri_edges[t][le]];
    c[le] = dof >= 0 ? u[dof] : 0.0;
  }
  return c;
}

std::array<double, 3> gather_temperature(const Mesh& mesh, const DofLayout& layout,
                                         const Eigen::VectorXd& T, int t) {
  std::array<double, 3> c{};
  for (int lv = 0; lv < 3; ++lv) {
    int dof = layout.vertex_to_tdof[mesh.triangles[t][lv]];
    c[lv] = dof >= 0 ? T[dof] : 0.0;
  }
  return c;
}

Vec2 rt0_basis(const Mesh& mesh, int t, int le, Vec2 x) {
  Vec2 opposite = mesh.vertices[mesh.triangles[t][le]];
  double len = mesh.edge_length[mesh.tri_edges[t][le]];
  double scale = mesh.tri_edge_signs[t][le] * len / (2.0 * mesh.tri_area[t]);
  return scale * (x - opposite);
}

double rt0_basis_div(const Mesh& mesh, int t, int le) {
  double len = mesh.edge_length[mesh.tri_edges[t][le]];
  return mesh.tri_edge_signs[t][le] * len / mesh.tri_area[t];
}

Vec2 evaluate_rt0(const Mesh& mesh, int t, const std::array<double, 3>& coeffs, Vec2 x) {
  Vec2 v{};
  for (int le = 0; le < 3; ++le) v = v + coeffs[le] * rt0_basis(mesh, t, le, x);
  return v;
}

Vec2 evaluate_rt0(const Mesh& mesh, const DofLayout& layout, const Eigen::VectorXd& u, int t,
                  Vec2 x) {
  return evaluate_rt0(mesh, t, gather_velocity(mesh, layout, u, t), x);
}

double rt0_divergence(const Mesh& mesh, int t, const std::array<double, 3>& coeffs) {
  double d = 0.0;
  for (int le = 0; le < 3; ++le) d += coeffs[le] * rt0_basis_div(mesh, t, le);
  return d;
}

double evaluate_p1(const Mesh& mesh, int t, const std::array<double, 3>& nodal, Vec2 x) {
  auto bary = mesh.barycentric(t, x);
  return nodal[0] * bary[0] + nodal[1] * bary[1] + nodal[2] * bary[2];
}

Vec2 grad_lambda(const Mesh& mesh, int t, int lv) {
  // lambda_lv vanishes on the opposite edge and is 1 at vertex lv, so its
  // gradient is the inward normal of that edge scaled by 1 / altitude.
  int le = lv;  // local edge le is opposite local vertex lv
  Vec2 n_out = mesh.outward_normal(t, le);
  double altitude = 2.0 * mesh.tri_area[t] / mesh.edge_length[mesh.tri_edges[t][le]];
  return (-1.0 / altitude) * n_out;
}

Vec2 evaluate_grad_p1(const Mesh& mesh, int t, const std::array<double, 3>& nodal) {
  Vec2 g{};
  for (int lv = 0; lv < 3; ++lv) g = g + nodal[lv] * grad_lambda(mesh, t, lv);
  return g;
}

}  // namespace darcyheat
