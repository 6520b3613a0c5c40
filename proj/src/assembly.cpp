#include "darcyheat/assembly.hpp"

#include <cmath>
#include <iostream>

#include "darcyheat/errors.hpp"

namespace darcyheat {

namespace {

Vec2 physical_point(const Mesh& mesh, int t, const std::array<double, 3>& bary) {
  const auto& tri = mesh.triangles[t];
  return bary[0] * mesh.vertices[tri[0]] + bary[1] * mesh.vertices[tri[1]] +
         bary[2] * mesh.vertices[tri[2]];
}

}  // namespace

DarcyAssembler::DarcyAssembler(const Mesh& mesh, const DofLayout& layout,
                               const ProblemSpec& problem, const QuadratureRule& quad)
    : mesh_(mesh), layout_(layout), problem_(problem), quad_(quad) {
  const int nu_dofs = layout.n_velocity;
  const int np = layout.n_pressure;
  const int n = nu_dofs + np + 1;

  rhs_ = Eigen::VectorXd::Zero(n);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    // B block: B_{t,gamma} = -int_K div psi_gamma = -s |gamma|, mirrored into
    // B^T for symmetry.
    for (int le = 0; le < 3; ++le) {
      int dof = layout.edge_to_udof[mesh.tri_edges[t][le]];
      if (dof < 0) continue;
      double b = -mesh.tri_edge_signs[t][le] * mesh.edge_length[mesh.tri_edges[t][le]];
      fixed_triplets_.emplace_back(nu_dofs + t, dof, b);
      fixed_triplets_.emplace_back(dof, nu_dofs + t, b);
    }
    // Zero-mean pressure multiplier column/row.
    fixed_triplets_.emplace_back(nu_dofs + t, n - 1, mesh.tri_area[t]);
    fixed_triplets_.emplace_back(n - 1, nu_dofs + t, mesh.tri_area[t]);
    // Velocity load F_gamma = int f . psi_gamma.
    for (std::size_t q = 0; q < quad.triangle.points.size(); ++q) {
      Vec2 x = physical_point(mesh, t, quad.triangle.points[q]);
      Vec2 fx = problem.force(x);
      double w = quad.triangle.weights[q] * mesh.tri_area[t];
      for (int le = 0; le < 3; ++le) {
        int dof = layout.edge_to_udof[mesh.tri_edges[t][le]];
        if (dof < 0) continue;
        rhs_[dof] += w * dot(fx, rt0_basis(mesh, t, le, x));
      }
    }
  }
}

SparseSystem DarcyAssembler::assemble(const Eigen::VectorXd& T) const {
  const int nu_dofs = layout_.n_velocity;
  const int n = nu_dofs + layout_.n_pressure + 1;

  std::vector<Eigen::Triplet<double>> triplets = fixed_triplets_;
  triplets.reserve(triplets.size() + 9 * mesh_.num_triangles());

  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    auto nodal_T = gather_temperature(mesh_, layout_, T, t);
    double local[3][3] = {};
    for (std::size_t q = 0; q < quad_.triangle.points.size(); ++q) {
      const auto& bary = quad_.triangle.points[q];
      double Tq = nodal_T[0] * bary[0] + nodal_T[1] * bary[1] + nodal_T[2] * bary[2];
      double nuq = problem_.nu(Tq);
      if (!(nuq > 0.0))
        throw AssemblyError("viscosity nonpositive at a quadrature point of element " +
                            std::to_string(t) + ": nu(" + std::to_string(Tq) +
                            ") = " + std::to_string(nuq));
      Vec2 x = physical_point(mesh_, t, bary);
      Vec2 psi[3];
      for (int le = 0; le < 3; ++le) psi[le] = rt0_basis(mesh_, t, le, x);
      double w = quad_.triangle.weights[q] * mesh_.tri_area[t] * nuq;
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) local[i][j] += w * dot(psi[i], psi[j]);
    }
    for (int i = 0; i < 3; ++i) {
      int di = layout_.edge_to_udof[mesh_.tri_edges[t][i]];
      if (di < 0) continue;
      for (int j = i; j < 3; ++j) {
        int dj = layout_.edge_to_udof[mesh_.tri_edges[t][j]];
        if (dj < 0) continue;
        triplets.emplace_back(di, dj, local[i][j]);
        if (i != j) triplets.emplace_back(dj, di, local[i][j]);
      }
    }
  }

  SparseSystem sys;
  sys.tag = SystemTag::Darcy;
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = rhs_;
  return sys;
}

TemperatureAssembler::TemperatureAssembler(const Mesh& mesh, const DofLayout& layout,
                                           const ProblemSpec& problem, const QuadratureRule& quad)
    : mesh_(mesh), layout_(layout), quad_(quad) {
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    Vec2 grads[3];
    for (int lv = 0; lv < 3; ++lv) grads[lv] = grad_lambda(mesh, t, lv);
    for (int i = 0; i < 3; ++i) {
      int di = layout.vertex_to_tdof[mesh.triangles[t][i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        int dj = layout.vertex_to_tdof[mesh.triangles[t][j]];
        if (dj < 0) continue;
        stiffness_triplets_.emplace_back(
            di, dj, problem.kappa * mesh.tri_area[t] * dot(grads[i], grads[j]));
      }
    }
  }

  rhs_ = dirac_load(mesh, layout, problem.dirac_points);
  if (problem.heat_source) rhs_ += smooth_source_load(mesh, layout, problem.heat_source, quad);
}

SparseSystem TemperatureAssembler::assemble(const Eigen::VectorXd& u) const {
  std::vector<Eigen::Triplet<double>> triplets = stiffness_triplets_;
  triplets.reserve(triplets.size() + 9 * mesh_.num_triangles());

  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    auto coeffs = gather_velocity(mesh_, layout_, u, t);
    Vec2 grads[3];
    for (int lv = 0; lv < 3; ++lv) grads[lv] = grad_lambda(mesh_, t, lv);
    double local[3][3] = {};
    // Integrand phi_j (u_h . grad phi_i) is quadratic per element, exact for
    // the configured rule.
    for (std::size_t q = 0; q < quad_.triangle.points.size(); ++q) {
      const auto& bary = quad_.triangle.points[q];
      Vec2 x = physical_point(mesh_, t, bary);
      Vec2 uq = evaluate_rt0(mesh_, t, coeffs, x);
      double w = quad_.triangle.weights[q] * mesh_.tri_area[t];
      for (int i = 0; i < 3; ++i) {
        double udg = dot(uq, grads[i]);
        for (int j = 0; j < 3; ++j) local[i][j] -= w * bary[j] * udg;
      }
    }
    for (int i = 0; i < 3; ++i) {
      int di = layout_.vertex_to_tdof[mesh_.triangles[t][i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        int dj = layout_.vertex_to_tdof[mesh_.triangles[t][j]];
        if (dj < 0) continue;
        triplets.emplace_back(di, dj, local[i][j]);
      }
    }
  }

  SparseSystem sys;
  sys.tag = SystemTag::Temperature;
  sys.matrix.resize(layout_.n_temperature, layout_.n_temperature);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = rhs_;
  return sys;
}

SparseSystem assemble_darcy(const Mesh& mesh, const DofLayout& layout, const Eigen::VectorXd& T,
                            const ProblemSpec& problem, const QuadratureRule& quad) {
  return DarcyAssembler(mesh, layout, problem, quad).assemble(T);
}

SparseSystem assemble_temperature(const Mesh& mesh, const DofLayout& layout,
                                  const Eigen::VectorXd& u, const ProblemSpec& problem,
                                  const QuadratureRule& quad) {
  return TemperatureAssembler(mesh, layout, problem, quad).assemble(u);
}

Eigen::VectorXd dirac_load_all_vertices(const Mesh& mesh, const std::vector<Vec2>& points) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (const Vec2& z : points) {
    LocateResult loc = locate(mesh, z);
    bool on_boundary = false;
    if (loc.classification == PointClass::AtVertex) {
      int v = mesh.triangles[loc.element][loc.local_vertex];
      load[v] += 1.0;
      on_boundary = mesh.vertex_on_boundary[v];
    } else {
      // The global hat functions are continuous, so one-sided evaluation is
      // enough even when z sits on a shared edge.
      for (int lv = 0; lv < 3; ++lv)
        load[mesh.triangles[loc.element][lv]] += loc.bary[lv];
      if (loc.classification == PointClass::OnEdge)
        on_boundary = mesh.edge_on_boundary[mesh.tri_edges[loc.element][loc.local_edge]];
    }
    if (on_boundary)
      std::cerr << "warning: Dirac point (" << z.x << ", " << z.y
                << ") lies on the boundary; the source functional vanishes on the "
                   "discrete temperature space\n";
  }
  return load;
}

Eigen::VectorXd dirac_load(const Mesh& mesh, const DofLayout& layout,
                           const std::vector<Vec2>& points) {
  Eigen::VectorXd full = dirac_load_all_vertices(mesh, points);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(layout.n_temperature);
  for (int dof = 0; dof < layout.n_temperature; ++dof)
    load[dof] = full[layout.tdof_to_vertex[dof]];
  return load;
}

Eigen::VectorXd smooth_source_load(const Mesh& mesh, const DofLayout& layout,
                                   const std::function<double(Vec2)>& source,
                                   const QuadratureRule& quad) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(layout.n_temperature);
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (std::size_t q = 0; q < quad.triangle.points.size(); ++q) {
      const auto& bary = quad.triangle.points[q];
      double w = quad.triangle.weights[q] * mesh.tri_area[t];
      double g = source(physical_point(mesh, t, bary));
      for (int lv = 0; lv < 3; ++lv) {
        int dof = layout.vertex_to_tdof[mesh.triangles[t][lv]];
        if (dof >= 0) load[dof] += w * g * bary[lv];
      }
    }
  return load;
}

}  // namespace darcyheat
