#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "darcyheat/assembly.hpp"
#include "darcyheat/errors.hpp"
#include "darcyheat/solver.hpp"
#include "support/oracles.hpp"

using namespace darcyheat;

namespace {

ProblemSpec constant_viscosity_problem(std::function<Vec2(Vec2)> force) {
  ProblemSpec p = builtin_problem("verification-darcy-gradient");
  p.force = std::move(force);
  return p;
}

}  // namespace

TEST_CASE("zero data yields the zero Darcy solution") {
  Mesh m = make_unit_square_crisscross(2);
  DofLayout layout = make_dof_layout(m);
  auto quad = quadrature_rule(5);
  ProblemSpec p = constant_viscosity_problem([](Vec2) { return Vec2{0.0, 0.0}; });
  SparseSystem sys = assemble_darcy(m, layout, Eigen::VectorXd::Zero(layout.n_temperature), p, quad);
  Eigen::VectorXd x = solve_sparse(sys);
  CHECK(x.norm() < 1e-13);
}

TEST_CASE("Darcy matrix is symmetric and its velocity block positive definite") {
  Mesh m = make_unit_square_crisscross(2);
  DofLayout layout = make_dof_layout(m);
  auto quad = quadrature_rule(19);
  ProblemSpec p = builtin_problem("example1");
  Eigen::VectorXd T = Eigen::VectorXd::LinSpaced(layout.n_temperature, -0.5, 1.2);
  SparseSystem sys = assemble_darcy(m, layout, T, p, quad);

  Eigen::MatrixXd dense = Eigen::MatrixXd(sys.matrix);
  double asym = (dense - dense.transpose()).cwiseAbs().maxCoeff();
  CHECK(asym <= 1e-13 * dense.cwiseAbs().maxCoeff());

  REQUIRE(layout.n_velocity <= 50);  // small instance for the dense eigensolver oracle
  Eigen::MatrixXd a_block = dense.topLeftCorner(layout.n_velocity, layout.n_velocity);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_block);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("gradient force: u vanishes and p is the zero-mean projection of x1") {
  ProblemSpec p = builtin_problem("verification-darcy-gradient");
  auto quad = quadrature_rule(5);
  for (Mesh m : {make_unit_square_crisscross(2), make_lshape_crisscross(1)}) {
    DofLayout layout = make_dof_layout(m);
    SparseSystem sys =
        assemble_darcy(m, layout, Eigen::VectorXd::Zero(layout.n_temperature), p, quad);
    Eigen::VectorXd x = solve_sparse(sys);
    CHECK(x.head(layout.n_velocity).cwiseAbs().maxCoeff() < 1e-10);

    // Oracle: elementwise mean of x1 is the centroid abscissa.
    double domain_mean = 0.0;
    for (int t = 0; t < m.num_triangles(); ++t)
      domain_mean += m.centroid(t).x * m.tri_area[t];
    domain_mean /= m.total_area();
    for (int t = 0; t < m.num_triangles(); ++t) {
      double expected = m.centroid(t).x - domain_mean;
      CHECK(x[layout.n_velocity + t] == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("example1 data at T = 0 scales the constant-viscosity matrix by 2") {
  Mesh m = make_unit_square_crisscross(2);
  DofLayout layout = make_dof_layout(m);
  auto quad = quadrature_rule(19);
  Eigen::VectorXd T0 = Eigen::VectorXd::Zero(layout.n_temperature);
  SparseSystem ex1 = assemble_darcy(m, layout, T0, builtin_problem("example1"), quad);
  ProblemSpec unit = constant_viscosity_problem(builtin_problem("example1").force);
  SparseSystem base = assemble_darcy(m, layout, T0, unit, quad);

  Eigen::MatrixXd d1 = Eigen::MatrixXd(ex1.matrix);
  Eigen::MatrixXd d2 = Eigen::MatrixXd(base.matrix);
  // sin(0) + 2 = 2 exactly: velocity block doubles, B and multiplier stay.
  auto a1 = d1.topLeftCorner(layout.n_velocity, layout.n_velocity);
  auto a2 = d2.topLeftCorner(layout.n_velocity, layout.n_velocity);
  CHECK((a1 - 2.0 * a2).cwiseAbs().maxCoeff() <= 1e-13 * a1.cwiseAbs().maxCoeff());
  CHECK((d1.bottomRows(layout.n_pressure + 1) - d2.bottomRows(layout.n_pressure + 1))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK((ex1.rhs - base.rhs).norm() == 0.0);
}

TEST_CASE("viscosity positivity violations are reported") {
  Mesh m = make_unit_square_crisscross(1);
  DofLayout layout = make_dof_layout(m);
  ProblemSpec p = builtin_problem("example1");
  p.nu = [](double s) { return s; };  // nonpositive at T = 0
  CHECK_THROWS_AS(
      assemble_darcy(m, layout, Eigen::VectorXd::Zero(layout.n_temperature), p, quadrature_rule(5)),
      AssemblyError);
}

TEST_CASE("temperature stiffness matches the cotangent oracle") {
  // 1x1 criss-cross: four triangles around one interior vertex (the center).
  Mesh m = make_unit_square_crisscross(1);
  DofLayout layout = make_dof_layout(m);
  REQUIRE(layout.n_temperature == 1);
  ProblemSpec p = builtin_problem("verification-poisson");
  p.heat_source = {};
  auto quad = quadrature_rule(5);
  SparseSystem sys = assemble_temperature(m, layout, Eigen::VectorXd::Zero(layout.n_velocity), p, quad);

  auto full = oracle::cotangent_stiffness(m, p.kappa);
  int center = layout.tdof_to_vertex[0];
  CHECK(Eigen::MatrixXd(sys.matrix)(0, 0) == doctest::Approx(full[center][center]).epsilon(1e-13));

  // Same check on a mesh with several interior vertices.
  Mesh m2 = make_unit_square_crisscross(2);
  DofLayout layout2 = make_dof_layout(m2);
  SparseSystem sys2 =
      assemble_temperature(m2, layout2, Eigen::VectorXd::Zero(layout2.n_velocity), p, quad);
  auto full2 = oracle::cotangent_stiffness(m2, p.kappa);
  Eigen::MatrixXd dense2 = Eigen::MatrixXd(sys2.matrix);
  for (int i = 0; i < layout2.n_temperature; ++i)
    for (int j = 0; j < layout2.n_temperature; ++j)
      CHECK(dense2(i, j) ==
            doctest::Approx(full2[layout2.tdof_to_vertex[i]][layout2.tdof_to_vertex[j]])
                .epsilon(1e-12));
}

TEST_CASE("hand-computed stiffness entries on the two-triangle square") {
  // Unit square cut along the diagonal (0,0)-(1,1): both right triangles.
  // Cotangent weights: diagonal edge cot(pi/2) = 0 twice; side edges
  // cot(pi/4) = 1 once. All vertices are boundary here, so compare the
  // pre-elimination oracle directly against hand values.
  Mesh m = build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}});
  auto k = oracle::cotangent_stiffness(m, 1.0);
  CHECK(k[0][2] == doctest::Approx(0.0).epsilon(1e-14));  // diagonal: two right angles
  CHECK(k[0][1] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(k[1][2] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(k[0][0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(k[1][1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stiffness is symmetric, convection is not") {
  Mesh m = make_unit_square_crisscross(3);
  DofLayout layout = make_dof_layout(m);
  auto quad = quadrature_rule(5);
  ProblemSpec p = builtin_problem("example1");
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd u(layout.n_velocity);
  for (int k = 0; k < u.size(); ++k) u[k] = unif(rng);

  SparseSystem with_u = assemble_temperature(m, layout, u, p, quad);
  SparseSystem without_u =
      assemble_temperature(m, layout, Eigen::VectorXd::Zero(layout.n_velocity), p, quad);
  Eigen::MatrixXd k_mat = Eigen::MatrixXd(without_u.matrix);
  Eigen::MatrixXd c_mat = Eigen::MatrixXd(with_u.matrix) - k_mat;
  CHECK((k_mat - k_mat.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * k_mat.cwiseAbs().maxCoeff());
  CHECK((c_mat - c_mat.transpose()).cwiseAbs().maxCoeff() > 1e-8);
  CHECK((c_mat + c_mat.transpose()).cwiseAbs().maxCoeff() > 1e-8);
}

TEST_CASE("convection row sums vanish for a constant velocity field away from the boundary") {
  Mesh m = make_unit_square_crisscross(4);
  DofLayout layout = make_dof_layout(m);
  auto quad = quadrature_rule(5);
  ProblemSpec p = builtin_problem("verification-poisson");
  p.heat_source = {};

  // Constant field (c1, c2) as RT0 coefficients: flux through each interior
  // edge along its global normal.
  Vec2 field{0.8, -0.3};
  Eigen::VectorXd u(layout.n_velocity);
  for (int dof = 0; dof < layout.n_velocity; ++dof) {
    int e = layout.udof_to_edge[dof];
    Vec2 tau = m.edge_tangent(e);
    u[dof] = dot(field, Vec2{tau.y, -tau.x});
  }
  SparseSystem with_u = assemble_temperature(m, layout, u, p, quad);
  SparseSystem without_u =
      assemble_temperature(m, layout, Eigen::VectorXd::Zero(layout.n_velocity), p, quad);
  Eigen::MatrixXd c_mat = Eigen::MatrixXd(with_u.matrix - without_u.matrix);
  Eigen::VectorXd row_sums = c_mat * Eigen::VectorXd::Ones(layout.n_temperature);

  // Rows of vertices whose support avoids the boundary see the constant
  // field exactly; for them sum_j C_ij = -int u . grad(phi_i) = 0.
  for (int dof = 0; dof < layout.n_temperature; ++dof) {
    int v = layout.tdof_to_vertex[dof];
    Vec2 pos = m.vertices[v];
    bool interior_patch = pos.x > 0.26 && pos.x < 0.74 && pos.y > 0.26 && pos.y < 0.74;
    if (interior_patch) CHECK(std::abs(row_sums[dof]) < 1e-13);
  }
}

TEST_CASE("dirac load at a mesh vertex is the canonical basis vector") {
  Mesh m = make_unit_square_crisscross(4);
  DofLayout layout = make_dof_layout(m);
  Eigen::VectorXd load = dirac_load(m, layout, {{0.25, 0.25}});
  int hits = 0;
  for (int dof = 0; dof < layout.n_temperature; ++dof) {
    if (load[dof] != 0.0) {
      ++hits;
      CHECK(load[dof] == 1.0);
      Vec2 v = m.vertices[layout.tdof_to_vertex[dof]];
      CHECK(v.x == doctest::Approx(0.25));
      CHECK(v.y == doctest::Approx(0.25));
    }
  }
  CHECK(hits == 1);
}

TEST_CASE("dirac load at a barycenter gives thirds") {
  Mesh m = make_unit_square_crisscross(2);
  DofLayout layout = make_dof_layout(m);
  int t = locate(m, {0.4, 0.33}).element;
  Vec2 z = m.centroid(t);
  Eigen::VectorXd full = dirac_load_all_vertices(m, {z});
  int nonzero = 0;
  for (int v = 0; v < m.num_vertices(); ++v)
    if (full[v] != 0.0) {
      ++nonzero;
      CHECK(full[v] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    }
  CHECK(nonzero == 3);
  CHECK(full.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dirac load on a shared edge midpoint gives halves, counted once") {
  Mesh m = build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}});
  Eigen::VectorXd full = dirac_load_all_vertices(m, {{0.5, 0.5}});
  CHECK(full[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(full[2] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(full[1] == 0.0);
  CHECK(full[3] == 0.0);
  CHECK(full.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dirac load sum over all vertices counts the points") {
  Mesh m = make_unit_square_crisscross(4);
  ProblemSpec p = builtin_problem("example1");
  Eigen::VectorXd full = dirac_load_all_vertices(m, p.dirac_points);
  CHECK(full.sum() == doctest::Approx(4.0).epsilon(1e-13));
  // All four points are grid vertices of this mesh: four canonical entries.
  CHECK((full.array() == 1.0).count() == 4);
}

TEST_CASE("dirac points outside the domain are rejected") {
  Mesh m = make_lshape_crisscross(2);
  DofLayout layout = make_dof_layout(m);
  CHECK_THROWS_AS(dirac_load(m, layout, {{0.5, -0.5}}), DomainError);  // removed quadrant
}

TEST_CASE("assembled Darcy solution is elementwise divergence-free") {
  Mesh m = make_unit_square_crisscross(2);
  DofLayout layout = make_dof_layout(m);
  auto quad = quadrature_rule(9);
  ProblemSpec p = builtin_problem("example1");
  Eigen::VectorXd T = Eigen::VectorXd::Constant(layout.n_temperature, 0.3);
  Eigen::VectorXd x = solve_sparse(assemble_darcy(m, layout, T, p, quad));
  Eigen::VectorXd u = x.head(layout.n_velocity);
  double scale = std::max(1e-30, u.cwiseAbs().maxCoeff());
  for (int t = 0; t < m.num_triangles(); ++t) {
    double div = rt0_divergence(m, t, gather_velocity(m, layout, u, t));
    CHECK(std::abs(div) <= 1e-10 * scale * m.edge_length[m.tri_edges[t][0]] / m.tri_area[t] +
                               1e-10 * scale);
  }
}
