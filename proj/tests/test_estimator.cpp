#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "darcyheat/adapt.hpp"
#include "darcyheat/errors.hpp"
#include "darcyheat/estimator.hpp"
#include "support/oracles.hpp"

using namespace darcyheat;

namespace {

CoupledState random_state(const DofLayout& layout, unsigned seed, double amplitude = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-amplitude, amplitude);
  CoupledState state;
  state.u.resize(layout.n_velocity);
  state.p.resize(layout.n_pressure);
  state.T.resize(layout.n_temperature);
  for (int k = 0; k < state.u.size(); ++k) state.u[k] = unif(rng);
  for (int k = 0; k < state.p.size(); ++k) state.p[k] = unif(rng);
  for (int k = 0; k < state.T.size(); ++k) state.T[k] = unif(rng);
  return state;
}

CoupledState zero_state(const DofLayout& layout) {
  CoupledState state;
  state.u = Eigen::VectorXd::Zero(layout.n_velocity);
  state.p = Eigen::VectorXd::Zero(layout.n_pressure);
  state.T = Eigen::VectorXd::Zero(layout.n_temperature);
  return state;
}

void expect_match(const std::vector<double>& got, const std::vector<double>& expected,
                  double rel_tol) {
  REQUIRE(got.size() == expected.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    double scale = std::max({std::abs(got[k]), std::abs(expected[k]), 1e-14});
    CHECK(std::abs(got[k] - expected[k]) <= rel_tol * scale);
  }
}

}  // namespace

TEST_CASE("closed-form |linear|^p integrals match adaptive quadrature") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  std::uniform_real_distribution<double> punif(1.05, 1.95);
  for (int trial = 0; trial < 300; ++trial) {
    double p = punif(rng);
    double j1 = unif(rng), j2 = unif(rng);
    if (trial % 7 == 0) j2 = j1 + 1e-9 * unif(rng);  // nearly constant
    if (trial % 11 == 0) j1 = 0.0;                   // endpoint root
    double got = detail::mean_abs_pow_linear_segment(j1, j2, p);
    double expected = oracle::adaptive_simpson(
        [&](double s) { return std::pow(std::abs(j1 + s * (j2 - j1)), p); }, 1e-15);
    CHECK(got == doctest::Approx(expected).epsilon(1e-11));

    double a = unif(rng), b = unif(rng), c = unif(rng);
    if (trial % 5 == 0) b = a;  // coincident vertex values
    double got_tri = detail::mean_abs_pow_linear_tri(a, b, c, p);
    // Reference: the pushforward density integral evaluated by adaptive
    // Simpson over the sorted value range.
    double lo = std::min({a, b, c}), hi = std::max({a, b, c});
    double mid = a + b + c - lo - hi;
    double expected_tri;
    if (hi - lo < 1e-14 * std::max(std::abs(lo), std::abs(hi)))
      expected_tri = std::pow(std::abs(mid), p);
    else {
      auto density = [&](double t) {
        if (t <= mid)
          return mid > lo ? 2.0 * (t - lo) / ((mid - lo) * (hi - lo)) : 0.0;
        return hi > mid ? 2.0 * (hi - t) / ((hi - mid) * (hi - lo)) : 0.0;
      };
      expected_tri = oracle::adaptive_simpson(
                         [&](double s) {
                           double t = lo + s * (hi - lo);
                           return std::pow(std::abs(t), p) * density(t);
                         },
                         1e-15) *
                     (hi - lo);
    }
    CHECK(got_tri == doctest::Approx(expected_tri).epsilon(1e-9));
  }
}

TEST_CASE("p outside (1,2) is rejected") {
  Mesh m = make_unit_square_crisscross(1);
  DofLayout layout = make_dof_layout(m);
  ProblemSpec problem = builtin_problem("example1");
  auto quad = quadrature_rule(5);
  CoupledState state = zero_state(layout);
  CHECK_THROWS_AS(heat_indicator(m, layout, state, problem, 1.0, quad), ConfigError);
  CHECK_THROWS_AS(heat_indicator(m, layout, state, problem, 2.0, quad), ConfigError);
  CHECK_THROWS_AS(heat_indicator(m, layout, state, problem, 0.5, quad), ConfigError);
}

TEST_CASE("zero state: only the Dirac geometric term survives") {
  Mesh m = build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}});
  DofLayout layout = make_dof_layout(m);
  ProblemSpec problem = builtin_problem("example1");
  problem.force = [](Vec2) { return Vec2{0.0, 0.0}; };
  auto quad = quadrature_rule(9);
  double p = 1.6;

  SUBCASE("interior non-vertex point") {
    problem.dirac_points = {{0.6, 0.2}};  // inside triangle 0
    CoupledState state = zero_state(layout);
    auto heat = heat_indicator(m, layout, state, problem, p, quad);
    double h = m.tri_diameter[0];
    CHECK(heat[0] == doctest::Approx(std::pow(h, (2.0 - p) / p)).epsilon(1e-13));
    CHECK(heat[1] == 0.0);
  }

  SUBCASE("vertex point contributes nothing") {
    problem.dirac_points = {{1.0, 1.0}};
    CoupledState state = zero_state(layout);
    auto heat = heat_indicator(m, layout, state, problem, p, quad);
    CHECK(heat[0] == 0.0);
    CHECK(heat[1] == 0.0);
  }

  SUBCASE("point on the shared edge charges both elements") {
    problem.dirac_points = {{0.5, 0.5}};
    CoupledState state = zero_state(layout);
    auto heat = heat_indicator(m, layout, state, problem, p, quad);
    for (int t = 0; t < 2; ++t)
      CHECK(heat[t] == doctest::Approx(std::pow(m.tri_diameter[t], (2.0 - p) / p)));
  }
}

TEST_CASE("affine temperature away from sources has zero heat indicator") {
  // T_h = x1 on interior vertices, u = 0: on elements whose neighborhood
  // carries the exact affine field, the residual and the jumps vanish.
  Mesh m = make_unit_square_crisscross(3);
  DofLayout layout = make_dof_layout(m);
  ProblemSpec problem = builtin_problem("example1");
  problem.dirac_points.clear();
  auto quad = quadrature_rule(9);
  CoupledState state = zero_state(layout);
  for (int dof = 0; dof < layout.n_temperature; ++dof)
    state.T[dof] = m.vertices[layout.tdof_to_vertex[dof]].x;

  auto heat = heat_indicator(m, layout, state, problem, 1.5, quad);
  int checked = 0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    bool sees_affine_field = true;  // t and its edge neighbors use no boundary vertex
    for (int le = 0; le < 3; ++le) {
      int edge = m.tri_edges[t][le];
      if (m.edge_on_boundary[edge]) sees_affine_field = false;
      for (int other : m.edge_tris[edge])
        if (other >= 0)
          for (int v : m.triangles[other]) sees_affine_field &= !m.vertex_on_boundary[v];
    }
    if (sees_affine_field) {
      CHECK(heat[t] <= 1e-13);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("curl indicator with constant viscosity and curl-free force is pure jumps") {
  Mesh m = make_unit_square_crisscross(2);
  DofLayout layout = make_dof_layout(m);
  ProblemSpec problem = builtin_problem("verification-darcy-gradient");  // nu = 1, curl f = 0
  auto quad = quadrature_rule(9);
  CoupledState state = random_state(layout, 9);
  auto curl = curl_indicator(m, layout, state, problem, quad);
  auto curl_oracle = oracle::curl_indicator(m, layout, state, problem);
  expect_match(curl, curl_oracle, 1e-10);
  for (double v : curl) CHECK(v > 0.0);  // random tangential jumps
}

TEST_CASE("zero state on example2: curl residual equals curl f") {
  Mesh m = make_lshape_crisscross(2);
  DofLayout layout = make_dof_layout(m);
  ProblemSpec problem = builtin_problem("example2");
  auto quad = quadrature_rule(19);
  CoupledState state = zero_state(layout);

  // The analytic curl against central finite differences of f.
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int trial = 0; trial < 50; ++trial) {
    Vec2 x{-unif(rng), unif(rng)};
    const double h = 1e-6;
    double df2dx = (problem.force({x.x + h, x.y}).y - problem.force({x.x - h, x.y}).y) / (2 * h);
    double df1dy = (problem.force({x.x, x.y + h}).x - problem.force({x.x, x.y - h}).x) / (2 * h);
    CHECK(problem.curl_force(x) == doctest::Approx(df2dx - df1dy).epsilon(1e-7));
  }

  // With u_h = 0 and T_h = 0 the element residual reduces to curl f and f's
  // tangential jumps vanish (f is continuous).
  auto curl = curl_indicator(m, layout, state, problem, quad);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    double volume = oracle::integrate_tri(
        [&](Vec2 x) {
          double c = problem.curl_force(x);
          return c * c;
        },
        m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]);
    double h = m.tri_diameter[t];
    CHECK(curl[t] == doctest::Approx(h * std::sqrt(volume)).epsilon(1e-10));
  }
}

TEST_CASE("pressure indicator trivial cases") {
  Mesh m = build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}});
  DofLayout layout = make_dof_layout(m);
  ProblemSpec problem = builtin_problem("verification-darcy-gradient");
  auto quad = quadrature_rule(9);

  SUBCASE("zero state and zero force") {
    problem.force = [](Vec2) { return Vec2{0.0, 0.0}; };
    CoupledState state = zero_state(layout);
    auto pressure = pressure_indicator(m, layout, state, problem, quad);
    CHECK(pressure[0] == 0.0);
    CHECK(pressure[1] == 0.0);
  }

  SUBCASE("constant pressure field has no jumps") {
    problem.force = [](Vec2) { return Vec2{0.0, 0.0}; };
    CoupledState state = zero_state(layout);
    state.p = Eigen::VectorXd::Constant(2, 3.7);
    auto pressure = pressure_indicator(m, layout, state, problem, quad);
    CHECK(pressure[0] == 0.0);
    CHECK(pressure[1] == 0.0);
  }

  SUBCASE("gradient force with the projected pressure") {
    // u = 0, p = zero-mean projection of x1: the element residual is (1,0)
    // and the edge jump is the difference of the centroid abscissas.
    CoupledState state = zero_state(layout);
    double mean = 0.5;
    state.p[0] = m.centroid(0).x - mean;
    state.p[1] = m.centroid(1).x - mean;
    auto pressure = pressure_indicator(m, layout, state, problem, quad);
    double dp = state.p[0] - state.p[1];
    double len = std::sqrt(2.0);
    for (int t = 0; t < 2; ++t) {
      double h = m.tri_diameter[t];
      double expected = std::sqrt(h * h * m.tri_area[t] + h * dp * dp * len);
      CHECK(pressure[t] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("aggregate combines families per definition") {
  SUBCASE("single element") {
    IndicatorField f = aggregate({2.0}, {3.0}, {4.0}, 1.5);
    CHECK(f.total[0] == doctest::Approx(9.0));
    CHECK(f.total_total == doctest::Approx(9.0));
    CHECK(f.heat_total == doctest::Approx(2.0));
  }
  SUBCASE("two equal heat entries, p = 1.5") {
    IndicatorField f = aggregate({1.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}, 1.5);
    CHECK(f.heat_total == doctest::Approx(std::pow(2.0, 1.0 / 1.5)).epsilon(1e-14));
  }
  SUBCASE("random field vs naive sums") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unif(0.0, 2.0);
    double p = 1.3;
    std::vector<double> h(40), c(40), s(40);
    for (int k = 0; k < 40; ++k) {
      h[k] = unif(rng);
      c[k] = unif(rng);
      s[k] = unif(rng);
    }
    IndicatorField f = aggregate(h, c, s, p);
    double hp = 0.0, c2 = 0.0, s2 = 0.0;
    for (int k = 0; k < 40; ++k) {
      hp += std::pow(h[k], p);
      c2 += c[k] * c[k];
      s2 += s[k] * s[k];
    }
    CHECK(f.heat_total == doctest::Approx(std::pow(hp, 1.0 / p)).epsilon(1e-14));
    CHECK(f.curl_total == doctest::Approx(std::sqrt(c2)).epsilon(1e-14));
    CHECK(f.pressure_total == doctest::Approx(std::sqrt(s2)).epsilon(1e-14));
    CHECK(f.total_total ==
          doctest::Approx(f.heat_total + f.curl_total + f.pressure_total).epsilon(1e-14));
  }
}

TEST_CASE("all indicator families match the brute-force oracle on random states") {
  std::vector<Mesh> meshes;
  meshes.push_back(build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}}));
  meshes.push_back(make_unit_square_crisscross(2));
  {
    Mesh m = make_unit_square_crisscross(1);
    m = bisect(m, {0, 2}).mesh;
    m = bisect(m, {1, 3}).mesh;
    meshes.push_back(m);
  }

  ProblemSpec problem = builtin_problem("example1");
  problem.dirac_points = {{0.6, 0.2}, {0.25, 0.25}, {0.5, 0.5}};
  auto quad = quadrature_rule(19);

  unsigned seed = 100;
  for (const Mesh& m : meshes) {
    REQUIRE(m.num_triangles() <= 20);
    DofLayout layout = make_dof_layout(m);
    for (int rep = 0; rep < 2; ++rep) {
      CoupledState state = random_state(layout, ++seed);
      double p = 1.2 + 0.35 * rep;
      auto heat = heat_indicator(m, layout, state, problem, p, quad);
      auto curl = curl_indicator(m, layout, state, problem, quad);
      auto pressure = pressure_indicator(m, layout, state, problem, quad);
      expect_match(heat, oracle::heat_indicator(m, layout, state, problem, p), 1e-10);
      expect_match(curl, oracle::curl_indicator(m, layout, state, problem), 1e-10);
      expect_match(pressure, oracle::pressure_indicator(m, layout, state, problem), 1e-10);
    }
  }
}

TEST_CASE("indicators are invariant under triangle relabeling") {
  Mesh m = make_unit_square_crisscross(2);
  std::vector<std::array<int, 3>> reversed(m.triangles.rbegin(), m.triangles.rend());
  Mesh m2 = build_mesh(m.vertices, reversed);
  DofLayout l1 = make_dof_layout(m);
  DofLayout l2 = make_dof_layout(m2);
  REQUIRE(l1.n_velocity == l2.n_velocity);  // same lexicographic edge order

  ProblemSpec problem = builtin_problem("example1");
  auto quad = quadrature_rule(9);
  CoupledState s1 = random_state(l1, 321);
  CoupledState s2 = s1;
  s2.p = s1.p.reverse().eval();

  double p = 1.7;
  auto h1 = heat_indicator(m, l1, s1, problem, p, quad);
  auto h2 = heat_indicator(m2, l2, s2, problem, p, quad);
  auto c1 = curl_indicator(m, l1, s1, problem, quad);
  auto c2 = curl_indicator(m2, l2, s2, problem, quad);
  auto q1 = pressure_indicator(m, l1, s1, problem, quad);
  auto q2 = pressure_indicator(m2, l2, s2, problem, quad);
  const int nt = m.num_triangles();
  for (int t = 0; t < nt; ++t) {
    CHECK(h1[t] == doctest::Approx(h2[nt - 1 - t]).epsilon(1e-12));
    CHECK(c1[t] == doctest::Approx(c2[nt - 1 - t]).epsilon(1e-12));
    CHECK(q1[t] == doctest::Approx(q2[nt - 1 - t]).epsilon(1e-12));
  }
}

TEST_CASE("scaling consistency: zero data reduces to the pure Dirac term") {
  Mesh m = make_unit_square_crisscross(3);  // the Dirac points are not vertices here
  DofLayout layout = make_dof_layout(m);
  ProblemSpec problem = builtin_problem("example1");
  problem.force = [](Vec2) { return Vec2{0.0, 0.0}; };
  problem.curl_force = [](Vec2) { return 0.0; };
  auto quad = quadrature_rule(9);
  CoupledState state = zero_state(layout);
  double p = 1.4;
  IndicatorField field = compute_indicators(m, layout, state, problem, p, quad);
  CHECK(field.curl_total == 0.0);
  CHECK(field.pressure_total == 0.0);

  double expected = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t)
    for (const Vec2& z : problem.dirac_points) {
      auto hits = oracle::containing_elements(m, z);
      bool in_t = false;
      for (int hit : hits) in_t |= hit == t;
      if (in_t && !oracle::is_vertex_of(m, t, z))
        expected += std::pow(m.tri_diameter[t], 2.0 - p);
    }
  CHECK(expected > 0.0);
  CHECK(field.heat_total == doctest::Approx(std::pow(expected, 1.0 / p)).epsilon(1e-13));
  CHECK(field.total_total == doctest::Approx(field.heat_total).epsilon(1e-14));
}

TEST_CASE("bisecting the host element shrinks its Dirac term") {
  Mesh m = build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}});
  ProblemSpec problem = builtin_problem("example1");
  problem.force = [](Vec2) { return Vec2{0.0, 0.0}; };
  problem.dirac_points = {{0.6, 0.2}};
  auto quad = quadrature_rule(9);
  double p = 1.6;

  DofLayout layout = make_dof_layout(m);
  auto before = heat_indicator(m, layout, zero_state(layout), problem, p, quad);
  double host_before = before[locate(m, {0.6, 0.2}).element];

  Mesh refined = bisect(m, {locate(m, {0.6, 0.2}).element}).mesh;
  DofLayout layout2 = make_dof_layout(refined);
  auto after = heat_indicator(refined, layout2, zero_state(layout2), problem, p, quad);
  double host_after = after[locate(refined, {0.6, 0.2}).element];
  CHECK(host_after < host_before);
  CHECK(host_after > 0.0);
}

TEST_CASE("data oscillation vanishes for constant forces") {
  Mesh m = make_unit_square_crisscross(2);
  ProblemSpec problem = builtin_problem("verification-darcy-gradient");
  auto osc = data_oscillation(m, problem, quadrature_rule(9));
  for (double v : osc) CHECK(v <= 1e-13);
  ProblemSpec varying = builtin_problem("example1");
  auto osc2 = data_oscillation(m, varying, quadrature_rule(9));
  double sum = 0.0;
  for (double v : osc2) sum += v;
  CHECK(sum > 0.0);
}
