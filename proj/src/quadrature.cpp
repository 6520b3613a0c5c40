#include "darcyheat/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <string>

#include "darcyheat/errors.hpp"

namespace darcyheat {

namespace {

// Golub-Welsch: nodes and weights of the n-point Gauss rule for the weight
// with three-term recurrence coefficients (a_k, b_k) and total mass mu0.
// Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix,
// weights mu0 times the squared first components of the eigenvectors.
std::pair<std::vector<double>, std::vector<double>> golub_welsch(
    const std::vector<double>& a, const std::vector<double>& b, double mu0) {
  const int n = static_cast<int>(a.size());
  Eigen::VectorXd diag(n), subdiag(n - 1);
  for (int i = 0; i < n; ++i) diag[i] = a[i];
  for (int i = 0; i + 1 < n; ++i) subdiag[i] = std::sqrt(b[i + 1]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  std::vector<double> nodes(n), weights(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()[i];
    double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
  return {nodes, weights};
}

// Gauss-Legendre on [-1,1]: a_k = 0, b_k = k^2 / (4k^2 - 1), mu0 = 2.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_sym(int n) {
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (int k = 1; k < n; ++k) b[k] = k * k / (4.0 * k * k - 1.0);
  return golub_welsch(a, b, 2.0);
}

// Gauss-Jacobi with weight (1 - x) on [-1,1] (alpha = 1, beta = 0):
// a_k = -1 / ((2k+1)(2k+3)), b_k = k(k+1) / (2k+1)^2, mu0 = 2.
std::pair<std::vector<double>, std::vector<double>> gauss_jacobi10_sym(int n) {
  std::vector<double> a(n), b(n, 0.0);
  for (int k = 0; k < n; ++k) a[k] = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  for (int k = 1; k < n; ++k) b[k] = k * (k + 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
  return golub_welsch(a, b, 2.0);
}

// Conical product rule on the reference triangle {x,y >= 0, x + y <= 1}:
//   int_T f = int_0^1 (1-y) int_0^1 f((1-y)u, y) du dy,
// with Gauss-Legendre in u and Gauss-Jacobi(1,0) in y. Exact for total
// degree <= 2n-1. Weights returned normalized to sum 1.
TriangleRule conical_rule(int n) {
  auto [ul, wl] = gauss_legendre_sym(n);
  auto [yj, wj] = gauss_jacobi10_sym(n);
  TriangleRule rule;
  rule.degree = 2 * n - 1;
  for (int j = 0; j < n; ++j) {
    double y = 0.5 * (yj[j] + 1.0);
    double wy = wj[j] / 4.0;
    for (int i = 0; i < n; ++i) {
      double u = 0.5 * (ul[i] + 1.0);
      double wu = wl[i] / 2.0;
      double x = (1.0 - y) * u;
      rule.points.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(2.0 * wy * wu);  // normalize: |T_ref| = 1/2
    }
  }
  return rule;
}

TriangleRule symmetrize(const TriangleRule& rule) {
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  TriangleRule out;
  out.degree = rule.degree;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    for (const auto& perm : perms) {
      out.points.push_back({rule.points[q][perm[0]], rule.points[q][perm[1]],
                            rule.points[q][perm[2]]});
      out.weights.push_back(rule.weights[q] / 6.0);
    }
  return out;
}

}  // namespace

EdgeRule gauss_legendre_01(int n) {
  if (n < 1) throw QuadratureError("edge rule needs at least one point");
  auto [x, w] = gauss_legendre_sym(n);
  EdgeRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w[i];
  }
  return rule;
}

QuadratureRule quadrature_rule(int degree) {
  if (degree < 1 || degree > 20)
    throw QuadratureError("unsupported quadrature degree " + std::to_string(degree) +
                          "; supported degrees are 1..20");

  TriangleRule tri;
  if (degree == 1) {
    tri.degree = 1;
    tri.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
    tri.weights = {1.0};
  } else if (degree == 2) {
    tri.degree = 2;
    tri.points = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                  {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                  {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};
    tri.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  } else {
    int n = (degree + 2) / 2;  // ceil((degree + 1) / 2)
    tri = symmetrize(conical_rule(n));
    tri.degree = 2 * n - 1;
  }

  QuadratureRule rule;
  rule.triangle = std::move(tri);
  rule.edge = gauss_legendre_01(std::max(1, (degree + 2) / 2));
  return rule;
}

}  // namespace darcyheat
