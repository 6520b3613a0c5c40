#pragma once

#include <array>
#include <vector>

namespace darcyheat {

// Quadrature on the reference triangle in barycentric coordinates. Weights
// sum to 1; integrals scale by |K| at use. All rules have positive weights,
// interior points, and full S3 symmetry.
struct TriangleRule {
  int degree = 0;  // polynomial exactness
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

// Gauss rule on [0,1]; weights sum to 1, exact for degree <= 2n-1.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
};

struct QuadratureRule {
  TriangleRule triangle;
  EdgeRule edge;
};

// Rule with exactness at least `degree`, degree in [1, 20].
QuadratureRule quadrature_rule(int degree);

EdgeRule gauss_legendre_01(int n);

}  // namespace darcyheat
