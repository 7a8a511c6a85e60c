#pragma once

#include <array>
#include <vector>

namespace exbound {

using Barycentric = std::array<double, 4>;

struct QuadraturePoint {
  Barycentric bary;
  double weight;  // on the reference tet, weights sum to 1/6
};

/// Positive-weight quadrature rule on the reference tetrahedron.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<QuadraturePoint> points, int degree);

  // Symmetric 14-point rule, exact for degree 5.
  static QuadratureRule symmetric_degree5();
  // Collapsed Gauss-Legendre product rule exact for the requested degree.
  static QuadratureRule collapsed_gauss(int degree);
  // Rule used for all forms unless a caller asks otherwise.
  static const QuadratureRule& default_rule();

  const std::vector<QuadraturePoint>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  int degree() const noexcept { return degree_; }

 private:
  std::vector<QuadraturePoint> points_;
  int degree_;
};

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace exbound
