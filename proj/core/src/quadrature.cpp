#include "exbound/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "exbound/errors.hpp"

namespace exbound {

QuadratureRule::QuadratureRule(std::vector<QuadraturePoint> points, int degree)
    : points_(std::move(points)), degree_(degree) {}

namespace {

void add_orbit_4(std::vector<QuadraturePoint>& pts, double a, double w) {
  const double b = 1.0 - 3.0 * a;
  for (int k = 0; k < 4; ++k) {
    Barycentric l{a, a, a, a};
    l[k] = b;
    pts.push_back({l, w});
  }
}

void add_orbit_6(std::vector<QuadraturePoint>& pts, double a, double w) {
  const double b = 0.5 - a;
  static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (const auto& p : pairs) {
    Barycentric l{b, b, b, b};
    l[p[0]] = a;
    l[p[1]] = a;
    pts.push_back({l, w});
  }
}

}  // namespace

QuadratureRule QuadratureRule::symmetric_degree5() {
  std::vector<QuadraturePoint> pts;
  pts.reserve(14);
  add_orbit_4(pts, 0.0927352503108912264023345, 0.01224884051939365826296053);
  add_orbit_4(pts, 0.3108859192633006097973457, 0.01878132095300264179944166);
  add_orbit_6(pts, 0.0455037041256496494918805, 0.007091003462846911094492419);
  return QuadratureRule(std::move(pts), 5);
}

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ParameterError("Gauss-Legendre rule needs at least one point");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule QuadratureRule::collapsed_gauss(int degree) {
  if (degree < 0) throw ParameterError("quadrature degree must be non-negative");
  // The Duffy map adds degree 2 in u and 1 in v through its Jacobian.
  const int n = (degree + 3) / 2 + 1;
  std::vector<double> t, w;
  gauss_legendre_unit(n, t, w);
  std::vector<QuadraturePoint> pts;
  pts.reserve(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double u = t[i], v = t[j], s = t[k];
        const double x = u;
        const double y = v * (1.0 - u);
        const double z = s * (1.0 - u) * (1.0 - v);
        const double jac = (1.0 - u) * (1.0 - u) * (1.0 - v);
        pts.push_back({{1.0 - x - y - z, x, y, z}, w[i] * w[j] * w[k] * jac});
      }
    }
  }
  return QuadratureRule(std::move(pts), degree);
}

const QuadratureRule& QuadratureRule::default_rule() {
  static const QuadratureRule rule = symmetric_degree5();
  return rule;
}

}  // namespace exbound
