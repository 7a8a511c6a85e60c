#include <cmath>

#include <gtest/gtest.h>

#include "exbound/quadrature.hpp"

using namespace exbound;

namespace {

// Integral of l1^a l2^b l3^c over the reference tet: a! b! c! / (a + b + c + 3)!.
double monomial_exact(int a, int b, int c) {
  auto f = [](int n) { return std::tgamma(n + 1.0); };
  return f(a) * f(b) * f(c) / f(a + b + c + 3);
}

double monomial_rule(const QuadratureRule& rule, int a, int b, int c) {
  double s = 0.0;
  for (const QuadraturePoint& p : rule.points()) {
    s += p.weight * std::pow(p.bary[1], a) * std::pow(p.bary[2], b) * std::pow(p.bary[3], c);
  }
  return s;
}

void expect_exact_to_degree(const QuadratureRule& rule, int degree, double tol) {
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b)
      for (int c = 0; a + b + c <= degree; ++c)
        EXPECT_NEAR(monomial_rule(rule, a, b, c), monomial_exact(a, b, c), tol)
            << a << ' ' << b << ' ' << c;
}

}  // namespace

TEST(Quadrature, DefaultRuleIsExactForDegreeFive) {
  const QuadratureRule& rule = QuadratureRule::default_rule();
  EXPECT_GE(rule.degree(), 5);
  expect_exact_to_degree(rule, 5, 1e-15);
}

TEST(Quadrature, DefaultRuleHasPositiveWeightsInsideTet) {
  double total = 0.0;
  for (const QuadraturePoint& p : QuadratureRule::default_rule().points()) {
    EXPECT_GT(p.weight, 0.0);
    double sum = 0.0;
    for (double l : p.bary) {
      EXPECT_GE(l, 0.0);
      sum += l;
    }
    EXPECT_NEAR(sum, 1.0, 1e-15);
    total += p.weight;
  }
  EXPECT_NEAR(total, 1.0 / 6.0, 1e-16);
}

TEST(Quadrature, DefaultRuleIsNotExactBeyondItsDegree) {
  const QuadratureRule& rule = QuadratureRule::default_rule();
  bool any_inexact = false;
  for (int a = 0; a <= 8; ++a) {
    if (std::abs(monomial_rule(rule, a, 0, 8 - a) - monomial_exact(a, 0, 8 - a)) > 1e-12) {
      any_inexact = true;
    }
  }
  EXPECT_TRUE(any_inexact);
}

TEST(Quadrature, CollapsedGaussReachesRequestedDegree) {
  for (int degree : {1, 3, 6, 9}) {
    const QuadratureRule rule = QuadratureRule::collapsed_gauss(degree);
    EXPECT_GE(rule.degree(), degree);
    expect_exact_to_degree(rule, degree, 1e-14);
  }
}

TEST(Quadrature, GaussLegendreUnitIntegratesPolynomials) {
  std::vector<double> x, w;
  gauss_legendre_unit(4, x, w);
  ASSERT_EQ(x.size(), 4u);
  for (int p = 0; p <= 7; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
    EXPECT_NEAR(s, 1.0 / (p + 1), 1e-15);
  }
}
