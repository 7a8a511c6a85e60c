#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "exbound/bounds_conforming.hpp"
#include "exbound/errors.hpp"

using namespace exbound;

namespace {

struct BallCase {
  std::shared_ptr<const TetMesh> mesh;
  ProblemSpec problem;
  Alg1Result alg1;

  explicit BallCase(int n = 4) {
    mesh = std::make_shared<const TetMesh>(generate_ball_octant_shell(5.0, n, n));
    problem = ProblemSpec::laplace(*mesh, 5.0, Obstacle::Ball);
    alg1 = alg1_run(std::make_shared<const FeSpace>(mesh, 1, 1), problem);
  }
};

const BallCase& shared_case() {
  static const BallCase c;
  return c;
}

}  // namespace

TEST(MajorantQuadratic, OptimalBetaGivesSquare) {
  const double c = 2.0, a = 0.3, b = 0.7;
  const double beta = c * a / b;
  EXPECT_NEAR(majorant_quadratic(c, beta, a * a, b * b), std::pow(c * a + b, 2), 1e-15);
  // Any other beta is worse.
  EXPECT_GT(majorant_quadratic(c, 2.0 * beta, a * a, b * b), std::pow(c * a + b, 2));
  EXPECT_DOUBLE_EQ(majorant_quadratic(1.0, 1.0, 1.0, 1.0), 4.0);
}

TEST(FluxConstraints, ZeroZetaFixesSphereToZero) {
  auto mesh = std::make_shared<const TetMesh>(generate_ball_octant_shell(5.0, 2, 2));
  const FeSpace fs(mesh, 2, 3);
  const ConstraintSet c = flux_constraints(fs, 0.0);
  for (std::size_t n : boundary_nodes(fs, BoundaryTag::SphereR)) {
    for (int k = 0; k < 3; ++k) EXPECT_EQ(c.value(fs.dof(n, k)), 0.0);
  }
}

TEST(FluxConstraints, ValueOnAxisAndCount) {
  auto mesh = std::make_shared<const TetMesh>(generate_ball_octant_shell(5.0, 2, 2));
  const FeSpace fs(mesh, 2, 3);
  const double zeta = 1.3;
  const ConstraintSet c = flux_constraints(fs, zeta);
  std::size_t expected = 0;
  bool found_axis = false;
  for (std::size_t n = 0; n < fs.num_nodes(); ++n) {
    if (fs.node_on(n, BoundaryTag::SphereR)) {
      expected += 3;
      const Vec3& x = fs.node_coordinate(n);
      if ((x - Vec3(5, 0, 0)).norm() < 1e-12) {
        found_axis = true;
        EXPECT_NEAR(c.value(fs.dof(n, 0)), -zeta / 25.0, 1e-15);
        EXPECT_NEAR(c.value(fs.dof(n, 1)), 0.0, 1e-15);
        EXPECT_NEAR(c.value(fs.dof(n, 2)), 0.0, 1e-15);
      }
      continue;
    }
    for (BoundaryTag t : {BoundaryTag::SymX, BoundaryTag::SymY, BoundaryTag::SymZ}) {
      if (fs.node_on(n, t)) ++expected;
    }
  }
  EXPECT_TRUE(found_axis);
  EXPECT_EQ(c.size(), expected);
}

TEST(Majorant, BracketsExactErrorAndIsMonotone) {
  const BallCase& c = shared_case();
  const BoundReport rep = compute_bounds(c.alg1.approx, c.problem);
  ASSERT_TRUE(rep.oracle.has_value());
  EXPECT_LE(rep.minorant_value(), rep.oracle->total);
  EXPECT_LE(rep.oracle->total, rep.majorant_sq());
  EXPECT_GE(rep.minorant_value(), 0.0);
  const auto& h = rep.majorant.history;
  for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1] + 1e-12 * h[0]);
  const double c_const = c.problem.poincare_constants().c_n_alpha;
  const double sq =
      std::pow(c_const * std::sqrt(rep.majorant.div_sq) + std::sqrt(rep.majorant.flux_sq), 2);
  EXPECT_NEAR(rep.majorant_sq(), sq, 1e-12 * sq);
}

TEST(Majorant, IndicatorIsAdditive) {
  const BallCase& c = shared_case();
  const MajorantResult m = minimize_majorant(c.alg1.approx, c.problem);
  const double sum = std::accumulate(m.indicator.begin(), m.indicator.end(), 0.0);
  EXPECT_NEAR(sum, m.flux_sq, 1e-12 * m.flux_sq);
  for (double v : m.indicator) EXPECT_GE(v, 0.0);
  const auto again = element_indicator(c.alg1.approx, *m.flux_space, m.flux, c.problem);
  ASSERT_EQ(again.size(), m.indicator.size());
  for (std::size_t t = 0; t < again.size(); ++t) EXPECT_NEAR(again[t], m.indicator[t], 1e-15);
}

TEST(Majorant, CgSolverAgreesWithCholesky) {
  const BallCase c(2);
  MajorantConfig cg;
  cg.flux_solver = FluxSolver::Cg;
  cg.cg.rel_tol = 1e-12;
  const MajorantResult a = minimize_majorant(c.alg1.approx, c.problem);
  const MajorantResult b = minimize_majorant(c.alg1.approx, c.problem, cg);
  EXPECT_NEAR(a.value, b.value, 1e-7 * a.value);
}

TEST(Majorant, LiteralDisplayVariant) {
  const BallCase c(2);
  MajorantConfig config;
  config.literal_display = true;
  const MajorantResult m = minimize_majorant(c.alg1.approx, c.problem, config);
  ASSERT_TRUE(m.literal_value.has_value());
  const double cc = c.problem.poincare_constants().c_n_alpha;
  EXPECT_NEAR(*m.literal_value, (1.0 + m.beta) * (cc * cc * m.div_sq + m.flux_sq), 1e-14 * m.value);
}

TEST(Indicator, VanishesForMatchingFlux) {
  // Globally linear u with its exact (constant) gradient as flux.
  auto mesh = std::make_shared<const TetMesh>(generate_ball_octant_shell(5.0, 2, 2));
  const ProblemSpec problem = ProblemSpec::laplace(*mesh, 5.0, Obstacle::Ball);
  TruncatedApproximation a;
  a.space = std::make_shared<const FeSpace>(mesh, 1, 1);
  a.coeffs = interpolate(*a.space, [](const Vec3& x) { return 2.0 * x.y(); });
  a.radius = 5.0;
  const FeSpace fs(mesh, 2, 3);
  const Eigen::VectorXd flux = interpolate(fs, [](const Vec3&) { return Vec3(0.0, 2.0, 0.0); });
  for (double v : element_indicator(a, fs, flux, problem)) EXPECT_NEAR(v, 0.0, 1e-24);
}

TEST(Minorant, ZeroForExactDiscreteSolution) {
  // When u~ is the P2 Galerkin solution for its own traces, the maximizer is 0.
  auto mesh = std::make_shared<const TetMesh>(generate_ball_octant_shell(5.0, 2, 2));
  const ProblemSpec problem = ProblemSpec::laplace(*mesh, 5.0, Obstacle::Ball);
  Alg1Options opt;
  opt.cg.rel_tol = 1e-13;
  const Alg1Result r = alg1_run(std::make_shared<const FeSpace>(mesh, 2, 1), problem, opt);
  const MinorantResult m = maximize_minorant(r.approx, problem, opt.cg);
  EXPECT_NEAR(m.value, 0.0, 1e-10);
}

TEST(ExactError, TailAndGeometry) {
  const BallCase& c = shared_case();
  TruncatedApproximation a = c.alg1.approx;
  a.zeta = 0.0;
  EXPECT_NEAR(exact_error_ball(a, c.problem).tail, 4.0 * std::numbers::pi / 5.0, 1e-14);
  a.zeta = 1.0;
  EXPECT_EQ(exact_error_ball(a, c.problem).tail, 0.0);

  auto cube = std::make_shared<const TetMesh>(generate_cube_complement_octant(10.0, 1, 1));
  const ProblemSpec cp = ProblemSpec::laplace(*cube, 10.0, Obstacle::Cube);
  TruncatedApproximation ca;
  ca.space = std::make_shared<const FeSpace>(cube, 1, 1);
  ca.coeffs = Eigen::VectorXd::Zero(ca.space->num_dofs());
  EXPECT_THROW(exact_error_ball(ca, cp), UsageError);
}

TEST(ExactError, InterpolantConvergesUnderRefinement) {
  double previous = INFINITY;
  for (int n : {2, 4, 8}) {
    auto mesh = std::make_shared<const TetMesh>(generate_ball_octant_shell(5.0, n, n));
    const ProblemSpec problem = ProblemSpec::laplace(*mesh, 5.0, Obstacle::Ball);
    const TruncatedApproximation a = interpolate_truncated(
        std::make_shared<const FeSpace>(mesh, 1, 1), [](const Vec3& x) { return 1.0 / x.norm(); },
        1.0, problem);
    const double e = exact_error_ball(a, problem).total;
    EXPECT_LT(e, previous);
    previous = e;
  }
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * double(i + j);
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n - 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  return cov / std::sqrt(va * vb);
}

}  // namespace

TEST(Indicator, RanksLikeExactErrorOnMediumMesh) {
  const BallCase c(11);
  const BoundReport rep = compute_bounds(c.alg1.approx, c.problem);
  const double rho = spearman(rep.majorant.indicator, rep.oracle->per_tet);
  RecordProperty("spearman", std::to_string(rho));
  EXPECT_GE(rho, 0.8);
}
