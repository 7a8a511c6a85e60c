#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "exbound/bounds_nonconforming.hpp"
#include "exbound/errors.hpp"

using namespace exbound;

namespace {

struct Case {
  std::shared_ptr<const TetMesh> mesh =
      std::make_shared<const TetMesh>(generate_ball_octant_shell(5.0, 4, 4));
  ProblemSpec problem = ProblemSpec::laplace(*mesh, 5.0, Obstacle::Ball);
  Alg1Result alg1 = alg1_run(std::make_shared<const FeSpace>(mesh, 1, 1), problem);
  double grad_norm = energy_norm(*alg1.approx.space, alg1.approx.coeffs, problem.coefficient);
};

const Case& shared_case() {
  static const Case c;
  return c;
}

FluxApproximation fabricated(const Case& c, double delta) {
  return perturbed_flux(c.alg1.approx, c.problem,
                        fabricate_perturbation(*c.mesh, c.grad_norm, 11), delta);
}

}  // namespace

TEST(Perturbation, ZeroMeanAndNormalized) {
  const Case& c = shared_case();
  const auto w = fabricate_perturbation(*c.mesh, 2.5, 3);
  Vec3 mean = Vec3::Zero();
  double sq = 0.0;
  for (std::size_t t = 0; t < w.size(); ++t) {
    mean += c.mesh->signed_volume(t) * w[t];
    sq += c.mesh->signed_volume(t) * w[t].squaredNorm();
  }
  EXPECT_LT(mean.norm(), 1e-12);
  EXPECT_NEAR(std::sqrt(sq), 2.5, 1e-12);
  EXPECT_EQ(w, fabricate_perturbation(*c.mesh, 2.5, 3));
  EXPECT_NE(w, fabricate_perturbation(*c.mesh, 2.5, 4));
  EXPECT_THROW(fabricate_perturbation(*c.mesh, -1.0, 3), ParameterError);
}

TEST(Perturbation, SizeMismatchIsUsageError) {
  const Case& c = shared_case();
  EXPECT_THROW(perturbed_flux(c.alg1.approx, c.problem, std::vector<Vec3>(3), 0.1), UsageError);
}

TEST(NonConforming, ConformingInputReducesToConformingBounds) {
  const Case& c = shared_case();
  const FluxApproximation flux = fabricated(c, 0.0);
  const NcMajorantResult maj = nc_majorant(c.mesh, flux, c.problem);
  const MajorantResult conf = minimize_majorant(c.alg1.approx, c.problem);
  EXPECT_NEAR(maj.first_inf, conf.value, 1e-10 * conf.value);
  EXPECT_NEAR(maj.second_inf, 0.0, 1e-12 * conf.value);

  const HelmholtzSplit split = helmholtz_split(c.mesh, exact_gradient_ball(c.problem), flux, c.problem);
  const NcMinorantResult mnr = nc_minorant(flux, c.problem, split, maj);
  const MinorantResult conf_min = maximize_minorant(c.alg1.approx, c.problem);
  EXPECT_NEAR(mnr.first_sup, conf_min.value, 1e-10 * conf_min.value);
  EXPECT_NEAR(mnr.second_sup, 0.0, 1e-12 * conf_min.value);
}

TEST(NonConforming, OrderingChain) {
  const Case& c = shared_case();
  for (double delta : {0.01, 0.1}) {
    const FluxApproximation flux = fabricated(c, delta);
    const NcMajorantResult maj = nc_majorant(c.mesh, flux, c.problem);
    const HelmholtzSplit split =
        helmholtz_split(c.mesh, exact_gradient_ball(c.problem), flux, c.problem);
    const NcMinorantResult mnr = nc_minorant(flux, c.problem, split, maj);
    const double oracle = nc_exact_error_ball(*c.mesh, flux, c.problem);
    EXPECT_GE(mnr.second_sup, 0.0);
    EXPECT_LE(mnr.total, oracle);
    EXPECT_LE(oracle, maj.total);
    const double thetas[] = {0.5, 1.0, 2.0};
    for (const AppendixBound& b : appendix_bounds(maj, mnr, thetas).majorants) {
      EXPECT_GE(b.majorant, maj.total);
    }
  }
}

TEST(NonConforming, LargerPerturbationLargerError) {
  const Case& c = shared_case();
  EXPECT_GT(nc_exact_error_ball(*c.mesh, fabricated(c, 0.1), c.problem),
            nc_exact_error_ball(*c.mesh, fabricated(c, 0.01), c.problem));
}

TEST(Helmholtz, PythagorasAndOrthogonality) {
  const Case& c = shared_case();
  const FluxApproximation flux = fabricated(c, 0.1);
  const HelmholtzSplit s = helmholtz_split(c.mesh, exact_gradient_ball(c.problem), flux, c.problem);
  EXPECT_NEAR(s.e_sq, s.grad_sq + s.psi_sq, 1e-8 * s.e_sq);
  EXPECT_LT(s.orthogonality, 1e-8);
}

TEST(Helmholtz, GradientInputIsRecovered) {
  // E = grad phi for an interior-zero phi: take the reference gradient
  // grad phi and a zero flux.
  const Case& c = shared_case();
  auto space = std::make_shared<const FeSpace>(c.mesh, 2, 1);
  Eigen::VectorXd phi = interpolate(*space, [](const Vec3& x) {
    const double r = x.norm();
    return (r - 1.0) * (5.0 - r) * x.x();
  });
  for (std::size_t n = 0; n < space->num_nodes(); ++n) {
    if (space->node_on(n, BoundaryTag::Gamma) || space->node_on(n, BoundaryTag::SphereR)) phi[n] = 0.0;
  }
  FluxApproximation zero;
  zero.field = [](std::size_t, const Barycentric&, const Vec3&) { return Vec3::Zero().eval(); };
  CgOptions cg;
  cg.rel_tol = 1e-13;
  const HelmholtzSplit s = helmholtz_split(c.mesh, gradient_field(*space, phi), zero, c.problem, cg);
  EXPECT_LT((s.phi - phi).lpNorm<Eigen::Infinity>(), 1e-9 * phi.lpNorm<Eigen::Infinity>());
  EXPECT_LT(s.psi_sq, 1e-16 * s.e_sq);
}

TEST(Appendix, ThetaPrefactors) {
  NcMajorantResult maj;
  maj.first_inf = 0.3;
  maj.second_inf = 0.1;
  maj.total = 0.4;
  NcMinorantResult mnr;
  mnr.first_sup = 0.2;
  mnr.total = 0.25;
  const double thetas[] = {1.0, 2.0};
  const AppendixBounds b = appendix_bounds(maj, mnr, thetas);
  EXPECT_DOUBLE_EQ(b.majorants[0].majorant, 5.0 * 0.4);
  EXPECT_DOUBLE_EQ(b.majorants[1].majorant, 3.0 * 0.3 + 6.0 * 0.1);
  EXPECT_DOUBLE_EQ(b.minorant, 0.2);
  const double bad[] = {0.0};
  EXPECT_THROW(appendix_bounds(maj, mnr, bad), ParameterError);
  const double negative[] = {-1.0};
  EXPECT_THROW(appendix_bounds(maj, mnr, negative), ParameterError);
}

TEST(Appendix, MinimumOverThetaDominatesMajorant) {
  // The analytic minimizer theta* = 2 sqrt(a / b) gives (sqrt(a) + 2 sqrt(b))^2.
  NcMajorantResult maj;
  maj.first_inf = 0.3;
  maj.second_inf = 0.02;
  maj.total = 0.32;
  const double theta_star = 2.0 * std::sqrt(0.3 / 0.02);
  const double thetas[] = {theta_star};
  const double value = appendix_bounds(maj, {}, thetas).majorants[0].majorant;
  EXPECT_NEAR(value, std::pow(std::sqrt(0.3) + 2.0 * std::sqrt(0.02), 2), 1e-14);
  EXPECT_GE(value, maj.total);
}

TEST(ExactGradient, RequiresBall) {
  auto cube = std::make_shared<const TetMesh>(generate_cube_complement_octant(10.0, 1, 1));
  EXPECT_THROW(exact_gradient_ball(ProblemSpec::laplace(*cube, 10.0, Obstacle::Cube)), UsageError);
}
