#include <cmath>
#include <memory>
#include <numeric>

#include <gtest/gtest.h>

#include "exbound/assembly.hpp"
#include "exbound/errors.hpp"

using namespace exbound;

namespace {

struct Fixture {
  std::shared_ptr<const TetMesh> mesh =
      std::make_shared<const TetMesh>(generate_ball_octant_shell(3.0, 2, 2));
  std::vector<Mat3> identity = std::vector<Mat3>(mesh->num_tets(), Mat3::Identity());
};

}  // namespace

TEST(Assembly, StiffnessEnergyOfLinearFunction) {
  Fixture f;
  for (int degree : {1, 2}) {
    const FeSpace space(f.mesh, degree, 1);
    const CsrMatrix k = assemble_stiffness(space, f.identity);
    const Eigen::VectorXd u = interpolate(space, [](const Vec3& x) { return x.x() - 2.0 * x.y(); });
    EXPECT_NEAR(k.quadratic_form(u), 5.0 * f.mesh->total_volume(), 1e-11);
    EXPECT_LT(k.symmetry_error(), 1e-14);
    // Constants lie in the kernel.
    EXPECT_LT((k * Eigen::VectorXd::Ones(space.num_dofs())).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

TEST(Assembly, StiffnessScalesWithCoefficient) {
  Fixture f;
  const FeSpace space(f.mesh, 1, 1);
  std::vector<Mat3> a(f.mesh->num_tets(), Vec3(2.0, 3.0, 4.0).asDiagonal().toDenseMatrix());
  const CsrMatrix k = assemble_stiffness(space, a);
  const Eigen::VectorXd u = interpolate(space, [](const Vec3& x) { return x.z(); });
  EXPECT_NEAR(k.quadratic_form(u), 4.0 * f.mesh->total_volume(), 1e-11);
}

TEST(Assembly, VectorMassOfConstantField) {
  Fixture f;
  const FeSpace space(f.mesh, 2, 3);
  std::vector<Mat3> a(f.mesh->num_tets(), 2.0 * Mat3::Identity());
  const CsrMatrix m = assemble_vector_mass(space, a);
  const Eigen::VectorXd v = interpolate(space, [](const Vec3&) { return Vec3(1.0, 2.0, 2.0); });
  EXPECT_NEAR(m.quadratic_form(v), 0.5 * 9.0 * f.mesh->total_volume(), 1e-11);
}

TEST(Assembly, WeightedDivFormVanishesOnConstants) {
  Fixture f;
  const FeSpace space(f.mesh, 2, 3);
  const CsrMatrix d = assemble_weighted_div_form(space);
  const Eigen::VectorXd v = interpolate(space, [](const Vec3&) { return Vec3(1.0, -1.0, 0.5); });
  EXPECT_LT(std::abs(d.quadratic_form(v)), 1e-12);
}

TEST(Assembly, WeightedDivFormOfIdentityField) {
  // div x = 3, so the form is 9 * int (1 + r^2); over the mesh integrate the
  // weight with the generic integrator.
  Fixture f;
  const FeSpace space(f.mesh, 1, 3);
  const CsrMatrix d = assemble_weighted_div_form(space);
  const Eigen::VectorXd v = interpolate(space, [](const Vec3& x) { return x; });
  const double expected = 9.0 * integrate(*f.mesh, [](std::size_t, const Barycentric&, const Vec3& x) {
    return 1.0 + x.squaredNorm();
  });
  EXPECT_NEAR(d.quadratic_form(v), expected, 1e-10 * expected);
}

TEST(Assembly, GradientLoadMatchesStiffness) {
  Fixture f;
  const FeSpace space(f.mesh, 2, 1);
  const CsrMatrix k = assemble_stiffness(space, f.identity);
  auto u_fn = [](const Vec3& x) { return x.x() * x.y() + x.z(); };
  const Eigen::VectorXd u = interpolate(space, u_fn);
  const Eigen::VectorXd load = assemble_gradient_load(space, gradient_field(space, u));
  EXPECT_LT((load - k * u).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Assembly, IntegrateVolumeAndAdditivity) {
  Fixture f;
  auto one = [](std::size_t, const Barycentric&, const Vec3&) { return 1.0; };
  EXPECT_NEAR(integrate(*f.mesh, one), f.mesh->total_volume(), 1e-12);
  const std::vector<double> per = integrate_per_tet(*f.mesh, one);
  EXPECT_NEAR(std::accumulate(per.begin(), per.end(), 0.0), f.mesh->total_volume(), 1e-12);
  for (std::size_t t = 0; t < per.size(); ++t) EXPECT_NEAR(per[t], f.mesh->signed_volume(t), 1e-14);
}

TEST(Assembly, CheckedInversesRejectsBadCoefficients) {
  Mat3 nonsym = Mat3::Identity();
  nonsym(0, 1) = 0.5;
  EXPECT_THROW(checked_inverses(std::vector<Mat3>{nonsym}), CoefficientError);
  EXPECT_THROW(checked_inverses(std::vector<Mat3>{-Mat3::Identity()}), CoefficientError);
  const auto inv = checked_inverses(std::vector<Mat3>{4.0 * Mat3::Identity()});
  EXPECT_LT((inv[0] - 0.25 * Mat3::Identity()).norm(), 1e-15);
}

TEST(Assembly, SourceLoadSumsToIntegral) {
  Fixture f;
  const FeSpace space(f.mesh, 2, 1);
  auto src = [](std::size_t, const Barycentric&, const Vec3& x) { return x.x(); };
  const Eigen::VectorXd load = assemble_source_load(space, src);
  EXPECT_NEAR(load.sum(), integrate(*f.mesh, src), 1e-12);
}
