#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "exbound/errors.hpp"
#include "exbound/fe_space.hpp"

using namespace exbound;

namespace {

std::shared_ptr<const TetMesh> small_ball() {
  return std::make_shared<const TetMesh>(generate_ball_octant_shell(5.0, 2, 2));
}

const Barycentric kCenter{0.25, 0.25, 0.25, 0.25};
const Barycentric kOffCenter{0.1, 0.2, 0.3, 0.4};

}  // namespace

TEST(FeSpace, NodeCounts) {
  auto mesh = small_ball();
  const FeSpace p1(mesh, 1, 1);
  const FeSpace p2(mesh, 2, 1);
  const FeSpace v2(mesh, 2, 3);
  EXPECT_EQ(p1.num_nodes(), mesh->num_vertices());
  EXPECT_EQ(p2.num_nodes(), mesh->num_vertices() + p2.num_edges());
  EXPECT_EQ(v2.num_dofs(), 3 * p2.num_nodes());
  // Euler characteristic of a ball-like tetrahedralization: V - E + F - T = 1.
  std::size_t faces = (4 * mesh->num_tets() + mesh->boundary_faces().size()) / 2;
  EXPECT_EQ(static_cast<long>(mesh->num_vertices()) - static_cast<long>(p2.num_edges()) +
                static_cast<long>(faces) - static_cast<long>(mesh->num_tets()),
            1);
}

TEST(FeSpace, ShapeFunctionsPartitionUnity) {
  auto mesh = small_ball();
  for (int degree : {1, 2}) {
    const FeSpace space(mesh, degree, 1);
    std::vector<double> n(space.nodes_per_tet());
    space.shape_values(kOffCenter, n);
    double sum = 0.0;
    for (double v : n) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-14);
  }
}

TEST(FeSpace, QuadraticIsInterpolatedExactlyByP2) {
  auto mesh = small_ball();
  const FeSpace space(mesh, 2, 1);
  auto f = [](const Vec3& x) { return 1.0 + x.x() - 2.0 * x.y() * x.z() + 0.5 * x.squaredNorm(); };
  auto grad = [](const Vec3& x) {
    return Vec3(1.0 + x.x(), -2.0 * x.z() + x.y(), -2.0 * x.y() + x.z());
  };
  const Eigen::VectorXd u = interpolate(space, f);
  for (std::size_t t = 0; t < space.num_tets(); t += 5) {
    const Vec3 x = space.point(t, kOffCenter);
    EXPECT_NEAR(evaluate_value(space, u, t, kOffCenter), f(x), 1e-12);
    EXPECT_LT((evaluate_gradient(space, u, t, kOffCenter) - grad(x)).norm(), 1e-11);
  }
}

TEST(FeSpace, LinearIsInterpolatedExactlyByP1) {
  auto mesh = small_ball();
  const FeSpace space(mesh, 1, 1);
  const Eigen::VectorXd u = interpolate(space, [](const Vec3& x) { return 2.0 * x.x() - x.z() + 3.0; });
  for (std::size_t t = 0; t < space.num_tets(); ++t) {
    EXPECT_LT((evaluate_gradient(space, u, t, kCenter) - Vec3(2.0, 0.0, -1.0)).norm(), 1e-12);
  }
}

TEST(FeSpace, VectorDivergence) {
  auto mesh = small_ball();
  const FeSpace space(mesh, 2, 3);
  const Eigen::VectorXd v = interpolate(space, [](const Vec3& x) -> Vec3 {
    return Vec3(x.x() * x.y(), x.y() * x.y(), 3.0 * x.z());
  });
  for (std::size_t t = 0; t < space.num_tets(); t += 3) {
    const Vec3 x = space.point(t, kOffCenter);
    EXPECT_NEAR(evaluate_divergence(space, v, t, kOffCenter), 3.0 * x.y() + 3.0, 1e-11);
    EXPECT_LT((evaluate_vector(space, v, t, kOffCenter) -
               Vec3(x.x() * x.y(), x.y() * x.y(), 3.0 * x.z())).norm(), 1e-11);
  }
}

TEST(FeSpace, BoundaryNodeTags) {
  auto mesh = small_ball();
  const FeSpace space(mesh, 2, 1);
  for (std::size_t n = 0; n < space.num_nodes(); ++n) {
    const Vec3& x = space.node_coordinate(n);
    // Edge-midpoint nodes sit on the flat facets, inside the sphere.
    if (space.node_on(n, BoundaryTag::SphereR)) {
      if (n < mesh->num_vertices()) {
        EXPECT_NEAR(x.norm(), 5.0, 1e-12);
      } else {
        EXPECT_LE(x.norm(), 5.0);
        EXPECT_GT(x.norm(), 4.0);
      }
    }
    if (space.node_on(n, BoundaryTag::SymX)) EXPECT_NEAR(x.x(), 0.0, 1e-14);
  }
}

TEST(FeSpace, Errors) {
  auto mesh = small_ball();
  EXPECT_THROW(FeSpace(mesh, 3, 1), ParameterError);
  EXPECT_THROW(FeSpace(mesh, 1, 2), ParameterError);
  EXPECT_THROW(FeSpace(nullptr, 1, 1), UsageError);
  const FeSpace scalar(mesh, 1, 1);
  EXPECT_THROW(interpolate(scalar, [](const Vec3&) { return Vec3::Zero().eval(); }), UsageError);
  EXPECT_THROW(interpolate(scalar, [](const Vec3&) { return std::nan(""); }), DataError);
}
