#include "exbound/problem.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "exbound/errors.hpp"

namespace exbound {

Constants constants(int dimension, double alpha) {
  if (dimension < 3) {
    throw DomainError("the Poincare estimate needs dimension N >= 3, got " +
                      std::to_string(dimension));
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be positive");
  Constants c;
  c.c_n = 2.0 / (dimension - 2);
  c.c_n_alpha = alpha * c.c_n;
  return c;
}

double alpha_from_coefficient(std::span<const Mat3> coefficient) {
  if (coefficient.empty()) throw UsageError("empty coefficient field");
  checked_inverses(coefficient);
  double lambda_min = std::numeric_limits<double>::infinity();
  for (const Mat3& a : coefficient) {
    Eigen::SelfAdjointEigenSolver<Mat3> eig(a, Eigen::EigenvaluesOnly);
    lambda_min = std::min(lambda_min, eig.eigenvalues().minCoeff());
  }
  return 1.0 / std::sqrt(lambda_min);
}

ProblemSpec ProblemSpec::laplace(const TetMesh& mesh, double radius, Obstacle obstacle,
                                 double boundary_value) {
  ProblemSpec p;
  p.coefficient.assign(mesh.num_tets(), Mat3::Identity());
  p.boundary_value = boundary_value;
  p.radius = radius;
  p.obstacle = obstacle;
  return p;
}

double weighted_norm(const FeSpace& space, const Eigen::VectorXd& coeffs, int s) {
  if (s < -1 || s > 1) throw ParameterError("weight exponent must be -1, 0 or 1");
  if (static_cast<std::size_t>(coeffs.size()) != space.num_dofs()) {
    throw UsageError("coefficient vector does not match the space");
  }
  const double sq = integrate(space.mesh(), [&](std::size_t t, const Barycentric& b,
                                                const Vec3& x) {
    const double u2 = space.is_scalar() ? std::pow(evaluate_value(space, coeffs, t, b), 2)
                                        : evaluate_vector(space, coeffs, t, b).squaredNorm();
    return u2 * std::pow(1.0 + x.squaredNorm(), s);
  });
  return std::sqrt(sq);
}

double energy_norm(const FeSpace& space, const Eigen::VectorXd& coeffs,
                   std::span<const Mat3> coefficient) {
  if (static_cast<std::size_t>(coeffs.size()) != space.num_dofs()) {
    throw UsageError("coefficient vector does not match the space");
  }
  if (coefficient.size() != space.num_tets()) {
    throw UsageError("coefficient field does not match the mesh");
  }
  double sq = 0.0;
  if (space.is_scalar()) {
    sq = integrate(space.mesh(), [&](std::size_t t, const Barycentric& b, const Vec3&) {
      const Vec3 g = evaluate_gradient(space, coeffs, t, b);
      return g.dot(coefficient[t] * g);
    });
  } else {
    const std::vector<Mat3> inv = checked_inverses(coefficient);
    sq = integrate(space.mesh(), [&](std::size_t t, const Barycentric& b, const Vec3&) {
      const Vec3 w = evaluate_vector(space, coeffs, t, b);
      return w.dot(inv[t] * w);
    });
  }
  return std::sqrt(sq);
}

PointSolution exact_solution_ball(const Vec3& x) {
  const double r = x.norm();
  if (!(r >= 1.0 - 1e-12)) {
    throw DomainError("exact solution is defined for |x| >= 1, got |x| = " + std::to_string(r));
  }
  return {1.0 / r, -x / (r * r * r)};
}

std::vector<std::size_t> boundary_nodes(const FeSpace& space, BoundaryTag tag) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < space.num_nodes(); ++n) {
    if (space.node_on(n, tag)) out.push_back(n);
  }
  return out;
}

PoincareSides poincare_check(const FeSpace& space, const Eigen::VectorXd& coeffs,
                             std::span<const Mat3> coefficient, double alpha, int dimension) {
  if (!space.is_scalar()) throw UsageError("Poincare check needs a scalar function");
  const double scale = coeffs.size() > 0 ? coeffs.cwiseAbs().maxCoeff() : 0.0;
  for (BoundaryTag tag : {BoundaryTag::Gamma, BoundaryTag::SphereR}) {
    for (std::size_t n : boundary_nodes(space, tag)) {
      if (std::abs(coeffs[n]) > 1e-14 * scale) {
        throw UsageError("Poincare check needs zero trace on Gamma and SphereR");
      }
    }
  }
  const Constants c = constants(dimension, alpha);
  return {weighted_norm(space, coeffs, -1), c.c_n_alpha * energy_norm(space, coeffs, coefficient)};
}

}  // namespace exbound
