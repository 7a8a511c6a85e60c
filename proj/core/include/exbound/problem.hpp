#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "exbound/assembly.hpp"
#include "exbound/fe_space.hpp"
#include "exbound/mesh.hpp"

namespace exbound {

enum class Obstacle { Ball, Cube };

struct Constants {
  double c_n = 0.0;        // 2 / (N - 2)
  double c_n_alpha = 0.0;  // alpha * c_n
};

// Poincare constants of the weighted estimate |u|_{-1} <= c_{N,alpha} |grad u|_A.
// Throws DomainError for N < 3 and ParameterError for alpha <= 0.
Constants constants(int dimension, double alpha);

// (min over tets of the smallest eigenvalue of A)^(-1/2). Throws
// CoefficientError for a non-SPD entry.
double alpha_from_coefficient(std::span<const Mat3> coefficient);

/// Dirichlet problem -div A grad u = f outside the obstacle, u = u0 on its
/// surface, posed on one octant of the truncated domain.
///
/// The coefficient is constant per tet and the identity is assumed beyond the
/// truncation sphere, where the source vanishes. Integrals over the mesh are
/// octant integrals; `multiplicity` converts them to full-domain values.
struct ProblemSpec {
  int dimension = 3;
  std::vector<Mat3> coefficient;
  PointScalarField source;  // empty: f = 0
  double boundary_value = 1.0;
  double radius = 0.0;
  Obstacle obstacle = Obstacle::Ball;
  double multiplicity = 8.0;

  // Laplace problem (A = identity, f = 0) on the given mesh.
  static ProblemSpec laplace(const TetMesh& mesh, double radius, Obstacle obstacle,
                             double boundary_value = 1.0);

  bool has_source() const { return static_cast<bool>(source); }
  double source_at(std::size_t t, const Barycentric& b, const Vec3& x) const {
    return source ? source(t, b, x) : 0.0;
  }
  double alpha() const { return alpha_from_coefficient(coefficient); }
  Constants poincare_constants() const { return constants(dimension, alpha()); }
};

// (sum_T int_T (1 + r^2)^s |u|^2)^(1/2) for s in {-1, 0, 1}; octant value.
double weighted_norm(const FeSpace& space, const Eigen::VectorXd& coeffs, int s);

// Scalar space: |grad u|_A. Vector space: |A^{-1} w|_A = |A^{-1/2} w|. Octant value.
double energy_norm(const FeSpace& space, const Eigen::VectorXd& coeffs,
                   std::span<const Mat3> coefficient);

struct PointSolution {
  double value;
  Vec3 gradient;
};

// u = 1/|x| and its gradient. Throws DomainError for |x| < 1.
PointSolution exact_solution_ball(const Vec3& x);

struct PoincareSides {
  double lhs;  // |u|_{-1}
  double rhs;  // c_{N,alpha} |grad u|_A
};

// Both sides of the Poincare estimate for a scalar u vanishing on the Gamma
// and SphereR nodes (UsageError otherwise).
PoincareSides poincare_check(const FeSpace& space, const Eigen::VectorXd& coeffs,
                             std::span<const Mat3> coefficient, double alpha,
                             int dimension = 3);

// Dofs of a scalar space lying on any boundary face with the given tag.
std::vector<std::size_t> boundary_nodes(const FeSpace& space, BoundaryTag tag);

}  // namespace exbound
