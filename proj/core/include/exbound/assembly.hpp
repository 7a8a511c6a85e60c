#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "exbound/fe_space.hpp"
#include "exbound/quadrature.hpp"
#include "exbound/sparse.hpp"

namespace exbound {

using Mat3 = Eigen::Matrix3d;

// Per-tet data sampled at a quadrature point: tet index, barycentric and
// physical coordinates.
using PointScalarField = std::function<double(std::size_t, const Barycentric&, const Vec3&)>;
using PointVectorField = std::function<Vec3(std::size_t, const Barycentric&, const Vec3&)>;

// Zero matrix whose pattern couples every pair of dofs sharing a tet.
CsrMatrix make_pattern(const FeSpace& space);

// Throws CoefficientError unless every matrix is symmetric positive definite.
// Returns the inverses.
std::vector<Mat3> checked_inverses(std::span<const Mat3> coefficient);

// sum_T int_T A grad phi_j . grad phi_i, scalar space.
CsrMatrix assemble_stiffness(const FeSpace& space, std::span<const Mat3> coefficient,
                             const QuadratureRule& rule = QuadratureRule::default_rule());

// sum_T int_T (1 + r^2) div psi_j div psi_i, vector space.
CsrMatrix assemble_weighted_div_form(const FeSpace& space,
                                     const QuadratureRule& rule = QuadratureRule::default_rule());

// sum_T int_T A^{-1} psi_j . psi_i, vector space.
CsrMatrix assemble_vector_mass(const FeSpace& space, std::span<const Mat3> coefficient,
                               const QuadratureRule& rule = QuadratureRule::default_rule());

// int f phi_i, scalar space.
Eigen::VectorXd assemble_source_load(const FeSpace& space, const PointScalarField& f,
                                     const QuadratureRule& rule = QuadratureRule::default_rule());

// int g . grad phi_i, scalar space.
Eigen::VectorXd assemble_gradient_load(const FeSpace& space, const PointVectorField& g,
                                       const QuadratureRule& rule = QuadratureRule::default_rule());

// int g . psi_i, vector space.
Eigen::VectorXd assemble_field_load(const FeSpace& space, const PointVectorField& g,
                                    const QuadratureRule& rule = QuadratureRule::default_rule());

// int (1 + r^2) f div psi_i, vector space.
Eigen::VectorXd assemble_weighted_div_load(
    const FeSpace& space, const PointScalarField& f,
    const QuadratureRule& rule = QuadratureRule::default_rule());

// sum_T int_T h, with h evaluated at the quadrature points of each tet.
double integrate(const TetMesh& mesh, const PointScalarField& h,
                 const QuadratureRule& rule = QuadratureRule::default_rule());

// Per-tet integrals of h.
std::vector<double> integrate_per_tet(const TetMesh& mesh, const PointScalarField& h,
                                      const QuadratureRule& rule = QuadratureRule::default_rule());

// Pointwise views of FE functions, usable as integrands. The returned functions
// hold references; space and coeffs must outlive them.
PointVectorField gradient_field(const FeSpace& space, const Eigen::VectorXd& coeffs);
PointVectorField vector_field(const FeSpace& space, const Eigen::VectorXd& coeffs);
PointScalarField value_field(const FeSpace& space, const Eigen::VectorXd& coeffs);
PointScalarField divergence_field(const FeSpace& space, const Eigen::VectorXd& coeffs);

}  // namespace exbound
