#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "exbound/approx.hpp"
#include "exbound/assembly.hpp"
#include "exbound/bounds_conforming.hpp"
#include "exbound/problem.hpp"

namespace exbound {

/// Flux approximation inside the truncation sphere, with -zeta x / |x|^3
/// outside. No continuity across faces is assumed.
struct FluxApproximation {
  PointVectorField field;
  double zeta = 1.0;
};

// v = A grad u of a truncated approximation.
FluxApproximation conforming_flux(const TruncatedApproximation& approx, const ProblemSpec& problem);

// Piecewise constant field with zero volume average, drawn from a seeded
// generator and scaled so that its octant L2 norm equals `norm`.
std::vector<Vec3> fabricate_perturbation(const TetMesh& mesh, double norm, std::uint64_t seed);

// v = A grad u + delta w with w piecewise constant.
FluxApproximation perturbed_flux(const TruncatedApproximation& approx, const ProblemSpec& problem,
                                 std::vector<Vec3> w, double delta);

struct NcMajorantResult {
  MajorantResult first;  // inf over fluxes of M+^2(A^{-1} v~, v)
  std::shared_ptr<const FeSpace> scalar_space;
  Eigen::VectorXd u;     // minimizer of |grad u - A^{-1} v~|_A over the affine space
  double first_inf = 0.0;
  double second_inf = 0.0;
  double total = 0.0;
};

// Both infima of the non-conforming majorant. The second minimizes over
// degree-2 u with trace u0 on Gamma and zeta / R on SphereR.
NcMajorantResult nc_majorant(std::shared_ptr<const TetMesh> mesh, const FluxApproximation& flux,
                             const ProblemSpec& problem, const MajorantConfig& config = {});

/// Discrete split A E = A grad phi + psi of E = grad u_ref - A^{-1} v~, with phi
/// degree 2 vanishing on Gamma and SphereR and psi orthogonal to all such
/// gradients. Norms are full-domain A-norms (|A^{-1} psi|_A for psi).
struct HelmholtzSplit {
  std::shared_ptr<const FeSpace> space;
  Eigen::VectorXd phi;
  PointVectorField psi;
  double e_sq = 0.0;
  double grad_sq = 0.0;
  double psi_sq = 0.0;
  // max over free test functions chi of |<psi, grad chi>|.
  double orthogonality = 0.0;
  std::size_t cg_iterations = 0;
};

HelmholtzSplit helmholtz_split(std::shared_ptr<const TetMesh> mesh,
                               const PointVectorField& reference_gradient,
                               const FluxApproximation& flux, const ProblemSpec& problem,
                               const CgOptions& cg = {});

struct NcMinorantResult {
  double first_sup = 0.0;   // sup M- over interior-zero u
  double second_sup = 0.0;  // M~- at v = scale * psi and the affine majorant minimizer
  double scale = 0.0;       // optimal multiple of psi
  double total = 0.0;
  Eigen::VectorXd u;
};

NcMinorantResult nc_minorant(const FluxApproximation& flux, const ProblemSpec& problem,
                             const HelmholtzSplit& split, const NcMajorantResult& majorant,
                             const CgOptions& cg = {});

struct AppendixBound {
  double theta;
  double majorant;
};

struct AppendixBounds {
  std::vector<AppendixBound> majorants;  // (1 + 4/theta) inf M+^2 + (4 + theta) inf M~+^2
  double minorant = 0.0;                 // sup M- alone
};

// Throws ParameterError for theta <= 0.
AppendixBounds appendix_bounds(const NcMajorantResult& majorant, const NcMinorantResult& minorant,
                               std::span<const double> thetas);

// |grad u_exact - A^{-1} v~|_A^2 over the whole exterior of the ball, including
// the tail part 4 pi (u0 - zeta)^2 / R.
double nc_exact_error_ball(const TetMesh& mesh, const FluxApproximation& flux,
                           const ProblemSpec& problem);

// Gradient of u0 / |x|, continued analytically inside the inscribed facets.
PointVectorField exact_gradient_ball(const ProblemSpec& problem);

}  // namespace exbound
