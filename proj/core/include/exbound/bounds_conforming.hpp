#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "exbound/approx.hpp"
#include "exbound/assembly.hpp"
#include "exbound/fe_space.hpp"
#include "exbound/problem.hpp"
#include "exbound/sparse.hpp"

namespace exbound {

// Linear solver for the flux normal equations. The weighted divergence term
// makes them badly conditioned for small beta, where Jacobi-preconditioned CG
// needs several times the system size in iterations.
enum class FluxSolver { Cholesky, Cg };

struct MajorantConfig {
  int flux_degree = 2;
  double beta_initial = 1.0;
  double beta_tol = 1e-6;
  std::size_t beta_max_iter = 20;
  FluxSolver flux_solver = FluxSolver::Cholesky;
  CgOptions cg;
  // Also evaluate the variant with (1 + beta) on the divergence term, for
  // comparison only; it is not a guaranteed bound.
  bool literal_display = false;
};

// Constraints of admissible fluxes: on SphereR nodes all components equal
// -zeta x / |x|^3; on symmetry-plane nodes the normal component vanishes.
ConstraintSet flux_constraints(const FeSpace& flux_space, double zeta);

// Nodal average of A g over the tets around each node, with the constraint
// values imposed. Used to start the flux iteration.
Eigen::VectorXd initial_flux(const FeSpace& flux_space, const PointVectorField& g,
                             const ProblemSpec& problem, const ConstraintSet& constraints);

/// Result of minimizing
///   c^2 (1 + 1/beta) |f + div v|_{+1}^2 + (1 + beta) |g - A^{-1} v|_A^2
/// over admissible fluxes v and beta > 0. All norms are full-domain.
struct MajorantResult {
  std::shared_ptr<const FeSpace> flux_space;
  Eigen::VectorXd flux;
  double beta = 1.0;
  bool beta_infinite = false;
  double div_sq = 0.0;   // |f + div v|_{+1}^2
  double flux_sq = 0.0;  // |g - A^{-1} v|_A^2
  double div_term = 0.0;
  double flux_term = 0.0;
  double value = 0.0;    // div_term + flux_term
  std::optional<double> literal_value;
  // Value at the start and after every flux solve and beta update.
  std::vector<double> history;
  // Per-tet |g - A^{-1} v|_A^2, full-domain scaling; sums to flux_sq.
  std::vector<double> indicator;
  std::size_t beta_iterations = 0;
  std::size_t cg_iterations = 0;
};

// c^2 (1 + 1/beta) a2 + (1 + beta) b2.
double majorant_quadratic(double c, double beta, double a2, double b2);

// Minimization for a general field g standing in for grad u.
MajorantResult minimize_flux_majorant(std::shared_ptr<const FeSpace> flux_space,
                                      const PointVectorField& g, double zeta,
                                      const ProblemSpec& problem, const MajorantConfig& config,
                                      const Eigen::VectorXd* flux_guess = nullptr);

MajorantResult minimize_majorant(const TruncatedApproximation& approx, const ProblemSpec& problem,
                                 const MajorantConfig& config = {},
                                 const Eigen::VectorXd* flux_guess = nullptr);

struct MinorantResult {
  std::shared_ptr<const FeSpace> space;
  Eigen::VectorXd u;
  double value = 0.0;  // full-domain
  std::size_t cg_iterations = 0;
};

// Maximizes 2 <f, u> - <grad u + 2 g, grad u>_A over degree-2 u vanishing on
// Gamma and SphereR.
MinorantResult maximize_flux_minorant(std::shared_ptr<const FeSpace> space,
                                      const PointVectorField& g, const ProblemSpec& problem,
                                      const CgOptions& cg = {});

MinorantResult maximize_minorant(const TruncatedApproximation& approx, const ProblemSpec& problem,
                                 const CgOptions& cg = {});

// Per-tet |grad u - A^{-1} v|_A^2, full-domain scaling.
std::vector<double> element_indicator(const TruncatedApproximation& approx,
                                      const FeSpace& flux_space, const Eigen::VectorXd& flux,
                                      const ProblemSpec& problem);

struct OracleError {
  double interior = 0.0;  // full-domain integral over the truncated domain
  double tail = 0.0;      // 4 pi (u0 - zeta)^2 / R
  double total = 0.0;
  std::vector<double> per_tet;  // full-domain scaling
};

// |grad(u_exact - u)|_A^2 for the ball, u_exact = u0 / |x|. Inside the
// inscribed facets the exact solution is continued analytically.
OracleError exact_error_ball(const TruncatedApproximation& approx, const ProblemSpec& problem);

struct BoundReport {
  MajorantResult majorant;
  MinorantResult minorant;
  EnergyBreakdown energy;  // of the approximation, full-domain
  std::optional<OracleError> oracle;

  double majorant_sq() const { return majorant.value; }
  double minorant_value() const { return minorant.value; }
  // |grad u|^2 over the whole exterior domain (interior part plus tail).
  double energy_sq() const { return energy.interior + energy.tail; }
  std::optional<double> efficiency() const;
};

BoundReport compute_bounds(const TruncatedApproximation& approx, const ProblemSpec& problem,
                           const MajorantConfig& config = {});

}  // namespace exbound
