#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "exbound/fe_space.hpp"
#include "exbound/problem.hpp"
#include "exbound/sparse.hpp"

namespace exbound {

// Full-domain energy 4 pi zeta^2 / R of zeta / r outside the sphere of radius R.
double tail_energy(double zeta, double radius);

/// Approximation u = FE function inside the truncation sphere, zeta / r outside.
///
/// `coeffs` is the complete FE function, equal to interior + lift +
/// (zeta / R) blend, with trace u0 on Gamma and zeta / R on SphereR. The three
/// parts are kept when the approximation comes from the energy minimization.
struct TruncatedApproximation {
  std::shared_ptr<const FeSpace> space;
  Eigen::VectorXd coeffs;
  double zeta = 1.0;
  double radius = 0.0;
  Eigen::VectorXd interior;
  Eigen::VectorXd lift;
  Eigen::VectorXd blend;
};

// Nodal interpolant of u inside, with Gamma nodes set to u0 and SphereR nodes to
// zeta / R so that the trace conditions hold exactly.
TruncatedApproximation interpolate_truncated(std::shared_ptr<const FeSpace> space,
                                             const ScalarFunction& u, double zeta,
                                             const ProblemSpec& problem);

struct AuxiliaryFunctions {
  Eigen::VectorXd lift;   // u0 on Gamma, 0 on SphereR, discrete harmonic
  Eigen::VectorXd blend;  // 0 on Gamma, 1 on SphereR, radial blend
};

// Ball: blend (|x| - 1) / (R - 1). Cube: with m = max_i |x_i|, the blend
// |x| (m - 1) / (R m - |x|), linear along rays from the cube to the sphere.
double radial_blend(const Vec3& x, double radius, Obstacle obstacle);

AuxiliaryFunctions seed_auxiliary_functions(const FeSpace& space, const ProblemSpec& problem,
                                            const CgOptions& cg = {});

// zeta minimizing the energy for fixed interior part: -R a / (4 pi R + b) with
// a = <grad(u_k + lift), grad blend>_A - <f, blend> and b = |grad blend|_A^2,
// both full-domain.
double zeta_update(double a, double b, double radius);

/// Alternating minimization of the full-domain energy
///   E(u, zeta) = |grad w|_A^2 - 2 <f, w> + 4 pi zeta^2 / R,
///   w = u + lift + (zeta / R) blend,
/// over interior fields u (zero on Gamma and SphereR) and the tail amplitude.
class EnergyMinimizer {
 public:
  EnergyMinimizer(std::shared_ptr<const FeSpace> space, const ProblemSpec& problem,
                  AuxiliaryFunctions aux, CgOptions cg = {});

  // Interior minimizer for fixed zeta.
  Eigen::VectorXd step1(double zeta, const Eigen::VectorXd* guess = nullptr,
                        CgResult* stats = nullptr) const;
  // Tail amplitude minimizing the energy for a fixed interior field.
  double step2(const Eigen::VectorXd& interior) const;

  Eigen::VectorXd combine(const Eigen::VectorXd& interior, double zeta) const;
  double energy(const Eigen::VectorXd& interior, double zeta) const;
  // Max over free dofs of |<A grad w, grad phi_i> - <f, phi_i>|.
  double galerkin_residual(const Eigen::VectorXd& interior, double zeta) const;

  const AuxiliaryFunctions& auxiliary() const noexcept { return aux_; }
  const CsrMatrix& stiffness() const noexcept { return stiffness_; }
  const std::vector<std::size_t>& free_dofs() const noexcept { return reduced_.free_dofs; }

 private:
  std::shared_ptr<const FeSpace> space_;
  double radius_;
  double multiplicity_;
  AuxiliaryFunctions aux_;
  CgOptions cg_;
  CsrMatrix stiffness_;
  Eigen::VectorXd load_;
  ReducedSystem reduced_;
};

struct Alg1Options {
  double stop_rel = 1e-8;
  std::size_t max_iter = 50;
  double zeta_initial = 1.0;
  CgOptions cg;
};

struct Alg1Iteration {
  std::size_t k;
  double zeta;           // zeta_{k+1}, after step 2
  double energy;         // energy after step 2
  double residual;       // |zeta_{k+1} - zeta_k| / |zeta_{k+1}|
  std::size_t cg_iterations;
};

struct Alg1Result {
  TruncatedApproximation approx;
  std::vector<Alg1Iteration> trace;
  // Energy before the first step and after every half step.
  std::vector<double> energy_history;
  bool converged = false;
};

Alg1Result alg1_run(std::shared_ptr<const FeSpace> space, const ProblemSpec& problem,
                    const Alg1Options& options = {});

struct EnergyBreakdown {
  double interior = 0.0;     // full-domain |grad u|_A^2 over the truncated domain
  double tail = 0.0;         // 4 pi zeta^2 / R
  double source_work = 0.0;  // 2 <f, u>, zero without a source
  double total = 0.0;        // interior + tail - source_work
};

EnergyBreakdown energy(const TruncatedApproximation& approx, const ProblemSpec& problem);

}  // namespace exbound
