#include "exbound/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "exbound/assembly.hpp"
#include "exbound/errors.hpp"

namespace exbound {

namespace {

ConstraintSet dirichlet_zero(const FeSpace& space) {
  ConstraintSet c;
  for (std::size_t n = 0; n < space.num_nodes(); ++n) {
    if (space.node_on(n, BoundaryTag::Gamma) || space.node_on(n, BoundaryTag::SphereR)) {
      c.fix(n, 0.0);
    }
  }
  return c;
}

PointScalarField source_of(const ProblemSpec& problem) {
  return [&problem](std::size_t t, const Barycentric& b, const Vec3& x) {
    return problem.source_at(t, b, x);
  };
}

void require_scalar_space(const FeSpace& space) {
  if (!space.is_scalar()) throw UsageError("the approximation lives in a scalar space");
}

}  // namespace

double tail_energy(double zeta, double radius) {
  if (!(radius > 0.0)) throw ParameterError("tail energy needs R > 0");
  return 4.0 * std::numbers::pi * zeta * zeta / radius;
}

TruncatedApproximation interpolate_truncated(std::shared_ptr<const FeSpace> space,
                                             const ScalarFunction& u, double zeta,
                                             const ProblemSpec& problem) {
  require_scalar_space(*space);
  TruncatedApproximation a;
  a.coeffs = interpolate(*space, u);
  for (std::size_t n = 0; n < space->num_nodes(); ++n) {
    if (space->node_on(n, BoundaryTag::Gamma)) a.coeffs[n] = problem.boundary_value;
    if (space->node_on(n, BoundaryTag::SphereR)) a.coeffs[n] = zeta / problem.radius;
  }
  a.space = std::move(space);
  a.zeta = zeta;
  a.radius = problem.radius;
  return a;
}

double radial_blend(const Vec3& x, double radius, Obstacle obstacle) {
  const double r = x.norm();
  if (obstacle == Obstacle::Ball) return (r - 1.0) / (radius - 1.0);
  const double m = x.cwiseAbs().maxCoeff();
  return r * (m - 1.0) / (radius * m - r);
}

AuxiliaryFunctions seed_auxiliary_functions(const FeSpace& space, const ProblemSpec& problem,
                                            const CgOptions& cg) {
  require_scalar_space(space);
  AuxiliaryFunctions aux;
  ConstraintSet bc;
  for (std::size_t n = 0; n < space.num_nodes(); ++n) {
    if (space.node_on(n, BoundaryTag::Gamma)) bc.fix(n, problem.boundary_value);
    if (space.node_on(n, BoundaryTag::SphereR)) bc.fix(n, 0.0);
  }
  const CsrMatrix k = assemble_stiffness(space, problem.coefficient);
  aux.lift = solve_constrained(k, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.num_dofs())),
                               bc, cg);

  aux.blend = interpolate(space, [&](const Vec3& x) {
    return radial_blend(x, problem.radius, problem.obstacle);
  });
  for (std::size_t n = 0; n < space.num_nodes(); ++n) {
    if (space.node_on(n, BoundaryTag::Gamma)) aux.blend[n] = 0.0;
    if (space.node_on(n, BoundaryTag::SphereR)) aux.blend[n] = 1.0;
  }
  return aux;
}

double zeta_update(double a, double b, double radius) {
  return -radius * a / (4.0 * std::numbers::pi * radius + b);
}

EnergyMinimizer::EnergyMinimizer(std::shared_ptr<const FeSpace> space, const ProblemSpec& problem,
                                 AuxiliaryFunctions aux, CgOptions cg)
    : space_(std::move(space)),
      radius_(problem.radius),
      multiplicity_(problem.multiplicity),
      aux_(std::move(aux)),
      cg_(cg) {
  require_scalar_space(*space_);
  if (!(radius_ > 0.0)) throw ParameterError("truncation radius must be positive");
  stiffness_ = assemble_stiffness(*space_, problem.coefficient);
  load_ = problem.has_source() ? assemble_source_load(*space_, source_of(problem))
                               : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space_->num_dofs()));
  reduced_ = apply_constraints(stiffness_, load_, dirichlet_zero(*space_));
}

Eigen::VectorXd EnergyMinimizer::combine(const Eigen::VectorXd& interior, double zeta) const {
  return interior + aux_.lift + (zeta / radius_) * aux_.blend;
}

Eigen::VectorXd EnergyMinimizer::step1(double zeta, const Eigen::VectorXd* guess,
                                       CgResult* stats) const {
  const Eigen::VectorXd boundary_part = aux_.lift + (zeta / radius_) * aux_.blend;
  const Eigen::VectorXd rhs = reduced_.restrict_to_free(load_ - stiffness_ * boundary_part);
  Eigen::VectorXd reduced_guess;
  if (guess) reduced_guess = reduced_.restrict_to_free(*guess);
  CgResult res = solve_cg(reduced_.matrix, rhs, cg_, guess ? &reduced_guess : nullptr);
  Eigen::VectorXd u = reduced_.reconstruct(res.x);
  if (stats) *stats = std::move(res);
  return u;
}

double EnergyMinimizer::step2(const Eigen::VectorXd& interior) const {
  const Eigen::VectorXd k_blend = stiffness_ * aux_.blend;
  const double a = multiplicity_ * ((interior + aux_.lift).dot(k_blend) - load_.dot(aux_.blend));
  const double b = multiplicity_ * aux_.blend.dot(k_blend);
  return zeta_update(a, b, radius_);
}

double EnergyMinimizer::energy(const Eigen::VectorXd& interior, double zeta) const {
  const Eigen::VectorXd w = combine(interior, zeta);
  return multiplicity_ * (stiffness_.quadratic_form(w) - 2.0 * load_.dot(w)) +
         tail_energy(zeta, radius_);
}

double EnergyMinimizer::galerkin_residual(const Eigen::VectorXd& interior, double zeta) const {
  const Eigen::VectorXd r = stiffness_ * combine(interior, zeta) - load_;
  double worst = 0.0;
  for (std::size_t i : reduced_.free_dofs) worst = std::max(worst, std::abs(r[i]));
  return worst;
}

Alg1Result alg1_run(std::shared_ptr<const FeSpace> space, const ProblemSpec& problem,
                    const Alg1Options& options) {
  if (!(options.stop_rel > 0.0)) throw ParameterError("stop_rel must be positive");
  if (options.max_iter < 1) throw ParameterError("max_iter must be at least 1");
  AuxiliaryFunctions aux = seed_auxiliary_functions(*space, problem, options.cg);
  const EnergyMinimizer minimizer(space, problem, std::move(aux), options.cg);

  Alg1Result result;
  double zeta = options.zeta_initial;
  Eigen::VectorXd interior = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space->num_dofs()));
  result.energy_history.push_back(minimizer.energy(interior, zeta));

  for (std::size_t k = 1; k <= options.max_iter; ++k) {
    CgResult stats;
    interior = minimizer.step1(zeta, &interior, &stats);
    result.energy_history.push_back(minimizer.energy(interior, zeta));
    const double next = minimizer.step2(interior);
    const double e = minimizer.energy(interior, next);
    result.energy_history.push_back(e);
    const double change = next == 0.0 ? (next == zeta ? 0.0 : std::numeric_limits<double>::infinity())
                                      : std::abs(next - zeta) / std::abs(next);
    result.trace.push_back({k, next, e, change, stats.iterations});
    zeta = next;
    if (change < options.stop_rel) {
      result.converged = true;
      break;
    }
  }

  TruncatedApproximation& a = result.approx;
  a.space = space;
  a.zeta = zeta;
  a.radius = problem.radius;
  a.interior = interior;
  a.lift = minimizer.auxiliary().lift;
  a.blend = minimizer.auxiliary().blend;
  a.coeffs = minimizer.combine(interior, zeta);
  return result;
}

EnergyBreakdown energy(const TruncatedApproximation& approx, const ProblemSpec& problem) {
  const FeSpace& space = *approx.space;
  EnergyBreakdown e;
  const double grad_sq = integrate(space.mesh(), [&](std::size_t t, const Barycentric& b,
                                                     const Vec3&) {
    const Vec3 g = evaluate_gradient(space, approx.coeffs, t, b);
    return g.dot(problem.coefficient[t] * g);
  });
  e.interior = problem.multiplicity * grad_sq;
  e.tail = tail_energy(approx.zeta, approx.radius);
  if (problem.has_source()) {
    e.source_work = 2.0 * problem.multiplicity *
                    integrate(space.mesh(), [&](std::size_t t, const Barycentric& b,
                                                const Vec3& x) {
                      return problem.source_at(t, b, x) * evaluate_value(space, approx.coeffs, t, b);
                    });
  }
  e.total = e.interior + e.tail - e.source_work;
  return e;
}

}  // namespace exbound
