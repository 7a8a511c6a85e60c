#include "exbound/bounds_conforming.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "exbound/errors.hpp"

namespace exbound {

namespace {

constexpr std::array<BoundaryTag, 3> kSymmetryTags = {BoundaryTag::SymX, BoundaryTag::SymY,
                                                      BoundaryTag::SymZ};

struct FluxTerms {
  double a2 = 0.0;  // |f + div v|_{+1}^2
  double b2 = 0.0;  // |g - A^{-1} v|_A^2
  std::vector<double> per_tet_b2;
};

FluxTerms flux_terms(const FeSpace& fs, const Eigen::VectorXd& v, const PointVectorField& g,
                     const ProblemSpec& problem, const std::vector<Mat3>& inv) {
  FluxTerms terms;
  const double mult = problem.multiplicity;
  terms.a2 = mult * integrate(fs.mesh(), [&](std::size_t t, const Barycentric& b, const Vec3& x) {
    const double r = problem.source_at(t, b, x) + evaluate_divergence(fs, v, t, b);
    return (1.0 + x.squaredNorm()) * r * r;
  });
  terms.per_tet_b2 = integrate_per_tet(fs.mesh(), [&](std::size_t t, const Barycentric& b,
                                                      const Vec3& x) {
    const Vec3 d = g(t, b, x) - inv[t] * evaluate_vector(fs, v, t, b);
    return d.dot(problem.coefficient[t] * d);
  });
  for (double& e : terms.per_tet_b2) {
    e *= mult;
    terms.b2 += e;
  }
  return terms;
}

void require_flux_space(const FeSpace& fs) {
  if (fs.is_scalar()) throw UsageError("fluxes live in a vector space");
}

void require_ball(const ProblemSpec& problem) {
  if (problem.obstacle != Obstacle::Ball) {
    throw UsageError("the exact solution is only known for the ball");
  }
}

}  // namespace

ConstraintSet flux_constraints(const FeSpace& flux_space, double zeta) {
  require_flux_space(flux_space);
  ConstraintSet c;
  for (std::size_t n = 0; n < flux_space.num_nodes(); ++n) {
    const Vec3& x = flux_space.node_coordinate(n);
    if (flux_space.node_on(n, BoundaryTag::SphereR)) {
      const Vec3 value = -zeta * x / std::pow(x.norm(), 3);
      for (int k = 0; k < 3; ++k) c.fix(flux_space.dof(n, k), value[k]);
    }
    for (int k = 0; k < 3; ++k) {
      if (flux_space.node_on(n, kSymmetryTags[k])) c.fix(flux_space.dof(n, k), 0.0);
    }
  }
  return c;
}

Eigen::VectorXd initial_flux(const FeSpace& flux_space, const PointVectorField& g,
                             const ProblemSpec& problem, const ConstraintSet& constraints) {
  require_flux_space(flux_space);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(flux_space.num_dofs()));
  std::vector<int> count(flux_space.num_nodes(), 0);
  const int npt = flux_space.nodes_per_tet();
  for (std::size_t t = 0; t < flux_space.num_tets(); ++t) {
    const auto nodes = flux_space.tet_nodes(t);
    for (int a = 0; a < npt; ++a) {
      Barycentric b{0.0, 0.0, 0.0, 0.0};
      if (a < 4) {
        b[a] = 1.0;
      } else {
        static constexpr int kEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        b[kEdges[a - 4][0]] = 0.5;
        b[kEdges[a - 4][1]] = 0.5;
      }
      const Vec3 value = problem.coefficient[t] * g(t, b, flux_space.point(t, b));
      for (int k = 0; k < 3; ++k) v[flux_space.dof(nodes[a], k)] += value[k];
      ++count[nodes[a]];
    }
  }
  for (std::size_t n = 0; n < flux_space.num_nodes(); ++n) {
    for (int k = 0; k < 3; ++k) v[flux_space.dof(n, k)] /= count[n];
  }
  for (const auto& [dof, value] : constraints.entries()) v[dof] = value;
  return v;
}

double majorant_quadratic(double c, double beta, double a2, double b2) {
  if (a2 == 0.0) return (1.0 + beta) * b2;
  return c * c * (1.0 + 1.0 / beta) * a2 + (1.0 + beta) * b2;
}

MajorantResult minimize_flux_majorant(std::shared_ptr<const FeSpace> flux_space,
                                      const PointVectorField& g, double zeta,
                                      const ProblemSpec& problem, const MajorantConfig& config,
                                      const Eigen::VectorXd* flux_guess) {
  const FeSpace& fs = *flux_space;
  require_flux_space(fs);
  if (!(config.beta_initial > 0.0) || !(config.beta_tol > 0.0) || config.beta_max_iter < 1) {
    throw ParameterError("beta iteration needs positive start, tolerance and iteration count");
  }
  const double c = problem.poincare_constants().c_n_alpha;
  const std::vector<Mat3> inv = checked_inverses(problem.coefficient);

  const CsrMatrix div_form = assemble_weighted_div_form(fs);
  const CsrMatrix mass = assemble_vector_mass(fs, problem.coefficient);
  const Eigen::VectorXd g_load = assemble_field_load(fs, g);
  const Eigen::VectorXd f_load =
      problem.has_source()
          ? assemble_weighted_div_load(fs, [&](std::size_t t, const Barycentric& b,
                                               const Vec3& x) { return problem.source_at(t, b, x); })
          : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fs.num_dofs()));
  const ConstraintSet constraints = flux_constraints(fs, zeta);

  MajorantResult res;
  res.flux_space = flux_space;
  if (flux_guess) {
    res.flux = *flux_guess;
    for (const auto& [dof, value] : constraints.entries()) res.flux[dof] = value;
  } else {
    res.flux = initial_flux(fs, g, problem, constraints);
  }

  double beta = config.beta_initial;
  SparseCholesky cholesky;
  FluxTerms terms = flux_terms(fs, res.flux, g, problem, inv);
  res.history.push_back(majorant_quadratic(c, beta, terms.a2, terms.b2));

  for (std::size_t it = 1; it <= config.beta_max_iter; ++it) {
    const double wd = c * c * (1.0 + 1.0 / beta);
    const double wm = 1.0 + beta;
    const CsrMatrix k = linear_combination(wd, div_form, wm, mass);
    const Eigen::VectorXd rhs = wm * g_load - wd * f_load;
    if (config.flux_solver == FluxSolver::Cholesky) {
      const ReducedSystem sys = apply_constraints(k, rhs, constraints);
      cholesky.factorize(sys.matrix);
      res.flux = sys.reconstruct(cholesky.solve(sys.rhs));
    } else {
      CgResult stats;
      res.flux = solve_constrained(k, rhs, constraints, config.cg, &res.flux, &stats);
      res.cg_iterations += stats.iterations;
    }
    res.beta_iterations = it;
    terms = flux_terms(fs, res.flux, g, problem, inv);
    res.history.push_back(majorant_quadratic(c, beta, terms.a2, terms.b2));

    if (terms.b2 == 0.0) {
      res.beta_infinite = true;
      break;
    }
    const double next = c * std::sqrt(terms.a2) / std::sqrt(terms.b2);
    const bool done = std::abs(next - beta) <= config.beta_tol * beta || next == 0.0;
    beta = next;
    res.history.push_back(majorant_quadratic(c, beta, terms.a2, terms.b2));
    if (done) break;
  }

  res.div_sq = terms.a2;
  res.flux_sq = terms.b2;
  res.indicator = std::move(terms.per_tet_b2);
  if (res.beta_infinite) {
    res.beta = std::numeric_limits<double>::infinity();
    res.div_term = c * c * res.div_sq;
    res.flux_term = 0.0;
  } else {
    res.beta = beta;
    res.div_term = res.div_sq == 0.0 ? 0.0 : c * c * (1.0 + 1.0 / beta) * res.div_sq;
    res.flux_term = (1.0 + beta) * res.flux_sq;
  }
  res.value = res.div_term + res.flux_term;
  if (config.literal_display && !res.beta_infinite) {
    res.literal_value = (1.0 + beta) * (c * c * res.div_sq + res.flux_sq);
  }
  return res;
}

MajorantResult minimize_majorant(const TruncatedApproximation& approx, const ProblemSpec& problem,
                                 const MajorantConfig& config, const Eigen::VectorXd* flux_guess) {
  auto fs = std::make_shared<const FeSpace>(approx.space->mesh_ptr(), config.flux_degree, 3);
  return minimize_flux_majorant(fs, gradient_field(*approx.space, approx.coeffs), approx.zeta,
                                problem, config, flux_guess);
}

MinorantResult maximize_flux_minorant(std::shared_ptr<const FeSpace> space,
                                      const PointVectorField& g, const ProblemSpec& problem,
                                      const CgOptions& cg) {
  const FeSpace& s = *space;
  if (!s.is_scalar()) throw UsageError("minorant candidates live in a scalar space");
  const CsrMatrix k = assemble_stiffness(s, problem.coefficient);
  Eigen::VectorXd rhs = -assemble_gradient_load(s, [&](std::size_t t, const Barycentric& b,
                                                       const Vec3& x) {
    return Vec3(problem.coefficient[t] * g(t, b, x));
  });
  if (problem.has_source()) {
    rhs += assemble_source_load(s, [&](std::size_t t, const Barycentric& b, const Vec3& x) {
      return problem.source_at(t, b, x);
    });
  }
  ConstraintSet zero;
  for (std::size_t n = 0; n < s.num_nodes(); ++n) {
    if (s.node_on(n, BoundaryTag::Gamma) || s.node_on(n, BoundaryTag::SphereR)) zero.fix(n, 0.0);
  }
  MinorantResult res;
  res.space = space;
  CgResult stats;
  res.u = solve_constrained(k, rhs, zero, cg, nullptr, &stats);
  res.cg_iterations = stats.iterations;
  res.value = problem.multiplicity *
              integrate(s.mesh(), [&](std::size_t t, const Barycentric& b, const Vec3& x) {
                const Vec3 gu = evaluate_gradient(s, res.u, t, b);
                const double fu = problem.source_at(t, b, x) * evaluate_value(s, res.u, t, b);
                return 2.0 * fu - (gu + 2.0 * g(t, b, x)).dot(problem.coefficient[t] * gu);
              });
  return res;
}

MinorantResult maximize_minorant(const TruncatedApproximation& approx, const ProblemSpec& problem,
                                 const CgOptions& cg) {
  auto space = std::make_shared<const FeSpace>(approx.space->mesh_ptr(), 2, 1);
  return maximize_flux_minorant(space, gradient_field(*approx.space, approx.coeffs), problem, cg);
}

std::vector<double> element_indicator(const TruncatedApproximation& approx,
                                      const FeSpace& flux_space, const Eigen::VectorXd& flux,
                                      const ProblemSpec& problem) {
  require_flux_space(flux_space);
  const std::vector<Mat3> inv = checked_inverses(problem.coefficient);
  return flux_terms(flux_space, flux, gradient_field(*approx.space, approx.coeffs), problem, inv)
      .per_tet_b2;
}

OracleError exact_error_ball(const TruncatedApproximation& approx, const ProblemSpec& problem) {
  require_ball(problem);
  const FeSpace& s = *approx.space;
  const double u0 = problem.boundary_value;
  OracleError e;
  e.per_tet = integrate_per_tet(s.mesh(), [&](std::size_t t, const Barycentric& b, const Vec3& x) {
    const double r = x.norm();
    const Vec3 d = -u0 * x / (r * r * r) - evaluate_gradient(s, approx.coeffs, t, b);
    return d.dot(problem.coefficient[t] * d);
  });
  for (double& v : e.per_tet) {
    v *= problem.multiplicity;
    e.interior += v;
  }
  e.tail = tail_energy(u0 - approx.zeta, approx.radius);
  e.total = e.interior + e.tail;
  return e;
}

std::optional<double> BoundReport::efficiency() const {
  if (!oracle || oracle->total <= 0.0) return std::nullopt;
  return majorant.value / oracle->total;
}

BoundReport compute_bounds(const TruncatedApproximation& approx, const ProblemSpec& problem,
                           const MajorantConfig& config) {
  BoundReport report;
  report.majorant = minimize_majorant(approx, problem, config);
  report.minorant = maximize_minorant(approx, problem, config.cg);
  report.energy = energy(approx, problem);
  if (problem.obstacle == Obstacle::Ball) report.oracle = exact_error_ball(approx, problem);
  return report;
}

}  // namespace exbound
