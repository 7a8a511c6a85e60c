#include "exbound/bounds_nonconforming.hpp"

#include <cmath>
#include <random>
#include <string>

#include "exbound/errors.hpp"

namespace exbound {

namespace {

using SharedCoefficient = std::shared_ptr<const std::vector<Mat3>>;

SharedCoefficient share_coefficient(const ProblemSpec& problem) {
  return std::make_shared<const std::vector<Mat3>>(problem.coefficient);
}

// g = A^{-1} v~.
PointVectorField scaled_flux(const FluxApproximation& flux, const std::vector<Mat3>& inv) {
  return [&flux, &inv](std::size_t t, const Barycentric& b, const Vec3& x) {
    return Vec3(inv[t] * flux.field(t, b, x));
  };
}

ConstraintSet dirichlet(const FeSpace& space, double gamma_value, double sphere_value) {
  ConstraintSet c;
  for (std::size_t n = 0; n < space.num_nodes(); ++n) {
    if (space.node_on(n, BoundaryTag::Gamma)) c.fix(n, gamma_value);
    if (space.node_on(n, BoundaryTag::SphereR)) c.fix(n, sphere_value);
  }
  return c;
}

double uniform_symmetric(std::mt19937_64& gen) {
  // 53 random bits mapped to [-1, 1); independent of the library's distributions.
  return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
}

}  // namespace

FluxApproximation conforming_flux(const TruncatedApproximation& approx,
                                  const ProblemSpec& problem) {
  auto space = approx.space;
  auto coeffs = std::make_shared<const Eigen::VectorXd>(approx.coeffs);
  auto a = share_coefficient(problem);
  FluxApproximation flux;
  flux.zeta = approx.zeta;
  flux.field = [space, coeffs, a](std::size_t t, const Barycentric& b, const Vec3&) {
    return Vec3((*a)[t] * evaluate_gradient(*space, *coeffs, t, b));
  };
  return flux;
}

std::vector<Vec3> fabricate_perturbation(const TetMesh& mesh, double norm, std::uint64_t seed) {
  if (!(norm >= 0.0)) throw ParameterError("perturbation norm must be non-negative");
  std::mt19937_64 gen(seed);
  std::vector<Vec3> w(mesh.num_tets());
  Vec3 mean = Vec3::Zero();
  double volume = 0.0;
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    for (int k = 0; k < 3; ++k) w[t][k] = uniform_symmetric(gen);
    const double vol = mesh.signed_volume(t);
    mean += vol * w[t];
    volume += vol;
  }
  mean /= volume;
  double sq = 0.0;
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    w[t] -= mean;
    sq += mesh.signed_volume(t) * w[t].squaredNorm();
  }
  const double scale = sq > 0.0 ? norm / std::sqrt(sq) : 0.0;
  for (Vec3& v : w) v *= scale;
  return w;
}

FluxApproximation perturbed_flux(const TruncatedApproximation& approx, const ProblemSpec& problem,
                                 std::vector<Vec3> w, double delta) {
  if (w.size() != approx.space->num_tets()) {
    throw UsageError("perturbation has " + std::to_string(w.size()) + " entries for " +
                     std::to_string(approx.space->num_tets()) + " tets");
  }
  FluxApproximation flux = conforming_flux(approx, problem);
  if (delta == 0.0) return flux;
  auto shared_w = std::make_shared<const std::vector<Vec3>>(std::move(w));
  flux.field = [base = flux.field, shared_w, delta](std::size_t t, const Barycentric& b,
                                                    const Vec3& x) {
    return Vec3(base(t, b, x) + delta * (*shared_w)[t]);
  };
  return flux;
}

NcMajorantResult nc_majorant(std::shared_ptr<const TetMesh> mesh, const FluxApproximation& flux,
                             const ProblemSpec& problem, const MajorantConfig& config) {
  const std::vector<Mat3> inv = checked_inverses(problem.coefficient);
  const PointVectorField g = scaled_flux(flux, inv);
  NcMajorantResult res;

  auto flux_space = std::make_shared<const FeSpace>(mesh, config.flux_degree, 3);
  res.first = minimize_flux_majorant(flux_space, g, flux.zeta, problem, config);
  res.first_inf = res.first.value;

  res.scalar_space = std::make_shared<const FeSpace>(mesh, 2, 1);
  const FeSpace& s = *res.scalar_space;
  const CsrMatrix k = assemble_stiffness(s, problem.coefficient);
  const Eigen::VectorXd rhs = assemble_gradient_load(s, flux.field);
  res.u = solve_constrained(k, rhs,
                            dirichlet(s, problem.boundary_value, flux.zeta / problem.radius),
                            config.cg);
  res.second_inf =
      problem.multiplicity *
      integrate(s.mesh(), [&](std::size_t t, const Barycentric& b, const Vec3& x) {
        const Vec3 d = evaluate_gradient(s, res.u, t, b) - g(t, b, x);
        return d.dot(problem.coefficient[t] * d);
      });
  res.total = res.first_inf + res.second_inf;
  return res;
}

HelmholtzSplit helmholtz_split(std::shared_ptr<const TetMesh> mesh,
                               const PointVectorField& reference_gradient,
                               const FluxApproximation& flux, const ProblemSpec& problem,
                               const CgOptions& cg) {
  auto a = share_coefficient(problem);
  auto inv = std::make_shared<const std::vector<Mat3>>(checked_inverses(problem.coefficient));
  const PointVectorField e = [reference_gradient, field = flux.field, inv](
                                 std::size_t t, const Barycentric& b, const Vec3& x) {
    return Vec3(reference_gradient(t, b, x) - (*inv)[t] * field(t, b, x));
  };

  HelmholtzSplit split;
  split.space = std::make_shared<const FeSpace>(mesh, 2, 1);
  const FeSpace& s = *split.space;
  const CsrMatrix k = assemble_stiffness(s, problem.coefficient);
  const Eigen::VectorXd rhs = assemble_gradient_load(
      s, [&](std::size_t t, const Barycentric& b, const Vec3& x) {
        return Vec3((*a)[t] * e(t, b, x));
      });
  CgResult stats;
  split.phi = solve_constrained(k, rhs, dirichlet(s, 0.0, 0.0), cg, nullptr, &stats);
  split.cg_iterations = stats.iterations;

  auto space = split.space;
  auto phi = std::make_shared<const Eigen::VectorXd>(split.phi);
  split.psi = [e, a, space, phi](std::size_t t, const Barycentric& b, const Vec3& x) {
    return Vec3((*a)[t] * (e(t, b, x) - evaluate_gradient(*space, *phi, t, b)));
  };

  const double mult = problem.multiplicity;
  split.e_sq = mult * integrate(s.mesh(), [&](std::size_t t, const Barycentric& b, const Vec3& x) {
    const Vec3 v = e(t, b, x);
    return v.dot((*a)[t] * v);
  });
  split.grad_sq = mult * integrate(s.mesh(), [&](std::size_t t, const Barycentric& b,
                                                 const Vec3&) {
    const Vec3 v = evaluate_gradient(s, split.phi, t, b);
    return v.dot((*a)[t] * v);
  });
  split.psi_sq = mult * integrate(s.mesh(), [&](std::size_t t, const Barycentric& b,
                                                const Vec3& x) {
    const Vec3 v = split.psi(t, b, x);
    return v.dot((*inv)[t] * v);
  });

  const Eigen::VectorXd residual = assemble_gradient_load(s, split.psi);
  for (std::size_t n = 0; n < s.num_nodes(); ++n) {
    if (s.node_on(n, BoundaryTag::Gamma) || s.node_on(n, BoundaryTag::SphereR)) continue;
    split.orthogonality = std::max(split.orthogonality, std::abs(residual[n]));
  }
  return split;
}

NcMinorantResult nc_minorant(const FluxApproximation& flux, const ProblemSpec& problem,
                             const HelmholtzSplit& split, const NcMajorantResult& majorant,
                             const CgOptions& cg) {
  const std::vector<Mat3> inv = checked_inverses(problem.coefficient);
  const PointVectorField g = scaled_flux(flux, inv);
  NcMinorantResult res;

  const MinorantResult first = maximize_flux_minorant(split.space, g, problem, cg);
  res.first_sup = first.value;
  res.u = first.u;

  // M~- is concave in v, so along the ray t psi it peaks at
  // t = <grad u - A^{-1} v~, psi> / |A^{-1} psi|_A^2; t = 1 when u is exact.
  const FeSpace& s = *majorant.scalar_space;
  const double mult = problem.multiplicity;
  const double cross = mult * integrate(s.mesh(), [&](std::size_t t, const Barycentric& b,
                                                      const Vec3& x) {
    return (evaluate_gradient(s, majorant.u, t, b) - g(t, b, x)).dot(split.psi(t, b, x));
  });
  res.scale = split.psi_sq > 0.0 ? cross / split.psi_sq : 0.0;
  const double t_opt = res.scale;
  res.second_sup =
      mult * integrate(s.mesh(), [&](std::size_t t, const Barycentric& b, const Vec3& x) {
        const Vec3 v = t_opt * split.psi(t, b, x);
        const Vec3 lhs = 2.0 * evaluate_gradient(s, majorant.u, t, b) -
                         inv[t] * (2.0 * flux.field(t, b, x) + v);
        return lhs.dot(v);
      });
  res.total = res.first_sup + res.second_sup;
  return res;
}

AppendixBounds appendix_bounds(const NcMajorantResult& majorant, const NcMinorantResult& minorant,
                               std::span<const double> thetas) {
  AppendixBounds out;
  for (double theta : thetas) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
      throw ParameterError("theta must be positive, got " + std::to_string(theta));
    }
    out.majorants.push_back({theta, (1.0 + 4.0 / theta) * majorant.first_inf +
                                        (4.0 + theta) * majorant.second_inf});
  }
  out.minorant = minorant.first_sup;
  return out;
}

PointVectorField exact_gradient_ball(const ProblemSpec& problem) {
  if (problem.obstacle != Obstacle::Ball) {
    throw UsageError("the exact solution is only known for the ball");
  }
  const double u0 = problem.boundary_value;
  return [u0](std::size_t, const Barycentric&, const Vec3& x) {
    const double r = x.norm();
    return Vec3(-u0 * x / (r * r * r));
  };
}

double nc_exact_error_ball(const TetMesh& mesh, const FluxApproximation& flux,
                           const ProblemSpec& problem) {
  const PointVectorField exact = exact_gradient_ball(problem);
  const std::vector<Mat3> inv = checked_inverses(problem.coefficient);
  const double interior =
      problem.multiplicity *
      integrate(mesh, [&](std::size_t t, const Barycentric& b, const Vec3& x) {
        const Vec3 d = exact(t, b, x) - inv[t] * flux.field(t, b, x);
        return d.dot(problem.coefficient[t] * d);
      });
  return interior + tail_energy(problem.boundary_value - flux.zeta, problem.radius);
}

}  // namespace exbound
