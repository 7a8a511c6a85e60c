#include "exbound/driver.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "exbound/approx.hpp"
#include "exbound/bounds_conforming.hpp"
#include "exbound/bounds_nonconforming.hpp"
#include "exbound/errors.hpp"
#include "exbound/report.hpp"

namespace exbound {

namespace fs = std::filesystem;

namespace {

// Relative slack allowed in every ordering check.
constexpr double kOrderingSlack = 1e-8;

std::string output_dir(const RunConfig& config, const RunOptions& options) {
  const std::string dir = options.out_dir.value_or(config.output_dir);
  fs::create_directories(dir);
  return dir;
}

std::string path_in(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void check_le(double lower, double upper, const std::string& what) {
  const double scale = std::max(std::abs(lower), std::abs(upper));
  if (lower > upper + kOrderingSlack * scale) {
    throw BoundViolationError(fmt::format("{}: {:.10e} > {:.10e}", what, lower, upper));
  }
}

// Mesh from the output directory if present, generated otherwise.
std::shared_ptr<const TetMesh> obtain_mesh(const RunConfig& config, const LadderEntry& entry,
                                           const std::string& dir) {
  const std::string path = path_in(dir, run_label(config, entry) + ".tetmesh");
  TetMesh mesh = fs::exists(path) ? read_mesh(path) : generate_mesh(config, entry);
  const auto defects = validate(mesh);
  if (!defects.empty()) {
    throw DataError(fmt::format("mesh {} fails validation: {} ({})", path,
                                defects.front().invariant, defects.front().message));
  }
  return std::make_shared<const TetMesh>(std::move(mesh));
}

struct Solved {
  std::shared_ptr<const TetMesh> mesh;
  ProblemSpec problem;
  Alg1Result alg1;
};

Solved solve_entry(const RunConfig& config, const LadderEntry& entry, const std::string& dir,
                   std::ostream& log) {
  Solved s;
  s.mesh = obtain_mesh(config, entry, dir);
  s.problem = ProblemSpec::laplace(*s.mesh, config.radius, config.geometry, config.boundary_value);
  auto space = std::make_shared<const FeSpace>(s.mesh, config.degree, 1);
  s.alg1 = alg1_run(space, s.problem, config.solver);
  fmt::print(log, "{}: {} tets, zeta {:.8f} after {} iterations{}\n", run_label(config, entry),
             s.mesh->num_tets(), s.alg1.approx.zeta, s.alg1.trace.size(),
             s.alg1.converged ? "" : " (not converged)");
  return s;
}

std::string theta_column(double theta) { return fmt::format("appendix_majorant_theta_{:g}", theta); }

}  // namespace

std::string run_label(const RunConfig& config, const LadderEntry& entry) {
  return fmt::format("{}_R{:g}_{}x{}", to_string(config.geometry), config.radius, entry.n_radial,
                     entry.n_angular);
}

TetMesh generate_mesh(const RunConfig& config, const LadderEntry& entry) {
  return config.geometry == Obstacle::Ball
             ? generate_ball_octant_shell(config.radius, entry.n_radial, entry.n_angular)
             : generate_cube_complement_octant(config.radius, entry.n_radial, entry.n_angular);
}

int cmd_meshgen(const RunConfig& config, const RunOptions& options, std::ostream& log) {
  const std::string dir = output_dir(config, options);
  for (const LadderEntry& entry : config.ladder) {
    const TetMesh mesh = generate_mesh(config, entry);
    const std::string path = path_in(dir, run_label(config, entry) + ".tetmesh");
    write_mesh(mesh, path);
    fmt::print(log, "wrote {} ({} tets)\n", path, mesh.num_tets());
  }
  return kExitOk;
}

int cmd_solve(const RunConfig& config, const RunOptions& options, std::ostream& log) {
  const std::string dir = output_dir(config, options);
  CsvTable summary({"geometry", "n_radial", "n_angular", "tets", "radius", "zeta", "iterations",
                    "converged", "energy_interior_full", "energy_tail_full",
                    "source_work_full", "energy_total_full"});
  bool all_converged = true;
  for (const LadderEntry& entry : config.ladder) {
    const Solved s = solve_entry(config, entry, dir, log);
    all_converged = all_converged && s.alg1.converged;

    CsvTable trace({"iteration", "zeta", "energy_full", "zeta_rel_change", "cg_iterations"});
    for (const Alg1Iteration& it : s.alg1.trace) {
      auto row = trace.row();
      row.integer(static_cast<long long>(it.k)).number(it.zeta).number(it.energy)
          .number(it.residual).integer(static_cast<long long>(it.cg_iterations));
      trace.commit(row);
    }
    trace.write(path_in(dir, "trace_" + run_label(config, entry) + ".csv"));

    const EnergyBreakdown e = energy(s.alg1.approx, s.problem);
    auto row = summary.row();
    row.text(to_string(config.geometry)).integer(entry.n_radial).integer(entry.n_angular)
        .integer(static_cast<long long>(s.mesh->num_tets())).number(config.radius)
        .number(s.alg1.approx.zeta).integer(static_cast<long long>(s.alg1.trace.size()))
        .integer(s.alg1.converged ? 1 : 0).number(e.interior).number(e.tail)
        .number(e.source_work).number(e.total);
    summary.commit(row);
  }
  summary.write(path_in(dir, "solve.csv"));
  return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_bounds(const RunConfig& config, const RunOptions& options, std::ostream& log) {
  const std::string dir = output_dir(config, options);
  // Values are full-domain (octant x 8); *_pct columns are relative to |grad u|^2.
  CsvTable table({"geometry", "n_radial", "n_angular", "tets", "zeta", "beta",
                  "grad_u_sq_full", "majorant_sq_full", "oracle_sq_full", "minorant_full",
                  "majorant_pct", "oracle_pct", "minorant_pct", "efficiency"});
  bool all_converged = true;
  for (const LadderEntry& entry : config.ladder) {
    const Solved s = solve_entry(config, entry, dir, log);
    all_converged = all_converged && s.alg1.converged;
    const BoundReport rep = compute_bounds(s.alg1.approx, s.problem, config.majorant);
    const std::string label = run_label(config, entry);

    if (rep.oracle) {
      check_le(rep.minorant_value(), rep.oracle->total, label + ": minorant above exact error");
      check_le(rep.oracle->total, rep.majorant_sq(), label + ": exact error above majorant");
    } else {
      check_le(rep.minorant_value(), rep.majorant_sq(), label + ": minorant above majorant");
    }

    const double grad_sq = rep.energy_sq();
    auto row = table.row();
    row.text(to_string(config.geometry)).integer(entry.n_radial).integer(entry.n_angular)
        .integer(static_cast<long long>(s.mesh->num_tets())).number(s.alg1.approx.zeta);
    if (rep.majorant.beta_infinite) {
      row.text("inf");
    } else {
      row.number(rep.majorant.beta);
    }
    row.number(grad_sq).number(rep.majorant_sq())
        .number(rep.oracle ? std::optional(rep.oracle->total) : std::nullopt)
        .number(rep.minorant_value()).percent(rep.majorant_sq() / grad_sq);
    if (rep.oracle) {
      row.percent(rep.oracle->total / grad_sq);
    } else {
      row.text("");
    }
    row.percent(rep.minorant_value() / grad_sq).number(rep.efficiency());
    table.commit(row);

    std::vector<CellField> fields{{"indicator", rep.majorant.indicator}};
    if (rep.oracle) fields.emplace_back("exact_error", rep.oracle->per_tet);
    write_vtk(*s.mesh, fields, path_in(dir, "indicator_" + label + ".vtk"));
    fmt::print(log, "{}: majorant {:.2f}%, minorant {:.2f}%\n", label,
               100.0 * rep.majorant_sq() / grad_sq, 100.0 * rep.minorant_value() / grad_sq);
  }
  table.write(path_in(dir, "bounds.csv"));
  return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_nonconforming(const RunConfig& config, const RunOptions& options, std::ostream& log) {
  const std::string dir = output_dir(config, options);
  // All values full-domain (octant x 8). The reference is the exact solution
  // for the ball and a degree-2 surrogate solution for the cube; surrogate
  // errors are not bounds and are not checked against them.
  std::vector<std::string> header{"geometry", "n_radial", "n_angular", "delta", "reference",
                                  "minorant_sup_first", "minorant_sup_second", "nc_minorant",
                                  "oracle_sq_full", "surrogate_sq_full", "majorant_inf_first",
                                  "majorant_inf_second", "nc_majorant"};
  for (double theta : config.thetas) header.push_back(theta_column(theta));
  for (const char* h : {"appendix_minorant", "pythagoras_rel_defect", "orthogonality",
                        "psi_scale"}) {
    header.emplace_back(h);
  }
  CsvTable table(std::move(header));

  bool all_converged = true;
  for (const LadderEntry& entry : config.ladder) {
    const Solved s = solve_entry(config, entry, dir, log);
    all_converged = all_converged && s.alg1.converged;
    const std::string label = run_label(config, entry);
    const bool ball = config.geometry == Obstacle::Ball;

    PointVectorField reference;
    std::optional<Alg1Result> surrogate;
    if (ball) {
      reference = exact_gradient_ball(s.problem);
    } else {
      auto p2 = std::make_shared<const FeSpace>(s.mesh, 2, 1);
      surrogate = alg1_run(p2, s.problem, config.solver);
      all_converged = all_converged && surrogate->converged;
      const FluxApproximation sur = conforming_flux(surrogate->approx, s.problem);
      reference = [f = sur.field, inv = checked_inverses(s.problem.coefficient)](
                      std::size_t t, const Barycentric& b, const Vec3& x) {
        return Vec3(inv[t] * f(t, b, x));
      };
    }

    const double grad_norm =
        energy_norm(*s.alg1.approx.space, s.alg1.approx.coeffs, s.problem.coefficient);
    for (double delta : config.deltas) {
      const FluxApproximation flux =
          perturbed_flux(s.alg1.approx, s.problem,
                         fabricate_perturbation(*s.mesh, grad_norm, config.seed), delta);
      const NcMajorantResult maj = nc_majorant(s.mesh, flux, s.problem, config.majorant);
      const HelmholtzSplit split =
          helmholtz_split(s.mesh, reference, flux, s.problem, config.solver.cg);
      const NcMinorantResult min = nc_minorant(flux, s.problem, split, maj, config.solver.cg);
      const AppendixBounds app = appendix_bounds(maj, min, config.thetas);

      std::optional<double> oracle;
      std::optional<double> surrogate_sq;
      const std::string tag = fmt::format("{} delta {:g}", label, delta);
      if (ball) {
        oracle = nc_exact_error_ball(*s.mesh, flux, s.problem);
        check_le(min.total, *oracle, tag + ": minorant above exact error");
        check_le(*oracle, maj.total, tag + ": exact error above majorant");
      } else {
        surrogate_sq = split.e_sq +
                       tail_energy(surrogate->approx.zeta - flux.zeta, s.problem.radius);
        check_le(min.total, maj.total, tag + ": minorant above majorant");
      }
      for (const AppendixBound& b : app.majorants) {
        check_le(maj.total, b.majorant, fmt::format("{}: appendix bound below majorant at theta {:g}",
                                                    tag, b.theta));
      }
      check_le(app.minorant, min.total, tag + ": appendix minorant above minorant");

      auto row = table.row();
      row.text(to_string(config.geometry)).integer(entry.n_radial).integer(entry.n_angular)
          .number(delta).text(ball ? "exact" : "surrogate").number(min.first_sup)
          .number(min.second_sup).number(min.total).number(oracle).number(surrogate_sq)
          .number(maj.first_inf).number(maj.second_inf).number(maj.total);
      for (const AppendixBound& b : app.majorants) row.number(b.majorant);
      row.number(app.minorant)
          .number(split.e_sq > 0.0 ? (split.e_sq - split.grad_sq - split.psi_sq) / split.e_sq
                                   : 0.0)
          .number(split.orthogonality).number(min.scale);
      table.commit(row);
      fmt::print(log, "{}: nc minorant {:.6e}, nc majorant {:.6e}\n", tag, min.total, maj.total);
    }
  }
  table.write(path_in(dir, "nonconforming.csv"));
  return all_converged ? kExitOk : kExitNotConverged;
}

int run_command(std::string_view command, const std::string& config_path,
                const RunOptions& options, std::ostream& log, std::ostream& err) {
  try {
    const RunConfig config = load_config(config_path);
    if (command == "meshgen") return cmd_meshgen(config, options, log);
    if (command == "solve") return cmd_solve(config, options, log);
    if (command == "bounds") return cmd_bounds(config, options, log);
    if (command == "nonconforming") return cmd_nonconforming(config, options, log);
    fmt::print(err, "unknown command '{}'\n", command);
    return kExitConfig;
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const ParameterError& e) {
    fmt::print(err, "invalid parameter: {}\n", e.what());
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    fmt::print(err, "solver did not converge: {}\n", e.what());
    return kExitNotConverged;
  } catch (const BoundViolationError& e) {
    fmt::print(err, "bound violation: {}\n", e.what());
    return kExitBoundViolation;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
}

}  // namespace exbound
