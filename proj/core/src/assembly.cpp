#include "exbound/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "exbound/errors.hpp"

namespace exbound {

namespace {

void require_vector(const FeSpace& space, const char* what) {
  if (space.is_scalar()) throw UsageError(std::string(what) + " needs a vector space");
}

void require_scalar(const FeSpace& space, const char* what) {
  if (!space.is_scalar()) throw UsageError(std::string(what) + " needs a scalar space");
}

void require_coefficient_size(const FeSpace& space, std::span<const Mat3> coefficient) {
  if (coefficient.size() != space.num_tets()) {
    throw UsageError("coefficient field has " + std::to_string(coefficient.size()) +
                     " entries for " + std::to_string(space.num_tets()) + " tets");
  }
}

// Physical gradients of all local shape functions at one tabulated point.
void gradients(const FeSpace& space, std::size_t t, const ShapeAtPoint& s,
               std::array<Vec3, 10>& out) {
  const auto& gl = space.geometry(t).grad_lambda;
  for (int a = 0; a < space.nodes_per_tet(); ++a) {
    const auto& d = s.d_bary[a];
    out[a] = d[0] * gl[0] + d[1] * gl[1] + d[2] * gl[2] + d[3] * gl[3];
  }
}

// Adds a local matrix over local dofs (node-major, component-minor).
void scatter(CsrMatrix& m, const FeSpace& space, std::size_t t, const Eigen::MatrixXd& local) {
  const auto nodes = space.tet_nodes(t);
  const int nc = space.components();
  const auto n = static_cast<int>(nodes.size());
  for (int a = 0; a < n; ++a) {
    for (int ca = 0; ca < nc; ++ca) {
      const std::size_t row = space.dof(nodes[a], ca);
      for (int b = 0; b < n; ++b) {
        for (int cb = 0; cb < nc; ++cb) {
          const double v = local(a * nc + ca, b * nc + cb);
          if (v != 0.0) m.add(row, space.dof(nodes[b], cb), v);
        }
      }
    }
  }
}

}  // namespace

CsrMatrix make_pattern(const FeSpace& space) {
  std::vector<std::vector<std::size_t>> node_adj(space.num_nodes());
  for (std::size_t t = 0; t < space.num_tets(); ++t) {
    const auto nodes = space.tet_nodes(t);
    for (std::size_t a : nodes) node_adj[a].insert(node_adj[a].end(), nodes.begin(), nodes.end());
  }
  const int nc = space.components();
  std::vector<std::vector<std::size_t>> pattern(space.num_dofs());
  for (std::size_t n = 0; n < space.num_nodes(); ++n) {
    auto& adj = node_adj[n];
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    std::vector<std::size_t> cols;
    cols.reserve(adj.size() * nc);
    for (std::size_t m : adj) {
      for (int c = 0; c < nc; ++c) cols.push_back(space.dof(m, c));
    }
    for (int c = 0; c < nc; ++c) pattern[space.dof(n, c)] = cols;
    adj.clear();
    adj.shrink_to_fit();
  }
  return CsrMatrix::from_pattern(space.num_dofs(), pattern);
}

std::vector<Mat3> checked_inverses(std::span<const Mat3> coefficient) {
  std::vector<Mat3> inv(coefficient.size());
  for (std::size_t t = 0; t < coefficient.size(); ++t) {
    const Mat3& a = coefficient[t];
    const double scale = a.cwiseAbs().maxCoeff();
    if (!a.allFinite() || !(scale > 0.0) || (a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw CoefficientError("coefficient on tet " + std::to_string(t) + " is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(a);
    if (!(eig.eigenvalues().minCoeff() > 0.0)) {
      throw CoefficientError("coefficient on tet " + std::to_string(t) +
                             " is not positive definite");
    }
    inv[t] = a.inverse();
  }
  return inv;
}

CsrMatrix assemble_stiffness(const FeSpace& space, std::span<const Mat3> coefficient,
                             const QuadratureRule& rule) {
  require_scalar(space, "stiffness assembly");
  require_coefficient_size(space, coefficient);
  checked_inverses(coefficient);
  CsrMatrix m = make_pattern(space);
  const auto table = space.tabulate(rule);
  const int n = space.nodes_per_tet();
  Eigen::MatrixXd local(n, n);
  std::array<Vec3, 10> g;
  for (std::size_t t = 0; t < space.num_tets(); ++t) {
    local.setZero();
    const double jac = 6.0 * space.geometry(t).volume;
    const Mat3& a = coefficient[t];
    for (const ShapeAtPoint& s : table) {
      gradients(space, t, s, g);
      const double w = s.weight * jac;
      for (int i = 0; i < n; ++i) {
        const Vec3 ag = a * g[i];
        for (int j = 0; j < n; ++j) local(i, j) += w * ag.dot(g[j]);
      }
    }
    scatter(m, space, t, local);
  }
  return m;
}

CsrMatrix assemble_weighted_div_form(const FeSpace& space, const QuadratureRule& rule) {
  require_vector(space, "weighted divergence form");
  CsrMatrix m = make_pattern(space);
  const auto table = space.tabulate(rule);
  const int n = space.nodes_per_tet();
  Eigen::MatrixXd local(3 * n, 3 * n);
  Eigen::VectorXd div(3 * n);
  std::array<Vec3, 10> g;
  for (std::size_t t = 0; t < space.num_tets(); ++t) {
    local.setZero();
    const double jac = 6.0 * space.geometry(t).volume;
    for (const ShapeAtPoint& s : table) {
      gradients(space, t, s, g);
      const Vec3 x = space.point(t, s.bary);
      const double w = s.weight * jac * (1.0 + x.squaredNorm());
      // div of (phi_a e_c) is d phi_a / d x_c
      for (int a = 0; a < n; ++a) {
        for (int c = 0; c < 3; ++c) div[3 * a + c] = g[a][c];
      }
      local.noalias() += w * div * div.transpose();
    }
    scatter(m, space, t, local);
  }
  return m;
}

CsrMatrix assemble_vector_mass(const FeSpace& space, std::span<const Mat3> coefficient,
                               const QuadratureRule& rule) {
  require_vector(space, "vector mass assembly");
  require_coefficient_size(space, coefficient);
  const std::vector<Mat3> inv = checked_inverses(coefficient);
  CsrMatrix m = make_pattern(space);
  const auto table = space.tabulate(rule);
  const int n = space.nodes_per_tet();
  Eigen::MatrixXd scalar_mass(n, n);
  Eigen::MatrixXd local(3 * n, 3 * n);
  for (std::size_t t = 0; t < space.num_tets(); ++t) {
    scalar_mass.setZero();
    const double jac = 6.0 * space.geometry(t).volume;
    for (const ShapeAtPoint& s : table) {
      const double w = s.weight * jac;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) scalar_mass(i, j) += w * s.values[i] * s.values[j];
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) local.block<3, 3>(3 * i, 3 * j) = scalar_mass(i, j) * inv[t];
    }
    scatter(m, space, t, local);
  }
  return m;
}

Eigen::VectorXd assemble_source_load(const FeSpace& space, const PointScalarField& f,
                                     const QuadratureRule& rule) {
  require_scalar(space, "source load");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.num_dofs()));
  const auto table = space.tabulate(rule);
  for (std::size_t t = 0; t < space.num_tets(); ++t) {
    const double jac = 6.0 * space.geometry(t).volume;
    const auto nodes = space.tet_nodes(t);
    for (const ShapeAtPoint& s : table) {
      const double w = s.weight * jac * f(t, s.bary, space.point(t, s.bary));
      if (w == 0.0) continue;
      for (std::size_t a = 0; a < nodes.size(); ++a) b[nodes[a]] += w * s.values[a];
    }
  }
  return b;
}

Eigen::VectorXd assemble_gradient_load(const FeSpace& space, const PointVectorField& g,
                                       const QuadratureRule& rule) {
  require_scalar(space, "gradient load");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.num_dofs()));
  const auto table = space.tabulate(rule);
  std::array<Vec3, 10> grads;
  for (std::size_t t = 0; t < space.num_tets(); ++t) {
    const double jac = 6.0 * space.geometry(t).volume;
    const auto nodes = space.tet_nodes(t);
    for (const ShapeAtPoint& s : table) {
      gradients(space, t, s, grads);
      const Vec3 v = s.weight * jac * g(t, s.bary, space.point(t, s.bary));
      for (std::size_t a = 0; a < nodes.size(); ++a) b[nodes[a]] += v.dot(grads[a]);
    }
  }
  return b;
}

Eigen::VectorXd assemble_field_load(const FeSpace& space, const PointVectorField& g,
                                    const QuadratureRule& rule) {
  require_vector(space, "field load");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.num_dofs()));
  const auto table = space.tabulate(rule);
  for (std::size_t t = 0; t < space.num_tets(); ++t) {
    const double jac = 6.0 * space.geometry(t).volume;
    const auto nodes = space.tet_nodes(t);
    for (const ShapeAtPoint& s : table) {
      const Vec3 v = s.weight * jac * g(t, s.bary, space.point(t, s.bary));
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        for (int c = 0; c < 3; ++c) b[space.dof(nodes[a], c)] += v[c] * s.values[a];
      }
    }
  }
  return b;
}

Eigen::VectorXd assemble_weighted_div_load(const FeSpace& space, const PointScalarField& f,
                                           const QuadratureRule& rule) {
  require_vector(space, "weighted divergence load");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.num_dofs()));
  const auto table = space.tabulate(rule);
  std::array<Vec3, 10> grads;
  for (std::size_t t = 0; t < space.num_tets(); ++t) {
    const double jac = 6.0 * space.geometry(t).volume;
    const auto nodes = space.tet_nodes(t);
    for (const ShapeAtPoint& s : table) {
      const Vec3 x = space.point(t, s.bary);
      const double w = s.weight * jac * (1.0 + x.squaredNorm()) * f(t, s.bary, x);
      if (w == 0.0) continue;
      gradients(space, t, s, grads);
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        for (int c = 0; c < 3; ++c) b[space.dof(nodes[a], c)] += w * grads[a][c];
      }
    }
  }
  return b;
}

std::vector<double> integrate_per_tet(const TetMesh& mesh, const PointScalarField& h,
                                      const QuadratureRule& rule) {
  std::vector<double> out(mesh.num_tets(), 0.0);
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const Tet& k = mesh.tet(t);
    const double jac = 6.0 * mesh.signed_volume(t);
    double s = 0.0;
    for (const QuadraturePoint& qp : rule.points()) {
      Vec3 x = Vec3::Zero();
      for (int a = 0; a < 4; ++a) x += qp.bary[a] * mesh.vertex(k[a]);
      s += qp.weight * h(t, qp.bary, x);
    }
    out[t] = jac * s;
  }
  return out;
}

double integrate(const TetMesh& mesh, const PointScalarField& h, const QuadratureRule& rule) {
  double total = 0.0;
  for (double v : integrate_per_tet(mesh, h, rule)) total += v;
  return total;
}

PointVectorField gradient_field(const FeSpace& space, const Eigen::VectorXd& coeffs) {
  return [&space, &coeffs](std::size_t t, const Barycentric& b, const Vec3&) {
    return evaluate_gradient(space, coeffs, t, b);
  };
}

PointVectorField vector_field(const FeSpace& space, const Eigen::VectorXd& coeffs) {
  return [&space, &coeffs](std::size_t t, const Barycentric& b, const Vec3&) {
    return evaluate_vector(space, coeffs, t, b);
  };
}

PointScalarField value_field(const FeSpace& space, const Eigen::VectorXd& coeffs) {
  return [&space, &coeffs](std::size_t t, const Barycentric& b, const Vec3&) {
    return evaluate_value(space, coeffs, t, b);
  };
}

PointScalarField divergence_field(const FeSpace& space, const Eigen::VectorXd& coeffs) {
  return [&space, &coeffs](std::size_t t, const Barycentric& b, const Vec3&) {
    return evaluate_divergence(space, coeffs, t, b);
  };
}

}  // namespace exbound
