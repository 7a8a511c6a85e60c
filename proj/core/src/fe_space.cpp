#include "exbound/fe_space.hpp"

#include <cmath>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "exbound/errors.hpp"
#include "mesh_internal.hpp"

namespace exbound {

FeSpace::FeSpace(std::shared_ptr<const TetMesh> mesh, int degree, int components)
    : mesh_(std::move(mesh)), degree_(degree), components_(components) {
  if (!mesh_) throw UsageError("finite element space needs a mesh");
  if (degree_ != 1 && degree_ != 2) throw ParameterError("degree must be 1 or 2");
  if (components_ != 1 && components_ != 3) throw ParameterError("components must be 1 or 3");

  const TetMesh& m = *mesh_;
  const std::size_t nv = m.num_vertices();
  const int npt = nodes_per_tet();
  node_coords_ = m.vertices();
  tet_nodes_.resize(m.num_tets() * npt);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
  for (std::size_t t = 0; t < m.num_tets(); ++t) {
    const Tet& k = m.tet(t);
    for (int a = 0; a < 4; ++a) tet_nodes_[t * npt + a] = k[a];
    if (degree_ == 2) {
      for (int e = 0; e < 6; ++e) {
        std::size_t a = k[detail::kTetEdges[e][0]], b = k[detail::kTetEdges[e][1]];
        if (a > b) std::swap(a, b);
        auto [it, inserted] = edge_index.emplace(std::make_pair(a, b), nv + num_edges_);
        if (inserted) {
          ++num_edges_;
          node_coords_.push_back(0.5 * (m.vertex(a) + m.vertex(b)));
        }
        tet_nodes_[t * npt + 4 + e] = it->second;
      }
    }
  }

  node_tags_.assign(node_coords_.size(), 0);
  for (const BoundaryFace& f : m.boundary_faces()) {
    const auto bit = static_cast<std::uint8_t>(1u << static_cast<int>(f.tag));
    for (std::size_t v : f.vertices) node_tags_[v] |= bit;
    if (degree_ == 2) {
      for (int i = 0; i < 3; ++i) {
        std::size_t a = f.vertices[i], b = f.vertices[(i + 1) % 3];
        if (a > b) std::swap(a, b);
        auto it = edge_index.find({a, b});
        if (it != edge_index.end()) node_tags_[it->second] |= bit;
      }
    }
  }

  geometry_.resize(m.num_tets());
  for (std::size_t t = 0; t < m.num_tets(); ++t) {
    const Tet& k = m.tet(t);
    Eigen::Matrix3d jac;
    for (int c = 0; c < 3; ++c) jac.col(c) = m.vertex(k[c + 1]) - m.vertex(k[0]);
    const double det = jac.determinant();
    if (!(det > 0.0)) {
      throw UsageError("degenerate or inverted tet " + std::to_string(t));
    }
    const Eigen::Matrix3d inv = jac.inverse();
    TetGeometry& g = geometry_[t];
    g.volume = det / 6.0;
    for (int c = 0; c < 3; ++c) g.grad_lambda[c + 1] = inv.row(c).transpose();
    g.grad_lambda[0] = -(g.grad_lambda[1] + g.grad_lambda[2] + g.grad_lambda[3]);
  }
}

Vec3 FeSpace::point(std::size_t t, const Barycentric& bary) const {
  const Tet& k = mesh_->tet(t);
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < 4; ++a) x += bary[a] * mesh_->vertex(k[a]);
  return x;
}

void FeSpace::shape_values(const Barycentric& l, std::span<double> out) const {
  if (degree_ == 1) {
    for (int a = 0; a < 4; ++a) out[a] = l[a];
    return;
  }
  for (int a = 0; a < 4; ++a) out[a] = l[a] * (2.0 * l[a] - 1.0);
  for (int e = 0; e < 6; ++e) {
    out[4 + e] = 4.0 * l[detail::kTetEdges[e][0]] * l[detail::kTetEdges[e][1]];
  }
}

void FeSpace::shape_bary_derivatives(const Barycentric& l,
                                     std::span<std::array<double, 4>> out) const {
  for (int a = 0; a < nodes_per_tet(); ++a) out[a] = {0.0, 0.0, 0.0, 0.0};
  if (degree_ == 1) {
    for (int a = 0; a < 4; ++a) out[a][a] = 1.0;
    return;
  }
  for (int a = 0; a < 4; ++a) out[a][a] = 4.0 * l[a] - 1.0;
  for (int e = 0; e < 6; ++e) {
    const int i = detail::kTetEdges[e][0], j = detail::kTetEdges[e][1];
    out[4 + e][i] = 4.0 * l[j];
    out[4 + e][j] = 4.0 * l[i];
  }
}

void FeSpace::shape_gradients(std::size_t t, const Barycentric& bary,
                              std::span<Vec3> out) const {
  std::array<std::array<double, 4>, 10> d{};
  shape_bary_derivatives(bary, d);
  const auto& gl = geometry_[t].grad_lambda;
  for (int a = 0; a < nodes_per_tet(); ++a) {
    out[a] = d[a][0] * gl[0] + d[a][1] * gl[1] + d[a][2] * gl[2] + d[a][3] * gl[3];
  }
}

std::vector<ShapeAtPoint> FeSpace::tabulate(const QuadratureRule& rule) const {
  std::vector<ShapeAtPoint> table;
  table.reserve(rule.size());
  for (const QuadraturePoint& qp : rule.points()) {
    ShapeAtPoint s{qp.weight, qp.bary, std::vector<double>(nodes_per_tet()),
                   std::vector<std::array<double, 4>>(nodes_per_tet())};
    shape_values(qp.bary, s.values);
    shape_bary_derivatives(qp.bary, s.d_bary);
    table.push_back(std::move(s));
  }
  return table;
}

namespace {

void check_finite(double v, std::size_t node) {
  if (!std::isfinite(v)) {
    throw DataError("non-finite value at node " + std::to_string(node));
  }
}

void check_tet(const FeSpace& space, std::size_t t) {
  if (t >= space.num_tets()) {
    throw ParameterError("tet index " + std::to_string(t) + " out of range");
  }
}

}  // namespace

Eigen::VectorXd interpolate(const FeSpace& space, const ScalarFunction& f) {
  if (!space.is_scalar()) throw UsageError("scalar interpolation into a vector space");
  Eigen::VectorXd c(space.num_dofs());
  for (std::size_t n = 0; n < space.num_nodes(); ++n) {
    c[n] = f(space.node_coordinate(n));
    check_finite(c[n], n);
  }
  return c;
}

Eigen::VectorXd interpolate(const FeSpace& space, const VectorFunction& f) {
  if (space.is_scalar()) throw UsageError("vector interpolation into a scalar space");
  Eigen::VectorXd c(space.num_dofs());
  for (std::size_t n = 0; n < space.num_nodes(); ++n) {
    const Vec3 v = f(space.node_coordinate(n));
    for (int k = 0; k < 3; ++k) {
      check_finite(v[k], n);
      c[space.dof(n, k)] = v[k];
    }
  }
  return c;
}

double evaluate_value(const FeSpace& space, const Eigen::VectorXd& coeffs, std::size_t t,
                      const Barycentric& bary) {
  if (!space.is_scalar()) throw UsageError("scalar evaluation of a vector space");
  check_tet(space, t);
  std::array<double, 10> n{};
  space.shape_values(bary, n);
  const auto nodes = space.tet_nodes(t);
  double v = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a) v += n[a] * coeffs[nodes[a]];
  return v;
}

Vec3 evaluate_vector(const FeSpace& space, const Eigen::VectorXd& coeffs, std::size_t t,
                     const Barycentric& bary) {
  if (space.is_scalar()) throw UsageError("vector evaluation of a scalar space");
  check_tet(space, t);
  std::array<double, 10> n{};
  space.shape_values(bary, n);
  const auto nodes = space.tet_nodes(t);
  Vec3 v = Vec3::Zero();
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (int k = 0; k < 3; ++k) v[k] += n[a] * coeffs[space.dof(nodes[a], k)];
  }
  return v;
}

Vec3 evaluate_gradient(const FeSpace& space, const Eigen::VectorXd& coeffs, std::size_t t,
                       const Barycentric& bary) {
  if (!space.is_scalar()) throw UsageError("gradient evaluation of a vector space");
  check_tet(space, t);
  std::array<Vec3, 10> g;
  space.shape_gradients(t, bary, g);
  const auto nodes = space.tet_nodes(t);
  Vec3 v = Vec3::Zero();
  for (std::size_t a = 0; a < nodes.size(); ++a) v += coeffs[nodes[a]] * g[a];
  return v;
}

double evaluate_divergence(const FeSpace& space, const Eigen::VectorXd& coeffs, std::size_t t,
                           const Barycentric& bary) {
  if (space.is_scalar()) throw UsageError("divergence of a scalar space");
  check_tet(space, t);
  std::array<Vec3, 10> g;
  space.shape_gradients(t, bary, g);
  const auto nodes = space.tet_nodes(t);
  double d = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (int k = 0; k < 3; ++k) d += coeffs[space.dof(nodes[a], k)] * g[a][k];
  }
  return d;
}

}  // namespace exbound
