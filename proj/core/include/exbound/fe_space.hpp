#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "exbound/mesh.hpp"
#include "exbound/quadrature.hpp"

namespace exbound {

struct TetGeometry {
  double volume = 0.0;
  std::array<Vec3, 4> grad_lambda;  // gradients of the barycentric coordinates
};

// Shape function data of one quadrature point, independent of the element.
struct ShapeAtPoint {
  double weight;
  Barycentric bary;
  std::vector<double> values;                 // N_a
  std::vector<std::array<double, 4>> d_bary;  // dN_a / dlambda_k
};

/// Nodal Lagrange space of degree 1 or 2 with 1 or 3 components.
///
/// Nodes are the mesh vertices followed, for degree 2, by one node per edge
/// (at the edge midpoint). Vector dofs are interleaved: dof(node, c) =
/// node * components + c. Local node order per tet is the four vertices
/// followed by the edges (01, 02, 03, 12, 13, 23).
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const TetMesh> mesh, int degree, int components);

  const TetMesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const TetMesh>& mesh_ptr() const noexcept { return mesh_; }
  int degree() const noexcept { return degree_; }
  int components() const noexcept { return components_; }
  bool is_scalar() const noexcept { return components_ == 1; }

  std::size_t num_tets() const noexcept { return mesh_->num_tets(); }
  std::size_t num_nodes() const noexcept { return node_coords_.size(); }
  std::size_t num_dofs() const noexcept { return num_nodes() * components_; }
  std::size_t num_edges() const noexcept { return num_edges_; }
  int nodes_per_tet() const noexcept { return degree_ == 1 ? 4 : 10; }

  std::span<const std::size_t> tet_nodes(std::size_t t) const {
    return {tet_nodes_.data() + t * nodes_per_tet(), static_cast<std::size_t>(nodes_per_tet())};
  }
  std::size_t dof(std::size_t node, int component) const noexcept {
    return node * components_ + component;
  }
  const Vec3& node_coordinate(std::size_t node) const { return node_coords_[node]; }
  bool node_on(std::size_t node, BoundaryTag tag) const noexcept {
    return (node_tags_[node] >> static_cast<int>(tag)) & 1u;
  }

  const TetGeometry& geometry(std::size_t t) const { return geometry_[t]; }
  Vec3 point(std::size_t t, const Barycentric& bary) const;

  void shape_values(const Barycentric& bary, std::span<double> out) const;
  void shape_bary_derivatives(const Barycentric& bary,
                              std::span<std::array<double, 4>> out) const;
  // Physical gradients of the local shape functions of tet t.
  void shape_gradients(std::size_t t, const Barycentric& bary, std::span<Vec3> out) const;

  std::vector<ShapeAtPoint> tabulate(const QuadratureRule& rule) const;

 private:
  std::shared_ptr<const TetMesh> mesh_;
  int degree_;
  int components_;
  std::size_t num_edges_ = 0;
  std::vector<std::size_t> tet_nodes_;
  std::vector<Vec3> node_coords_;
  std::vector<std::uint8_t> node_tags_;
  std::vector<TetGeometry> geometry_;
};

using ScalarFunction = std::function<double(const Vec3&)>;
using VectorFunction = std::function<Vec3(const Vec3&)>;

// Nodal interpolation. Throws DataError on a non-finite value.
Eigen::VectorXd interpolate(const FeSpace& space, const ScalarFunction& f);
Eigen::VectorXd interpolate(const FeSpace& space, const VectorFunction& f);

double evaluate_value(const FeSpace& space, const Eigen::VectorXd& coeffs, std::size_t t,
                      const Barycentric& bary);
Vec3 evaluate_vector(const FeSpace& space, const Eigen::VectorXd& coeffs, std::size_t t,
                     const Barycentric& bary);
Vec3 evaluate_gradient(const FeSpace& space, const Eigen::VectorXd& coeffs, std::size_t t,
                       const Barycentric& bary);
double evaluate_divergence(const FeSpace& space, const Eigen::VectorXd& coeffs, std::size_t t,
                           const Barycentric& bary);

}  // namespace exbound
