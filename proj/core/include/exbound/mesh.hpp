#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace exbound {

using Vec3 = Eigen::Vector3d;

// Boundary parts of the truncated computational domain. Gamma is the obstacle
// surface, SphereR the artificial truncation sphere, SymX/SymY/SymZ the
// coordinate planes x=0, y=0, z=0 bounding the octant.
enum class BoundaryTag : std::uint8_t { Gamma, SphereR, SymX, SymY, SymZ };

inline constexpr std::array<BoundaryTag, 5> kAllBoundaryTags = {
    BoundaryTag::Gamma, BoundaryTag::SphereR, BoundaryTag::SymX, BoundaryTag::SymY,
    BoundaryTag::SymZ};

std::string_view to_string(BoundaryTag tag);
std::optional<BoundaryTag> parse_boundary_tag(std::string_view text);

struct BoundaryFace {
  std::array<std::size_t, 3> vertices;
  BoundaryTag tag;

  bool operator==(const BoundaryFace&) const = default;
};

using Tet = std::array<std::size_t, 4>;

/// Tetrahedral mesh with tagged boundary faces.
///
/// The mesh stores exactly what it is given; invariants (positive orientation,
/// complete boundary tagging, sphere radius consistency) are checked by
/// validate() rather than enforced on construction, so defective meshes can be
/// represented and reported.
class TetMesh {
 public:
  TetMesh() = default;
  TetMesh(std::vector<Vec3> vertices, std::vector<Tet> tets, std::vector<int> regions,
          std::vector<BoundaryFace> boundary_faces);

  const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
  const std::vector<Tet>& tets() const noexcept { return tets_; }
  const std::vector<int>& regions() const noexcept { return regions_; }
  const std::vector<BoundaryFace>& boundary_faces() const noexcept { return boundary_faces_; }

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_tets() const noexcept { return tets_.size(); }

  const Vec3& vertex(std::size_t i) const { return vertices_[i]; }
  const Tet& tet(std::size_t t) const { return tets_[t]; }

  // Signed volume of tet t; positive for positively oriented tets.
  double signed_volume(std::size_t t) const;
  double total_volume() const;

  std::size_t count_faces(BoundaryTag tag) const;

  bool operator==(const TetMesh&) const = default;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Tet> tets_;
  std::vector<int> regions_;
  std::vector<BoundaryFace> boundary_faces_;
};

double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// --- generators -------------------------------------------------------------

// First-octant part of the spherical shell 1 < |x| < R.
TetMesh generate_ball_octant_shell(double radius, int n_radial, int n_angular);

// First-octant part of {|x| < R} minus the unit cube [0,1]^3 (one octant of the
// complement of [-1,1]^3).
TetMesh generate_cube_complement_octant(double radius, int n_radial, int n_angular);

// Closed-form tet counts of the two generators.
std::size_t ball_octant_tet_count(int n_radial, int n_angular);
std::size_t cube_octant_tet_count(int n_radial, int n_angular);

// Geometric ratio q such that first_layer * (1 + q + ... + q^(layers-1)) = length.
double radial_grading_ratio(double first_layer, double length, int layers);

// --- validation -------------------------------------------------------------

struct MeshDefect {
  std::string invariant;
  std::size_t index;
  std::string message;
};

std::vector<MeshDefect> validate(const TetMesh& mesh);

// --- TETMESH v1 text format ---------------------------------------------------

TetMesh read_mesh(std::istream& in);
TetMesh read_mesh(const std::string& path);
void write_mesh(const TetMesh& mesh, std::ostream& out);
void write_mesh(const TetMesh& mesh, const std::string& path);

}  // namespace exbound
