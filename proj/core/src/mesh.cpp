#include "exbound/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <Eigen/Geometry>

#include "exbound/errors.hpp"
#include "mesh_internal.hpp"

namespace exbound {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Gamma:
      return "gamma";
    case BoundaryTag::SphereR:
      return "sphere";
    case BoundaryTag::SymX:
      return "symx";
    case BoundaryTag::SymY:
      return "symy";
    case BoundaryTag::SymZ:
      return "symz";
  }
  return "unknown";
}

std::optional<BoundaryTag> parse_boundary_tag(std::string_view text) {
  for (BoundaryTag tag : kAllBoundaryTags) {
    if (to_string(tag) == text) return tag;
  }
  return std::nullopt;
}

TetMesh::TetMesh(std::vector<Vec3> vertices, std::vector<Tet> tets, std::vector<int> regions,
                 std::vector<BoundaryFace> boundary_faces)
    : vertices_(std::move(vertices)),
      tets_(std::move(tets)),
      regions_(std::move(regions)),
      boundary_faces_(std::move(boundary_faces)) {}

double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

double TetMesh::signed_volume(std::size_t t) const {
  const Tet& k = tets_.at(t);
  return signed_tet_volume(vertices_[k[0]], vertices_[k[1]], vertices_[k[2]], vertices_[k[3]]);
}

double TetMesh::total_volume() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < tets_.size(); ++t) sum += signed_volume(t);
  return sum;
}

std::size_t TetMesh::count_faces(BoundaryTag tag) const {
  return static_cast<std::size_t>(std::count_if(
      boundary_faces_.begin(), boundary_faces_.end(),
      [tag](const BoundaryFace& f) { return f.tag == tag; }));
}

namespace detail {

FaceKey make_face_key(std::size_t a, std::size_t b, std::size_t c) {
  FaceKey key{a, b, c};
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace detail

std::vector<MeshDefect> validate(const TetMesh& mesh) {
  std::vector<MeshDefect> defects;
  const std::size_t nv = mesh.num_vertices();

  if (mesh.regions().size() != mesh.num_tets()) {
    defects.push_back({"region tags", mesh.regions().size(),
                       "region tag count differs from tet count"});
  }

  std::map<detail::FaceKey, std::vector<std::size_t>> face_tets;
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const Tet& k = mesh.tet(t);
    if (std::any_of(k.begin(), k.end(), [nv](std::size_t v) { return v >= nv; })) {
      defects.push_back({"vertex index", t, "invalid vertex index, tet " + std::to_string(t)});
      continue;
    }
    if (!(mesh.signed_volume(t) > 0.0)) {
      defects.push_back({"positive volume", t, "negative volume, tet " + std::to_string(t)});
    }
    for (const auto& lf : detail::kTetFaces) {
      face_tets[detail::make_face_key(k[lf[0]], k[lf[1]], k[lf[2]])].push_back(t);
    }
  }

  for (const auto& [key, owners] : face_tets) {
    if (owners.size() > 2) {
      defects.push_back({"face manifoldness", owners.front(),
                         "face shared by more than two tets, tet " +
                             std::to_string(owners.front())});
    }
  }

  std::map<detail::FaceKey, std::size_t> tagged;
  const auto& bfaces = mesh.boundary_faces();
  for (std::size_t i = 0; i < bfaces.size(); ++i) {
    const auto& v = bfaces[i].vertices;
    if (std::any_of(v.begin(), v.end(), [nv](std::size_t x) { return x >= nv; })) {
      defects.push_back({"vertex index", i, "invalid vertex index, boundary face " +
                                                std::to_string(i)});
      continue;
    }
    const auto key = detail::make_face_key(v[0], v[1], v[2]);
    auto it = face_tets.find(key);
    if (it == face_tets.end() || it->second.size() != 1) {
      defects.push_back({"boundary face ownership", i,
                         "boundary face not on topological boundary, boundary face " +
                             std::to_string(i)});
    }
    if (!tagged.emplace(key, i).second) {
      defects.push_back({"unique tag", i, "multiply tagged boundary face " + std::to_string(i)});
    }
  }

  for (const auto& [key, owners] : face_tets) {
    if (owners.size() == 1 && !tagged.contains(key)) {
      defects.push_back({"boundary coverage", owners.front(),
                         "uncovered boundary face, tet " + std::to_string(owners.front())});
    }
  }

  // All SphereR vertices share one radius.
  double radius = 0.0;
  for (const auto& f : bfaces) {
    if (f.tag != BoundaryTag::SphereR) continue;
    for (std::size_t v : f.vertices) {
      if (v < nv) radius = std::max(radius, mesh.vertex(v).norm());
    }
  }
  for (std::size_t i = 0; i < bfaces.size(); ++i) {
    if (bfaces[i].tag != BoundaryTag::SphereR) continue;
    for (std::size_t v : bfaces[i].vertices) {
      if (v < nv && std::abs(mesh.vertex(v).norm() - radius) > 1e-9 * radius) {
        defects.push_back({"sphere radius", i,
                           "sphere face vertex off the truncation sphere, boundary face " +
                               std::to_string(i)});
        break;
      }
    }
  }
  return defects;
}

}  // namespace exbound
