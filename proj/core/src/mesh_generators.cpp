#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include "exbound/errors.hpp"
#include "exbound/mesh.hpp"
#include "mesh_internal.hpp"

namespace exbound {

namespace {

struct SurfaceMesh {
  std::vector<Vec3> points;  // on the inner boundary
  std::vector<std::array<std::size_t, 3>> triangles;
};

struct FaceKeyHash {
  std::size_t operator()(const detail::FaceKey& k) const noexcept {
    std::size_t h = k[0];
    h = h * 1000003u ^ k[1];
    h = h * 1000003u ^ k[2];
    return h;
  }
};

// Octant of the unit sphere: barycentric grid on the triangle (e1, e2, e3),
// projected radially.
SurfaceMesh sphere_octant_surface(int m) {
  SurfaceMesh s;
  // index(i, j) for i + j <= m, row-major in i.
  std::vector<std::vector<std::size_t>> index(m + 1);
  for (int i = 0; i <= m; ++i) {
    index[i].resize(m + 1 - i);
    for (int j = 0; j + i <= m; ++j) {
      Vec3 p(m - i - j, i, j);
      p /= p.norm();
      index[i][j] = s.points.size();
      s.points.push_back(p);
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; i + j < m; ++j) {
      s.triangles.push_back({index[i][j], index[i + 1][j], index[i][j + 1]});
      if (i + j < m - 1) {
        s.triangles.push_back({index[i + 1][j], index[i + 1][j + 1], index[i][j + 1]});
      }
    }
  }
  return s;
}

// The three unit squares {x_k = 1} bounding [0,1]^3 from the first octant.
SurfaceMesh cube_octant_surface(int m) {
  SurfaceMesh s;
  std::map<std::array<int, 3>, std::size_t> index;
  auto node = [&](std::array<int, 3> key) {
    auto [it, inserted] = index.emplace(key, s.points.size());
    if (inserted) {
      s.points.emplace_back(static_cast<double>(key[0]) / m, static_cast<double>(key[1]) / m,
                            static_cast<double>(key[2]) / m);
      for (int c = 0; c < 3; ++c) {
        if (key[c] == m) s.points.back()[c] = 1.0;
      }
    }
    return it->second;
  };
  for (int face = 0; face < 3; ++face) {
    const int a_axis = (face + 1) % 3;
    const int b_axis = (face + 2) % 3;
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        auto key = [&](int da, int db) {
          std::array<int, 3> k{};
          k[face] = m;
          k[a_axis] = a + da;
          k[b_axis] = b + db;
          return node(k);
        };
        const std::size_t p00 = key(0, 0), p10 = key(1, 0), p01 = key(0, 1), p11 = key(1, 1);
        s.triangles.push_back({p00, p10, p11});
        s.triangles.push_back({p00, p11, p01});
      }
    }
  }
  return s;
}

// Fractions s_0 = 0 < s_1 < ... < s_k = 1 of a geometric layering whose first
// layer has physical thickness first_layer out of length.
std::vector<double> layer_fractions(double first_layer, double length, int layers) {
  const double q = radial_grading_ratio(first_layer, length, layers);
  std::vector<double> s(layers + 1, 0.0);
  double acc = 0.0, step = 1.0;
  for (int l = 1; l <= layers; ++l) {
    acc += step;
    step *= q;
    s[l] = acc;
  }
  for (int l = 1; l < layers; ++l) s[l] /= acc;
  s[layers] = 1.0;
  return s;
}

// Extrudes the surface along rays from the origin: layer l holds
// position(point, l). Each prism is split into three tets with diagonals chosen
// from the surface vertex order, which keeps shared quad faces conforming.
template <typename Position>
TetMesh extrude(const SurfaceMesh& surface, int layers, double radius, Position position) {
  const std::size_t ns = surface.points.size();
  std::vector<Vec3> vertices;
  vertices.reserve(ns * (layers + 1));
  for (int l = 0; l <= layers; ++l) {
    for (const Vec3& p : surface.points) vertices.push_back(position(p, l));
  }

  std::vector<Tet> tets;
  tets.reserve(3 * surface.triangles.size() * layers);
  for (int l = 0; l < layers; ++l) {
    for (auto tri : surface.triangles) {
      std::sort(tri.begin(), tri.end());
      const std::size_t b0 = l * ns + tri[0], b1 = l * ns + tri[1], b2 = l * ns + tri[2];
      const std::size_t t0 = b0 + ns, t1 = b1 + ns, t2 = b2 + ns;
      for (Tet k : {Tet{b0, b1, b2, t0}, Tet{b1, b2, t0, t1}, Tet{b2, t0, t1, t2}}) {
        if (signed_tet_volume(vertices[k[0]], vertices[k[1]], vertices[k[2]], vertices[k[3]]) <
            0.0) {
          std::swap(k[2], k[3]);
        }
        tets.push_back(k);
      }
    }
  }

  std::unordered_map<detail::FaceKey, int, FaceKeyHash> counts;
  counts.reserve(tets.size() * 4);
  for (const Tet& k : tets) {
    for (const auto& lf : detail::kTetFaces) {
      ++counts[detail::make_face_key(k[lf[0]], k[lf[1]], k[lf[2]])];
    }
  }

  std::vector<BoundaryFace> bfaces;
  for (const Tet& k : tets) {
    for (const auto& lf : detail::kTetFaces) {
      const std::array<std::size_t, 3> f{k[lf[0]], k[lf[1]], k[lf[2]]};
      if (counts.at(detail::make_face_key(f[0], f[1], f[2])) != 1) continue;
      auto on_plane = [&](int axis) {
        return std::all_of(f.begin(), f.end(),
                           [&](std::size_t v) { return vertices[v][axis] == 0.0; });
      };
      BoundaryTag tag = BoundaryTag::Gamma;
      if (on_plane(0)) {
        tag = BoundaryTag::SymX;
      } else if (on_plane(1)) {
        tag = BoundaryTag::SymY;
      } else if (on_plane(2)) {
        tag = BoundaryTag::SymZ;
      } else if (std::all_of(f.begin(), f.end(), [&](std::size_t v) {
                   return vertices[v].norm() >= radius * (1.0 - 1e-9);
                 })) {
        tag = BoundaryTag::SphereR;
      }
      bfaces.push_back({f, tag});
    }
  }

  std::vector<int> regions(tets.size(), 0);
  return TetMesh(std::move(vertices), std::move(tets), std::move(regions), std::move(bfaces));
}

void check_counts(int n_radial, int n_angular) {
  if (n_radial < 1) throw ParameterError("n_radial must be at least 1");
  if (n_angular < 1) throw ParameterError("n_angular must be at least 1");
}

}  // namespace

double radial_grading_ratio(double first_layer, double length, int layers) {
  if (!(first_layer > 0.0) || !(length > 0.0) || layers < 1) {
    throw ParameterError("radial grading needs positive sizes and at least one layer");
  }
  if (layers == 1) return 1.0;
  const double target = length / first_layer;
  auto sum = [layers](double q) {
    double s = 0.0, p = 1.0;
    for (int i = 0; i < layers; ++i) {
      s += p;
      p *= q;
    }
    return s;
  };
  if (std::abs(target - layers) <= 1e-14 * layers) return 1.0;
  double lo = target > layers ? 1.0 : 0.0;
  double hi = target > layers ? std::max(2.0, target) : 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sum(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::size_t ball_octant_tet_count(int n_radial, int n_angular) {
  return 3u * static_cast<std::size_t>(n_radial) * n_angular * n_angular;
}

std::size_t cube_octant_tet_count(int n_radial, int n_angular) {
  return 18u * static_cast<std::size_t>(n_radial) * n_angular * n_angular;
}

TetMesh generate_ball_octant_shell(double radius, int n_radial, int n_angular) {
  if (!(radius > 1.0)) throw ParameterError("ball shell needs R > 1");
  check_counts(n_radial, n_angular);
  const SurfaceMesh surface = sphere_octant_surface(n_angular);
  const double facet = 0.5 * std::numbers::pi / n_angular;
  const std::vector<double> s = layer_fractions(facet, radius - 1.0, n_radial);
  return extrude(surface, n_radial, radius, [&](const Vec3& p, int l) -> Vec3 {
    if (l == 0) return p;
    if (l == n_radial) return radius * p;
    return (1.0 + s[l] * (radius - 1.0)) * p;
  });
}

TetMesh generate_cube_complement_octant(double radius, int n_radial, int n_angular) {
  if (!(radius > std::sqrt(3.0))) {
    throw ParameterError("cube complement needs R > sqrt(3)");
  }
  check_counts(n_radial, n_angular);
  const SurfaceMesh surface = cube_octant_surface(n_angular);
  const double facet = 1.0 / n_angular;
  const std::vector<double> s = layer_fractions(facet, radius - 1.0, n_radial);
  return extrude(surface, n_radial, radius, [&](const Vec3& p, int l) -> Vec3 {
    if (l == 0) return p;
    const Vec3 outer = (radius / p.norm()) * p;
    if (l == n_radial) return outer;
    return p + s[l] * (outer - p);
  });
}

}  // namespace exbound
