#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "exbound/errors.hpp"
#include "exbound/mesh.hpp"

using namespace exbound;

TEST(Generators, BallTetCountMatchesClosedForm) {
  for (auto [k, m] : {std::pair{1, 1}, {2, 3}, {4, 4}}) {
    const TetMesh mesh = generate_ball_octant_shell(5.0, k, m);
    EXPECT_EQ(mesh.num_tets(), ball_octant_tet_count(k, m));
    EXPECT_EQ(mesh.num_tets(), 3u * k * m * m);
  }
}

TEST(Generators, CubeTetCountMatchesClosedForm) {
  for (auto [k, m] : {std::pair{1, 1}, {2, 3}}) {
    const TetMesh mesh = generate_cube_complement_octant(10.0, k, m);
    EXPECT_EQ(mesh.num_tets(), cube_octant_tet_count(k, m));
    EXPECT_EQ(mesh.num_tets(), 18u * k * m * m);
  }
}

TEST(Generators, GeneratedMeshesValidate) {
  EXPECT_TRUE(validate(generate_ball_octant_shell(5.0, 3, 4)).empty());
  EXPECT_TRUE(validate(generate_cube_complement_octant(10.0, 3, 4)).empty());
}

TEST(Generators, BallVerticesLieInShell) {
  const TetMesh mesh = generate_ball_octant_shell(5.0, 3, 3);
  for (const Vec3& v : mesh.vertices()) {
    EXPECT_GE(v.norm(), 1.0 - 1e-12);
    EXPECT_LE(v.norm(), 5.0 + 1e-12);
    EXPECT_GE(v.minCoeff(), -1e-14);
  }
}

TEST(Generators, BallVolumeApproachesShellOctant) {
  // Octant of the shell between radii 1 and 5.
  const double exact = std::numbers::pi / 6.0 * (125.0 - 1.0);
  const double coarse = generate_ball_octant_shell(5.0, 4, 4).total_volume();
  const double fine = generate_ball_octant_shell(5.0, 4, 12).total_volume();
  EXPECT_LT(coarse, exact);
  EXPECT_LT(std::abs(fine - exact), std::abs(coarse - exact));
  EXPECT_NEAR(fine, exact, 0.02 * exact);
}

TEST(Generators, CubeVolumeApproachesOctantMinusCube) {
  const double exact = std::numbers::pi / 6.0 * 1000.0 - 1.0;
  const double fine = generate_cube_complement_octant(10.0, 4, 12).total_volume();
  EXPECT_NEAR(fine, exact, 0.02 * exact);
}

TEST(Generators, BoundaryTagsPresent) {
  const TetMesh mesh = generate_ball_octant_shell(5.0, 2, 2);
  for (BoundaryTag tag : kAllBoundaryTags) EXPECT_GT(mesh.count_faces(tag), 0u);
}

TEST(Generators, RejectInvalidParameters) {
  EXPECT_THROW(generate_ball_octant_shell(1.0, 2, 2), ParameterError);
  EXPECT_THROW(generate_cube_complement_octant(1.7, 2, 2), ParameterError);
  EXPECT_THROW(generate_ball_octant_shell(5.0, 0, 2), ParameterError);
}

TEST(Generators, RadialGradingSumsToLength) {
  const double q = radial_grading_ratio(0.1, 4.0, 10);
  double sum = 0.0;
  double layer = 0.1;
  for (int i = 0; i < 10; ++i, layer *= q) sum += layer;
  EXPECT_NEAR(sum, 4.0, 1e-10);
}

TEST(Validate, DetectsInvertedTet) {
  const TetMesh good = generate_ball_octant_shell(5.0, 2, 2);
  auto tets = good.tets();
  std::swap(tets[3][0], tets[3][1]);
  const auto defects = validate(TetMesh(good.vertices(), tets, good.regions(), good.boundary_faces()));
  ASSERT_FALSE(defects.empty());
  EXPECT_EQ(defects.front().invariant, "positive volume");
}

TEST(Validate, DetectsMissingBoundaryFace) {
  const TetMesh good = generate_ball_octant_shell(5.0, 2, 2);
  auto faces = good.boundary_faces();
  faces.erase(faces.begin());
  EXPECT_FALSE(validate(TetMesh(good.vertices(), good.tets(), good.regions(), faces)).empty());
}

TEST(Validate, DetectsDoubleTaggedFace) {
  const TetMesh good = generate_ball_octant_shell(5.0, 2, 2);
  auto faces = good.boundary_faces();
  faces.push_back({faces.front().vertices, BoundaryTag::SymZ});
  EXPECT_FALSE(validate(TetMesh(good.vertices(), good.tets(), good.regions(), faces)).empty());
}

TEST(Validate, DetectsVertexOffSphere) {
  const TetMesh good = generate_ball_octant_shell(5.0, 2, 2);
  auto verts = good.vertices();
  for (const BoundaryFace& f : good.boundary_faces()) {
    if (f.tag == BoundaryTag::SphereR) {
      verts[f.vertices[1]] *= 0.98;
      break;
    }
  }
  EXPECT_FALSE(validate(TetMesh(verts, good.tets(), good.regions(), good.boundary_faces())).empty());
}

TEST(MeshIo, RoundTripIsIdentity) {
  for (const TetMesh& mesh : {generate_ball_octant_shell(5.0, 2, 3),
                              generate_cube_complement_octant(10.0, 2, 2)}) {
    std::stringstream io;
    write_mesh(mesh, io);
    EXPECT_EQ(read_mesh(io), mesh);
  }
}

TEST(MeshIo, WriteIsDeterministic) {
  const TetMesh mesh = generate_ball_octant_shell(5.0, 2, 2);
  std::ostringstream a, b;
  write_mesh(mesh, a);
  write_mesh(mesh, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(MeshIo, BadHeaderReportsLineOne) {
  std::istringstream in("TETMESH v2\n");
  try {
    read_mesh(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(MeshIo, TruncatedFileIsParseError) {
  const TetMesh mesh = generate_ball_octant_shell(5.0, 1, 1);
  std::ostringstream out;
  write_mesh(mesh, out);
  const std::string text = out.str();
  std::istringstream in(text.substr(0, text.size() / 2));
  EXPECT_THROW(read_mesh(in), ParseError);
}

TEST(BoundaryTagNames, RoundTrip) {
  for (BoundaryTag tag : kAllBoundaryTags) EXPECT_EQ(parse_boundary_tag(to_string(tag)), tag);
  EXPECT_FALSE(parse_boundary_tag("Inner").has_value());
}
