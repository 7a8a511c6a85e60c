#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "exbound/errors.hpp"
#include "exbound/mesh.hpp"

namespace exbound {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(const char* expecting) {
    std::string line;
    if (!std::getline(in_, line)) {
      throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + expecting);
    }
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return std::istringstream(line);
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

void expect_end(std::istringstream& ss, std::size_t line) {
  std::string extra;
  if (ss >> extra) throw ParseError(line, "trailing token '" + extra + "'");
}

std::size_t read_count(LineReader& reader, const std::string& keyword) {
  auto ss = reader.next(keyword.c_str());
  std::string word;
  long long n = -1;
  if (!(ss >> word) || word != keyword) {
    throw ParseError(reader.line(), "expected '" + keyword + " <count>'");
  }
  if (!(ss >> n) || n < 0) throw ParseError(reader.line(), "invalid " + keyword + " count");
  expect_end(ss, reader.line());
  return static_cast<std::size_t>(n);
}

std::size_t read_index(std::istringstream& ss, std::size_t bound, std::size_t line) {
  long long v = -1;
  if (!(ss >> v)) throw ParseError(line, "expected vertex index");
  if (v < 0 || static_cast<unsigned long long>(v) >= bound) {
    throw ParseError(line, "vertex index " + std::to_string(v) + " out of range");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

TetMesh read_mesh(std::istream& in) {
  LineReader reader(in);
  {
    auto ss = reader.next("header");
    std::string magic, version;
    ss >> magic >> version;
    if (magic != "TETMESH" || version != "v1") {
      throw ParseError(reader.line(), "expected header 'TETMESH v1'");
    }
    expect_end(ss, reader.line());
  }

  const std::size_t nv = read_count(reader, "vertices");
  std::vector<Vec3> vertices(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    auto ss = reader.next("vertex");
    for (int c = 0; c < 3; ++c) {
      std::string tok;
      if (!(ss >> tok)) throw ParseError(reader.line(), "expected three coordinates");
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(reader.line(), "invalid coordinate '" + tok + "'");
      }
      vertices[i][c] = value;
    }
    expect_end(ss, reader.line());
  }

  const std::size_t nt = read_count(reader, "tets");
  std::vector<Tet> tets(nt);
  std::vector<int> regions(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    auto ss = reader.next("tet");
    for (int c = 0; c < 4; ++c) tets[t][c] = read_index(ss, nv, reader.line());
    if (!(ss >> regions[t])) throw ParseError(reader.line(), "expected region tag");
    expect_end(ss, reader.line());
  }

  const std::size_t nf = read_count(reader, "bfaces");
  std::vector<BoundaryFace> faces(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    auto ss = reader.next("boundary face");
    for (int c = 0; c < 3; ++c) faces[f].vertices[c] = read_index(ss, nv, reader.line());
    std::string tag;
    if (!(ss >> tag)) throw ParseError(reader.line(), "expected boundary tag");
    const auto parsed = parse_boundary_tag(tag);
    if (!parsed) throw ParseError(reader.line(), "unknown boundary tag '" + tag + "'");
    faces[f].tag = *parsed;
    expect_end(ss, reader.line());
  }

  return TetMesh(std::move(vertices), std::move(tets), std::move(regions), std::move(faces));
}

TetMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(const TetMesh& mesh, std::ostream& out) {
  fmt::print(out, "TETMESH v1\nvertices {}\n", mesh.num_vertices());
  for (const Vec3& x : mesh.vertices()) {
    fmt::print(out, "{:.17g} {:.17g} {:.17g}\n", x[0], x[1], x[2]);
  }
  fmt::print(out, "tets {}\n", mesh.num_tets());
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const Tet& k = mesh.tet(t);
    const int region = t < mesh.regions().size() ? mesh.regions()[t] : 0;
    fmt::print(out, "{} {} {} {} {}\n", k[0], k[1], k[2], k[3], region);
  }
  fmt::print(out, "bfaces {}\n", mesh.boundary_faces().size());
  for (const BoundaryFace& f : mesh.boundary_faces()) {
    fmt::print(out, "{} {} {} {}\n", f.vertices[0], f.vertices[1], f.vertices[2],
               to_string(f.tag));
  }
}

void write_mesh(const TetMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write mesh file '" + path + "'");
  write_mesh(mesh, out);
  if (!out) throw Error("failed writing mesh file '" + path + "'");
}

}  // namespace exbound
