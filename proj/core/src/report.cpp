#include "exbound/report.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "exbound/errors.hpp"

namespace exbound {

namespace {

std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_number(double value) { return fmt::format("{:.6e}", value); }

std::string format_percent(double fraction) { return fmt::format("{:.2f}", 100.0 * fraction); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw UsageError("CSV table needs at least one column");
}

void CsvTable::Row::push(std::string cell) {
  if (cells_.size() == table_.header_.size()) {
    throw UsageError("CSV row has more cells than the header");
  }
  cells_.push_back(std::move(cell));
}

CsvTable::Row& CsvTable::Row::text(std::string_view value) {
  push(quote(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::integer(long long value) {
  push(std::to_string(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::number(double value) {
  push(format_number(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::number(std::optional<double> value) {
  push(value ? format_number(*value) : std::string());
  return *this;
}

CsvTable::Row& CsvTable::Row::percent(double fraction) {
  push(format_percent(fraction));
  return *this;
}

void CsvTable::commit(Row& row) {
  if (&row.table_ != this) throw UsageError("row belongs to another table");
  if (row.cells_.size() != header_.size()) {
    throw UsageError(fmt::format("CSV row has {} cells, header has {}", row.cells_.size(),
                                 header_.size()));
  }
  rows_.push_back(std::move(row.cells_));
  row.cells_.clear();
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  std::vector<std::string> quoted;
  for (const auto& h : header_) quoted.push_back(quote(h));
  line(quoted);
  for (const auto& r : rows_) line(r);
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out = open_output(path);
  write(out);
  if (!out) throw Error("failed writing '" + path + "'");
}

void write_vtk(const TetMesh& mesh, const std::vector<CellField>& fields, std::ostream& out) {
  for (const auto& [name, values] : fields) {
    if (values.size() != mesh.num_tets()) {
      throw UsageError(fmt::format("cell field '{}' has {} values for {} tets", name,
                                   values.size(), mesh.num_tets()));
    }
    if (name.empty() || name.find_first_of(" \t\n") != std::string::npos) {
      throw UsageError("VTK field names must be non-empty without whitespace");
    }
  }
  out << "# vtk DataFile Version 3.0\n"
      << "exbound cell data\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vec3& v : mesh.vertices()) {
    out << fmt::format("{:.17g} {:.17g} {:.17g}\n", v.x(), v.y(), v.z());
  }
  out << "CELLS " << mesh.num_tets() << ' ' << 5 * mesh.num_tets() << '\n';
  for (const Tet& t : mesh.tets()) {
    out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  }
  out << "CELL_TYPES " << mesh.num_tets() << '\n';
  for (std::size_t i = 0; i < mesh.num_tets(); ++i) out << "10\n";
  if (fields.empty()) return;
  out << "CELL_DATA " << mesh.num_tets() << '\n';
  for (const auto& [name, values] : fields) {
    out << "SCALARS " << name << " double 1\n"
        << "LOOKUP_TABLE default\n";
    for (double v : values) out << fmt::format("{:.6e}\n", v);
  }
}

void write_vtk(const TetMesh& mesh, const std::vector<CellField>& fields,
               const std::string& path) {
  std::ofstream out = open_output(path);
  write_vtk(mesh, fields, out);
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace exbound
