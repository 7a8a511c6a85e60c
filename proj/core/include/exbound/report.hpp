#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exbound/mesh.hpp"

namespace exbound {

// "%.6e", the numeric format of every CSV column.
std::string format_number(double value);
// Percent with two decimals, e.g. 0.0457 -> "4.57".
std::string format_percent(double fraction);

/// Comma-separated table with a fixed header. Cells are formatted on insertion
/// so the output depends only on the values.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  class Row {
   public:
    Row& text(std::string_view value);
    Row& integer(long long value);
    Row& number(double value);
    Row& number(std::optional<double> value);  // empty cell when absent
    Row& percent(double fraction);

   private:
    friend class CsvTable;
    explicit Row(CsvTable& table) : table_(table) {}
    CsvTable& table_;
    std::vector<std::string> cells_;
    void push(std::string cell);
  };

  // The row is committed when the returned object's commit() is called.
  Row row() { return Row(*this); }
  void commit(Row& row);

  std::size_t num_rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& header() const noexcept { return header_; }

  void write(std::ostream& out) const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

using CellField = std::pair<std::string, std::vector<double>>;

// VTK legacy ASCII unstructured grid with one CELL_DATA scalar per field.
void write_vtk(const TetMesh& mesh, const std::vector<CellField>& fields, std::ostream& out);
void write_vtk(const TetMesh& mesh, const std::vector<CellField>& fields, const std::string& path);

}  // namespace exbound
