#include <sstream>

#include <gtest/gtest.h>

#include "exbound/errors.hpp"
#include "exbound/report.hpp"

using namespace exbound;

TEST(Format, NumbersAndPercent) {
  EXPECT_EQ(format_number(0.0457), "4.570000e-02");
  EXPECT_EQ(format_number(-1234.5), "-1.234500e+03");
  EXPECT_EQ(format_percent(0.0457), "4.57");
  EXPECT_EQ(format_percent(0.0375), "3.75");
  EXPECT_EQ(format_percent(0.00626), "0.63");
}

TEST(Csv, WritesHeaderAndRows) {
  CsvTable t({"name", "value", "pct", "opt"});
  auto r = t.row();
  r.text("a,b").number(1.5).percent(0.25).number(std::optional<double>{});
  t.commit(r);
  std::ostringstream out;
  t.write(out);
  EXPECT_EQ(out.str(), "name,value,pct,opt\n\"a,b\",1.500000e+00,25.00,\n");
}

TEST(Csv, RowWidthIsChecked) {
  CsvTable t({"a", "b"});
  auto r = t.row();
  r.integer(1);
  EXPECT_THROW(t.commit(r), UsageError);
  r.integer(2);
  EXPECT_THROW(r.integer(3), UsageError);
}

TEST(Vtk, LegacyUnstructuredGridWithCellData) {
  const TetMesh mesh = generate_ball_octant_shell(5.0, 1, 1);
  std::vector<double> values(mesh.num_tets(), 0.5);
  std::ostringstream out;
  write_vtk(mesh, {{"indicator", values}}, out);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
  EXPECT_NE(s.find("DATASET UNSTRUCTURED_GRID"), std::string::npos);
  EXPECT_NE(s.find("CELLS " + std::to_string(mesh.num_tets()) + " " +
                   std::to_string(5 * mesh.num_tets())), std::string::npos);
  EXPECT_NE(s.find("CELL_DATA " + std::to_string(mesh.num_tets())), std::string::npos);
  EXPECT_NE(s.find("SCALARS indicator double 1"), std::string::npos);
}

TEST(Vtk, FieldSizeMismatch) {
  const TetMesh mesh = generate_ball_octant_shell(5.0, 1, 1);
  std::ostringstream out;
  EXPECT_THROW(write_vtk(mesh, {{"x", std::vector<double>(1)}}, out), UsageError);
  EXPECT_THROW(write_vtk(mesh, {{"two words", std::vector<double>(mesh.num_tets())}}, out),
               UsageError);
}
