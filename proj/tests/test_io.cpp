#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "memdg/cli.hpp"
#include "memdg/errors.hpp"
#include "memdg/io.hpp"

using namespace memdg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/memdg_io_test_") + name;
}

}  // namespace

TEST_CASE("error and rate formatting") {
  CHECK(format_error(0.054801) == "5.480e-02");
  CHECK(format_error(15.79) == "1.579e+01");
  CHECK(format_rate(1.9351) == "1.94");
  CHECK(format_rate(std::numeric_limits<double>::quiet_NaN()).empty());
}

TEST_CASE("csv writer layout") {
  ConvergenceTable table;
  const std::string path = temp_path("one_row.csv");

  SUBCASE("empty table is header only") {
    write_csv(table, path);
    CHECK(slurp(path) == "cells,dofs,err_L2S,rate_L2S,err_LinfL2,rate_LinfL2\n");
  }

  SUBCASE("one row, first rates empty") {
    ConvergenceRow r;
    r.cells = 4;
    r.dofs = 32;
    r.err_l2s = 15.79;
    r.err_linf_l2 = 2.498;
    table.rows.push_back(r);
    write_csv(table, path);
    CHECK(slurp(path) ==
          "cells,dofs,err_L2S,rate_L2S,err_LinfL2,rate_LinfL2\n"
          "4,32,1.579e+01,,2.498e+00,\n");
  }
}

TEST_CASE("csv round trip is stable for random tables") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> mag(-6.0, 3.0);
  std::uniform_real_distribution<double> rate(0.3, 3.7);
  for (int trial = 0; trial < 10; ++trial) {
    ConvergenceTable table;
    int cells = 4;
    for (int row = 0; row < 5; ++row) {
      ConvergenceRow r;
      r.cells = cells;
      r.dofs = 8 * cells;
      cells *= 4;
      r.err_l2s = std::pow(10.0, mag(rng));
      r.err_linf_l2 = std::pow(10.0, mag(rng));
      if (row > 0) {
        r.rate_l2s = rate(rng);
        r.rate_linf_l2 = rate(rng);
      }
      table.rows.push_back(r);
    }
    const std::string p1 = temp_path("rt1.csv"), p2 = temp_path("rt2.csv");
    write_csv(table, p1);
    const ConvergenceTable parsed = parse_csv(p1);
    write_csv(parsed, p2);
    CHECK(slurp(p1) == slurp(p2));
  }
}

TEST_CASE("csv parser rejects foreign headers") {
  const std::string path = temp_path("bad.csv");
  std::ofstream(path) << "a,b\n1,2\n";
  CHECK_THROWS_AS(parse_csv(path), IoError);
  CHECK_THROWS_AS(parse_csv("/nonexistent/nowhere.csv"), IoError);
  CHECK_THROWS_AS(write_csv(ConvergenceTable{}, "/nonexistent/nowhere.csv"), IoError);
}

namespace {

struct ParsedVtk {
  int n_points = 0;
  int n_cells = 0;
  std::vector<double> coords;
  std::vector<std::vector<double>> fields;
  std::vector<std::string> names;
};

ParsedVtk parse_vtk(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  ParsedVtk v;
  std::string line;
  std::getline(in, line);
  REQUIRE(line.rfind("# vtk DataFile", 0) == 0);
  std::getline(in, line);  // title
  std::getline(in, line);
  REQUIRE(line == "ASCII");
  std::getline(in, line);
  REQUIRE(line == "DATASET UNSTRUCTURED_GRID");
  std::string word;
  in >> word;
  REQUIRE(word == "POINTS");
  in >> v.n_points >> word;
  v.coords.resize(3 * v.n_points);
  for (double& c : v.coords) in >> c;
  int list = 0;
  in >> word;
  REQUIRE(word == "CELLS");
  in >> v.n_cells >> list;
  REQUIRE(list == 5 * v.n_cells);
  for (int i = 0; i < list; ++i) in >> word;
  in >> word;
  REQUIRE(word == "CELL_TYPES");
  int n = 0;
  in >> n;
  for (int i = 0; i < n; ++i) {
    int type = 0;
    in >> type;
    REQUIRE(type == 9);
  }
  in >> word;
  REQUIRE(word == "POINT_DATA");
  in >> n;
  REQUIRE(n == v.n_points);
  while (in >> word) {
    REQUIRE(word == "SCALARS");
    std::string name, type;
    int comps = 0;
    in >> name >> type >> comps;
    REQUIRE(comps == 1);
    in >> word >> word;  // LOOKUP_TABLE default
    std::vector<double> values(v.n_points);
    for (double& x : values) in >> x;
    v.names.push_back(name);
    v.fields.push_back(std::move(values));
  }
  return v;
}

}  // namespace

TEST_CASE("vtk writer") {
  const Mesh mesh = build_structured_mesh(Domain2D(-1, 1, -1, 1, 0.0), 2, 2);
  const FeSpace space(mesh, 1, 1);

  SUBCASE("constant state writes constant point scalars") {
    Vec state = Vec::Zero(space.total_dofs());
    for (int e = 0; e < 4; ++e) state[space.dofs()(e, 0, 0)] = 1.0;
    const std::string path = temp_path("const.vtk");
    write_vtk(space, state, path, {"u"});
    const ParsedVtk v = parse_vtk(path);
    CHECK(v.n_points == 16);
    CHECK(v.n_cells == 4);
    REQUIRE(v.fields.size() == 1);
    CHECK(v.names[0] == "u");
    for (double x : v.fields[0]) CHECK(x == doctest::Approx(1.0));
  }

  SUBCASE("membrane jumps survive through duplicated corners") {
    Vec state = Vec::Zero(space.total_dofs());
    for (int e = 0; e < 4; ++e)
      state[space.dofs()(e, 0, 0)] = mesh.element_subdomain[e] == 1 ? 0.0 : 1.0;
    const std::string path = temp_path("jump.vtk");
    write_vtk(space, state, path, {"u"});
    const ParsedVtk v = parse_vtk(path);
    int zeros_on_line = 0, ones_on_line = 0;
    for (int p = 0; p < v.n_points; ++p) {
      if (std::abs(v.coords[3 * p]) > 1e-12) continue;  // interface points only
      if (v.fields[0][p] < 0.5)
        ++zeros_on_line;
      else
        ++ones_on_line;
    }
    CHECK(zeros_on_line == 4);  // two left elements, two corners each
    CHECK(ones_on_line == 4);
  }

  SUBCASE("two components write two scalar fields") {
    const FeSpace space2(mesh, 1, 2);
    const std::string path = temp_path("two.vtk");
    write_vtk(space2, Vec::Zero(space2.total_dofs()), path, {"u", "v"});
    const ParsedVtk v = parse_vtk(path);
    REQUIRE(v.fields.size() == 2);
    CHECK(v.names[1] == "v");
  }
}

TEST_CASE("matrix market coordinate output") {
  SpMat A(2, 3);
  A.insert(0, 1) = 2.5;
  A.insert(1, 2) = -1.0;
  A.makeCompressed();
  const std::string path = temp_path("m.mtx");
  write_matrix_market(A, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real general");
  int rows = 0, cols = 0, nnz = 0;
  in >> rows >> cols >> nnz;
  CHECK(rows == 2);
  CHECK(cols == 3);
  CHECK(nnz == 2);
  int r = 0, c = 0;
  double v = 0.0;
  in >> r >> c >> v;
  CHECK(r == 1);
  CHECK(c == 2);
  CHECK(v == doctest::Approx(2.5));
}

TEST_CASE("cli parsing") {
  SUBCASE("stated fields with remaining defaults") {
    const ParsedCli parsed =
        parse_cli({"--experiment", "convergence", "--degree", "2", "--levels", "6"});
    CHECK_FALSE(parsed.help);
    const RunConfig& c = parsed.config;
    CHECK(c.experiment == "convergence");
    CHECK(c.degree == 2);
    CHECK(c.levels == 6);
    CHECK(c.dt == doctest::Approx(5e-4));
    CHECK(c.t_final == doctest::Approx(1.0));
    CHECK(c.sigma == doctest::Approx(10.0));
    CHECK(c.theta == doctest::Approx(0.5));
    CHECK(c.interface_mode == "explicit");
    CHECK(c.solver == "lu");
    CHECK(c.threads == 1);
  }

  SUBCASE("advection defaults differ") {
    const RunConfig c = parse_cli({"--experiment", "advection"}).config;
    CHECK(c.dt == doctest::Approx(1e-3));
    CHECK(c.t_final == doctest::Approx(2.0));
    const RunConfig explicit_dt =
        parse_cli({"--experiment", "advection", "--dt", "5e-4"}).config;
    CHECK(explicit_dt.dt == doctest::Approx(5e-4));
  }

  SUBCASE("bad input raises usage errors") {
    CHECK_THROWS_AS(parse_cli({}), UsageError);                                  // no args
    CHECK_THROWS_AS(parse_cli({"--experiment", "convergence", "--dt", "-1"}), UsageError);
    CHECK_THROWS_AS(parse_cli({"--experiment", "convergence", "--frobnicate"}), UsageError);
    CHECK_THROWS_AS(parse_cli({"--experiment", "squares"}), UsageError);
    CHECK_THROWS_AS(parse_cli({"--experiment", "custom"}), UsageError);  // needs --config
  }

  SUBCASE("help is reported, not thrown") {
    const ParsedCli parsed = parse_cli({"--help"});
    CHECK(parsed.help);
    CHECK(parsed.help_text.find("--experiment") != std::string::npos);
  }

  SUBCASE("identical flags hash identically") {
    const std::vector<std::string> flags{"--experiment", "advection", "--nx", "16",
                                         "--nx",         "64",        "--dt", "1e-3"};
    const RunConfig a = parse_cli(flags).config;
    const RunConfig b = parse_cli(flags).config;
    CHECK(a.nx == std::vector<int>{16, 64});
    CHECK(a.hash() == b.hash());
    const RunConfig c = parse_cli({"--experiment", "advection", "--dt", "2e-3"}).config;
    CHECK(a.hash() != c.hash());
  }
}
