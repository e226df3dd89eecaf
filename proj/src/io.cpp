#include "memdg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "memdg/errors.hpp"

namespace memdg {

std::string format_error(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string format_rate(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void write_csv(const ConvergenceTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "cells,dofs,err_L2S,rate_L2S,err_LinfL2,rate_LinfL2\n";
  for (const auto& r : table.rows)
    out << r.cells << ',' << r.dofs << ',' << format_error(r.err_l2s) << ','
        << format_rate(r.rate_l2s) << ',' << format_error(r.err_linf_l2) << ','
        << format_rate(r.rate_linf_l2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

ConvergenceTable parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty csv: " + path);
  if (line != "cells,dofs,err_L2S,rate_L2S,err_LinfL2,rate_LinfL2")
    throw IoError("unexpected csv header in " + path);
  ConvergenceTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    while (fields.size() < 6) fields.push_back("");
    if (fields.size() != 6) throw IoError("bad csv row: " + line);
    ConvergenceRow r;
    r.cells = std::stoi(fields[0]);
    r.dofs = std::stoi(fields[1]);
    r.err_l2s = std::stod(fields[2]);
    r.rate_l2s = fields[3].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(fields[3]);
    r.err_linf_l2 = std::stod(fields[4]);
    r.rate_linf_l2 = fields[5].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(fields[5]);
    table.rows.push_back(r);
  }
  return table;
}

void write_vtk(const FeSpace& space, const Vec& state, const std::string& path,
               const std::vector<std::string>& field_names) {
  const Mesh& mesh = space.mesh();
  const int ne = mesh.n_elements();
  const int ncomp = space.n_components();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");

  out << "# vtk DataFile Version 3.0\n";
  out << "dg solution snapshot\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << 4 * ne << " double\n";
  // Corner order matches the element's counter-clockwise vertex order.
  const Point2 corners[4] = {{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}};
  char buf[96];
  for (int e = 0; e < ne; ++e)
    for (const Point2& c : corners) {
      const Point2 p = mesh.from_reference(e, c);
      std::snprintf(buf, sizeof buf, "%.15g %.15g 0\n", p.x, p.y);
      out << buf;
    }
  out << "CELLS " << ne << ' ' << 5 * ne << '\n';
  for (int e = 0; e < ne; ++e)
    out << "4 " << 4 * e << ' ' << 4 * e + 1 << ' ' << 4 * e + 2 << ' ' << 4 * e + 3 << '\n';
  out << "CELL_TYPES " << ne << '\n';
  for (int e = 0; e < ne; ++e) out << "9\n";

  out << "POINT_DATA " << 4 * ne << '\n';
  for (int i = 0; i < ncomp; ++i) {
    const std::string name =
        i < static_cast<int>(field_names.size()) ? field_names[i] : "field" + std::to_string(i);
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int e = 0; e < ne; ++e)
      for (const Point2& c : corners) {
        std::snprintf(buf, sizeof buf, "%.15g\n", space.value_at(state, e, i, c));
        out << buf;
      }
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_matrix_market(const SpMat& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  char buf[64];
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (SpMat::InnerIterator it(matrix, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.16e\n", static_cast<long>(it.row() + 1),
                    static_cast<long>(it.col() + 1), it.value());
      out << buf;
    }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace memdg
