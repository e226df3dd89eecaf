#pragma once

#include <string>
#include <vector>

#include "memdg/harness.hpp"
#include "memdg/operators.hpp"

namespace memdg {

std::string format_error(double v);  // 4 significant digits, scientific
std::string format_rate(double v);   // 2 decimals, empty for NaN

/// Header cells,dofs,err_L2S,rate_L2S,err_LinfL2,rate_LinfL2; LF endings;
/// first-row rates written empty.
void write_csv(const ConvergenceTable& table, const std::string& path);
ConvergenceTable parse_csv(const std::string& path);

/// Legacy ASCII VTK unstructured grid with per-element corner duplication so
/// discontinuities render; one scalar POINT_DATA field per component.
void write_vtk(const FeSpace& space, const Vec& state, const std::string& path,
               const std::vector<std::string>& field_names);

/// MatrixMarket coordinate format (1-based, general real).
void write_matrix_market(const SpMat& matrix, const std::string& path);

}  // namespace memdg
