#pragma once

#include <vector>

#include "memdg/geometry.hpp"

namespace memdg {

/// 1D quadrature rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness = 0;  // exact for polynomials up to this degree
  int size() const { return static_cast<int>(points.size()); }
};

/// Tensor-product rule on the reference square [-1,1]^2.
struct QuadratureRule2D {
  std::vector<Point2> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre rule with npts nodes, exact through degree 2*npts-1.
/// Throws UnsupportedOrder outside 1 <= npts <= 30.
QuadratureRule gauss_legendre_1d(int npts);

QuadratureRule2D tensor_rule(const QuadratureRule& line);

}  // namespace memdg
