#include "memdg/quadrature.hpp"

#include <cmath>

#include "memdg/errors.hpp"

namespace memdg {

namespace {

// Legendre value and derivative at x via the three-term recurrence.
void legendre_pair(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule gauss_legendre_1d(int npts) {
  if (npts < 1 || npts > 30)
    throw UnsupportedOrder("gauss_legendre_1d: npts must be in [1, 30], got " +
                           std::to_string(npts));
  QuadratureRule rule;
  rule.points.resize(npts);
  rule.weights.resize(npts);
  rule.exactness = 2 * npts - 1;
  // Newton iteration from the Chebyshev-based initial guess; symmetric pairs.
  for (int i = 0; i < (npts + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(npts, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_pair(npts, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = -x;
    rule.points[npts - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[npts - 1 - i] = w;
  }
  if (npts % 2 == 1) rule.points[npts / 2] = 0.0;
  return rule;
}

QuadratureRule2D tensor_rule(const QuadratureRule& line) {
  QuadratureRule2D r;
  const int n = line.size();
  r.points.reserve(n * n);
  r.weights.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      r.points.push_back({line.points[i], line.points[j]});
      r.weights.push_back(line.weights[i] * line.weights[j]);
    }
  return r;
}

}  // namespace memdg
