#pragma once

#include <Eigen/Dense>

#include "memdg/geometry.hpp"

namespace memdg {

/// Tensor-product Legendre basis on the reference square [-1,1]^2, modal
/// and L2-orthogonal. Mode (a,b) -> P_a(xi) * P_b(eta), flattened as
/// j = b*(m+1) + a. Degree m >= 0; size (m+1)^2.
class ReferenceBasis {
 public:
  explicit ReferenceBasis(int degree);

  int degree() const { return m_; }
  int size() const { return (m_ + 1) * (m_ + 1); }

  /// Values and reference-coordinate gradients of all basis functions at p.
  /// values: size nb; gradients: nb x 2 (d/dxi, d/deta).
  void eval(Point2 p, Eigen::VectorXd& values, Eigen::MatrixXd& gradients) const;

  Eigen::VectorXd eval_values(Point2 p) const;

  /// L2 norm squared of mode j over the reference square:
  /// (2/(2a+1)) * (2/(2b+1)).
  double ref_l2_squared(int j) const;

 private:
  int m_;
};

/// Legendre values P_0..P_m at x (helper shared with 1D trace evaluation).
void legendre_values(int m, double x, Eigen::VectorXd& p);
void legendre_values_derivs(int m, double x, Eigen::VectorXd& p, Eigen::VectorXd& dp);

}  // namespace memdg
