#include "memdg/basis.hpp"

namespace memdg {

void legendre_values(int m, double x, Eigen::VectorXd& p) {
  p.resize(m + 1);
  p[0] = 1.0;
  if (m >= 1) p[1] = x;
  for (int k = 1; k < m; ++k)
    p[k + 1] = ((2 * k + 1) * x * p[k] - k * p[k - 1]) / (k + 1);
}

void legendre_values_derivs(int m, double x, Eigen::VectorXd& p, Eigen::VectorXd& dp) {
  legendre_values(m, x, p);
  dp.resize(m + 1);
  dp[0] = 0.0;
  if (m >= 1) dp[1] = 1.0;
  // P'_{k+1} = P'_{k-1} + (2k+1) P_k
  for (int k = 1; k < m; ++k) dp[k + 1] = dp[k - 1] + (2 * k + 1) * p[k];
}

ReferenceBasis::ReferenceBasis(int degree) : m_(degree) {
  if (degree < 0) throw std::invalid_argument("ReferenceBasis: degree < 0");
}

void ReferenceBasis::eval(Point2 pt, Eigen::VectorXd& values, Eigen::MatrixXd& gradients) const {
  Eigen::VectorXd px, dpx, py, dpy;
  legendre_values_derivs(m_, pt.x, px, dpx);
  legendre_values_derivs(m_, pt.y, py, dpy);
  const int nb = size();
  values.resize(nb);
  gradients.resize(nb, 2);
  for (int b = 0; b <= m_; ++b)
    for (int a = 0; a <= m_; ++a) {
      const int j = b * (m_ + 1) + a;
      values[j] = px[a] * py[b];
      gradients(j, 0) = dpx[a] * py[b];
      gradients(j, 1) = px[a] * dpy[b];
    }
}

Eigen::VectorXd ReferenceBasis::eval_values(Point2 pt) const {
  Eigen::VectorXd px, py;
  legendre_values(m_, pt.x, px);
  legendre_values(m_, pt.y, py);
  Eigen::VectorXd v(size());
  for (int b = 0; b <= m_; ++b)
    for (int a = 0; a <= m_; ++a) v[b * (m_ + 1) + a] = px[a] * py[b];
  return v;
}

double ReferenceBasis::ref_l2_squared(int j) const {
  const int a = j % (m_ + 1);
  const int b = j / (m_ + 1);
  return (2.0 / (2 * a + 1)) * (2.0 / (2 * b + 1));
}

}  // namespace memdg
