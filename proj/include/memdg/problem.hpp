#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "memdg/mesh.hpp"

namespace memdg {

using Vec = Eigen::VectorXd;
using Mat2 = Eigen::Matrix<double, Eigen::Dynamic, 2>;  // n rows of 2-vectors

/// Exact solution supplied per compartment branch, for error measurement and
/// the elliptic-projection initial condition.
struct ExactField {
  std::function<Vec(double t, Point2 x, int subdomain)> value;
  std::function<Mat2(double t, Point2 x, int subdomain)> gradient;
  std::function<Vec(double t, Point2 x, int subdomain)> time_derivative;  // optional
};

/// Coefficients, data and reaction of the parabolic system
///   u_t - div(A grad u - U B) + F(u) = f,
/// with diagonal diffusion A = diag(a_i), advection rows B_i, and mixed
/// Dirichlet/Neumann boundary conditions per component. Coefficients take the
/// compartment index since they may jump across the membrane.
struct ProblemDefinition {
  int n_components = 1;
  double alpha_min = 0.0;  // declared uniform lower bound on the a_i
  double gamma = 0.0;      // reaction growth exponent

  std::function<Vec(double t, Point2 x, int subdomain)> diffusion;      // a_i
  std::function<Mat2(double t, Point2 x, int subdomain)> advection;     // rows B_i
  std::function<Vec(double t, Point2 x, int subdomain)> advection_div;  // optional
  std::function<Vec(const Vec& u, Point2 x, int subdomain)> reaction;   // F(u)
  std::function<Vec(double t, Point2 x, int subdomain)> forcing;        // f
  std::function<Vec(double t, Point2 x)> dirichlet_data;                // g_D
  std::function<Vec(double t, Point2 x)> neumann_data;                  // g_N
  std::function<Vec(Point2 x, int subdomain)> initial;                  // u_0
  BoundarySpec boundary = BoundarySpec::all_dirichlet();
  std::optional<ExactField> exact;

  /// div B_i rows, analytic when supplied, else central differences (1e-6).
  Vec divergence_of_advection(double t, Point2 x, int subdomain) const;

  /// Sanity warnings: gamma outside [0,2], empty Dirichlet part, ...
  std::vector<std::string> validate(const Mesh& mesh, double t = 0.0) const;
};

/// Membrane closure: diffusive flux function, weights and friction.
struct InterfaceModel {
  int n_components = 1;
  bool permeability_is_constant = true;
  Eigen::MatrixXd P;  // used when permeability_is_constant
  /// Diffusive flux p~(u1, u2); defaults to P * (u1 - u2).
  std::function<Vec(const Vec& u1, const Vec& u2)> diffusive_flux;
  /// Optional analytic Jacobian of p~ with respect to (u1, u2): n x 2n.
  std::function<Eigen::MatrixXd(const Vec&, const Vec&)> diffusive_flux_jacobian;
  std::function<Vec(Point2 x)> weight1;   // upsilon^1 per component
  std::function<Vec(Point2 x)> weight2;   // upsilon^2 per component
  std::function<Vec(Point2 x)> friction;  // r per component, in [0,1]

  Vec flux(const Vec& u1, const Vec& u2) const {
    if (diffusive_flux) return diffusive_flux(u1, u2);
    return P * (u1 - u2);
  }

  /// Throws on weight-sum violation; returns warnings (upwind dominance, ranges).
  std::vector<std::string> validate(const Mesh& mesh, const ProblemDefinition& problem,
                                    double t = 0.0) const;
};

InterfaceModel make_constant_interface(const Eigen::MatrixXd& P, const Vec& upsilon1,
                                       const Vec& upsilon2, const Vec& friction);

/// Diagonal upwinding weights on the interface at a quadrature point:
/// (upsilon^1_i - 1/2) * (B_i . n)|_1, with n the compartment-1 outward normal.
Vec interface_upwind(const InterfaceModel& model, const ProblemDefinition& problem,
                     double t, Point2 x, Point2 n1);

struct PenaltyConfig {
  double c_sigma = 10.0;
  PenaltyConfig() = default;
  explicit PenaltyConfig(double c) : c_sigma(c) {
    if (!(c > 1.0)) throw std::invalid_argument("PenaltyConfig: c_sigma must exceed 1");
  }
};

/// Convenience wrappers for constant data.
std::function<Vec(double, Point2, int)> constant_field(const Vec& v);
std::function<Mat2(double, Point2, int)> constant_advection(const Mat2& b);
std::function<Vec(double, Point2)> constant_boundary_data(const Vec& v);
std::function<Vec(double, Point2, int)> zero_source(int n);

}  // namespace memdg
