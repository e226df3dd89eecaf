#pragma once

#include <Eigen/Sparse>

#include "memdg/fespace.hpp"
#include "memdg/problem.hpp"

namespace memdg {

/// Compressed row storage, sorted unique columns per row.
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Block-diagonal mass matrix; exactly diagonal with the Legendre basis on
/// affine cells.
SpMat assemble_mass(const FeSpace& space, int threads = 1);

/// Stiffness-transport operator: volume advection-diffusion, upwinded
/// interface advection, symmetric interior-penalty face terms, Dirichlet
/// penalty terms, and the advective Neumann outflow term.
/// Throws CoefficientSingular if a diffusion entry is nonpositive at a
/// quadrature point.
SpMat assemble_operator(const FeSpace& space, const ProblemDefinition& problem,
                        const InterfaceModel& iface, const PenaltyConfig& penalty,
                        double t, int threads = 1);

/// Boundary data functional: Dirichlet consistency/penalty terms and the
/// Neumann surface load.
Vec assemble_boundary_rhs(const FeSpace& space, const ProblemDefinition& problem,
                          const PenaltyConfig& penalty, double t, int threads = 1);

/// Moments of F(u_h) - f against the test basis. Throws NonFiniteValue
/// (reporting the element) if the reaction overflows.
Vec eval_reaction(const FeSpace& space, const ProblemDefinition& problem, const Vec& state,
                  double t, int threads = 1);

/// Broken energy norm: weighted gradients, the advective divergence term,
/// jump penalties on interior/Dirichlet faces, upwind jump terms away from
/// the interface, and the interface upwind jump term.
double dg_norm(const FeSpace& space, const ProblemDefinition& problem,
               const InterfaceModel& iface, const PenaltyConfig& penalty, const Vec& state,
               double t);

/// Same norm of u_h - u for an exact two-branch field u.
double dg_norm_error(const FeSpace& space, const ProblemDefinition& problem,
                     const InterfaceModel& iface, const PenaltyConfig& penalty,
                     const Vec& state, const ExactField& exact, double t);

double l2_norm(const FeSpace& space, const Vec& state);
double l2_error(const FeSpace& space, const Vec& state, const ExactField& exact, double t);

/// Max |u_h| sampled at the error-quadrature points and element corners.
double linf_estimate(const FeSpace& space, const Vec& state);

/// Per-element sup of |a_i| (used in the penalty weight).
Eigen::MatrixXd elementwise_diffusion_sup(const FeSpace& space,
                                          const ProblemDefinition& problem, double t);

/// Face penalty weights sigma_i = c_sigma * {|a_i|} * {m}^2 / {h}.
Vec face_penalty(const FeSpace& space, const PenaltyConfig& penalty,
                 const Eigen::MatrixXd& a_sup, const Face& face);

}  // namespace memdg
