#pragma once

#include "memdg/operators.hpp"

namespace memdg {

/// Membrane form: moments of
///   ( p~(w1, w2) - (I - R)({W B} + B_I [[w]]) ) : [[v]]
/// over the interface faces, assembled against the test basis.
Vec eval_interface_form(const FeSpace& space, const InterfaceModel& model,
                        const ProblemDefinition& problem, const Vec& state, double t,
                        int threads = 1);

/// Matrix K with K w == eval_interface_form(w) for every state w; exact when
/// the permeability is constant, else throws NotLinear.
SpMat linearize_interface_form(const FeSpace& space, const InterfaceModel& model,
                               const ProblemDefinition& problem, double t);

/// Finite-difference Jacobian of eval_interface_form at the given state, with
/// step 1e-6 * (1 + |state|_inf); columns are restricted to the dofs of
/// interface-adjacent elements (the form does not see the rest).
SpMat interface_jacobian_fd(const FeSpace& space, const InterfaceModel& model,
                            const ProblemDefinition& problem, const Vec& state, double t);

/// Jacobian assembled from the model's analytic flux derivative; requires
/// diffusive_flux_jacobian.
SpMat interface_jacobian(const FeSpace& space, const InterfaceModel& model,
                         const ProblemDefinition& problem, const Vec& state, double t);

/// Minimum of the interface upwinding weights over all interface quadrature
/// points and components (diagnostic; nonnegative for admissible weights).
double min_interface_upwind(const FeSpace& space, const InterfaceModel& model,
                            const ProblemDefinition& problem, double t);

}  // namespace memdg
