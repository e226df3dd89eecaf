#pragma once

#include "memdg/problem.hpp"

namespace fixtures {

using memdg::BoundarySpec;
using memdg::InterfaceModel;
using memdg::Mat2;
using memdg::Point2;
using memdg::ProblemDefinition;
using memdg::Vec;

// Constant-coefficient scalar/system problem with zero data.
inline ProblemDefinition constant_problem(int ncomp, double a, double bx, double by,
                                          BoundarySpec boundary) {
  ProblemDefinition p;
  p.n_components = ncomp;
  p.alpha_min = a;
  p.diffusion = memdg::constant_field(Vec::Constant(ncomp, a));
  Mat2 b(ncomp, 2);
  for (int i = 0; i < ncomp; ++i) {
    b(i, 0) = bx;
    b(i, 1) = by;
  }
  p.advection = memdg::constant_advection(b);
  p.advection_div = memdg::constant_field(Vec::Zero(ncomp));
  p.dirichlet_data = memdg::constant_boundary_data(Vec::Zero(ncomp));
  p.neumann_data = memdg::constant_boundary_data(Vec::Zero(ncomp));
  p.initial = [ncomp](Point2, int) { return Vec::Zero(ncomp).eval(); };
  p.boundary = boundary;
  return p;
}

// Membrane model that leaves the operator untouched (no weights asymmetry,
// unit friction, zero permeability).
inline InterfaceModel passive_interface(int ncomp) {
  return memdg::make_constant_interface(Eigen::MatrixXd::Zero(ncomp, ncomp),
                                        Vec::Constant(ncomp, 0.5), Vec::Constant(ncomp, 0.5),
                                        Vec::Ones(ncomp));
}

}  // namespace fixtures
