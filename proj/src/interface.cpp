#include "memdg/interface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "memdg/errors.hpp"
#include "memdg/parallel.hpp"

namespace memdg {

namespace {

struct InterfaceTrace {
  int nq = 0;
  std::vector<double> w;
  std::vector<Point2> x;
  Eigen::MatrixXd val_p, val_m;  // nq x nb per side
};

InterfaceTrace face_trace(const FeSpace& space, const Face& f) {
  InterfaceTrace tr;
  const int mp = space.degree(f.plus_element);
  const int mm = space.degree(f.minus_element);
  if (mp == mm) {
    const FeSpace::Tables& t = space.tables_for_degree(mp);
    tr.nq = t.line.size();
    tr.w.resize(tr.nq);
    tr.x.resize(tr.nq);
    for (int q = 0; q < tr.nq; ++q) {
      tr.w[q] = t.line.weights[q] * 0.5 * f.length;
      tr.x[q] = f.at(t.line.points[q]);
    }
    tr.val_p = t.tval[f.plus_side];
    tr.val_m = t.tval[f.minus_side];
  } else {
    const QuadratureRule line = gauss_legendre_1d(std::max(mp, mm) + 2);
    tr.nq = line.size();
    tr.w.resize(tr.nq);
    tr.x.resize(tr.nq);
    const ReferenceBasis bp(mp), bm(mm);
    tr.val_p.resize(tr.nq, bp.size());
    tr.val_m.resize(tr.nq, bm.size());
    for (int q = 0; q < tr.nq; ++q) {
      tr.w[q] = line.weights[q] * 0.5 * f.length;
      tr.x[q] = f.at(line.points[q]);
      tr.val_p.row(q) = bp.eval_values(side_point(f.plus_side, line.points[q])).transpose();
      tr.val_m.row(q) = bm.eval_values(side_point(f.minus_side, line.points[q])).transpose();
    }
  }
  return tr;
}

}  // namespace

Vec eval_interface_form(const FeSpace& space, const InterfaceModel& model,
                        const ProblemDefinition& problem, const Vec& state, double t,
                        int threads) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const int ncomp = problem.n_components;
  const int nf = mesh.n_faces();
  std::vector<std::vector<std::pair<int, double>>> slots(nf);

  parallel_for(0, nf, threads, [&](int fi) {
    const Face& f = mesh.faces[fi];
    if (f.kind != FaceKind::Interface) return;
    const InterfaceTrace tr = face_trace(space, f);
    const Point2 n = f.normal;
    const int ep = f.plus_element, em = f.minus_element;
    const int nbp = tr.val_p.cols(), nbm = tr.val_m.cols();
    auto& out = slots[fi];
    Vec w1(ncomp), w2(ncomp);
    for (int q = 0; q < tr.nq; ++q) {
      for (int i = 0; i < ncomp; ++i) {
        double vp = 0.0, vm = 0.0;
        for (int j = 0; j < nbp; ++j) vp += state[dofs(ep, i, j)] * tr.val_p(q, j);
        for (int j = 0; j < nbm; ++j) vm += state[dofs(em, i, j)] * tr.val_m(q, j);
        w1[i] = vp;
        w2[i] = vm;
      }
      const Vec ptilde = model.flux(w1, w2);
      const Vec r = model.friction(tr.x[q]);
      const Vec bI = interface_upwind(model, problem, t, tr.x[q], n);
      const Mat2 B1 = problem.advection(t, tr.x[q], 1);
      const Mat2 B2 = problem.advection(t, tr.x[q], 2);
      for (int i = 0; i < ncomp; ++i) {
        const double bn1 = B1(i, 0) * n.x + B1(i, 1) * n.y;
        const double bn2 = B2(i, 0) * n.x + B2(i, 1) * n.y;
        const double mean_adv = 0.5 * (w1[i] * bn1 + w2[i] * bn2);
        const double integrand =
            ptilde[i] - (1.0 - r[i]) * (mean_adv + bI[i] * (w1[i] - w2[i]));
        for (int k = 0; k < nbp; ++k)
          out.emplace_back(dofs(ep, i, k), tr.w[q] * integrand * tr.val_p(q, k));
        for (int k = 0; k < nbm; ++k)
          out.emplace_back(dofs(em, i, k), -tr.w[q] * integrand * tr.val_m(q, k));
      }
    }
  });

  Vec out = Vec::Zero(space.total_dofs());
  for (const auto& s : slots)
    for (const auto& [idx, v] : s) out[idx] += v;
  return out;
}

namespace {

// Tangent of the membrane form. The flux derivative with respect to the
// two-sided traces is the constant [P | -P] for the linear fast path and the
// model's analytic Jacobian at the trace values otherwise.
SpMat assemble_interface_tangent(const FeSpace& space, const InterfaceModel& model,
                                 const ProblemDefinition& problem, const Vec* state,
                                 double t) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const int ncomp = problem.n_components;
  std::vector<Eigen::Triplet<double>> triplets;

  for (const Face& f : mesh.faces) {
    if (f.kind != FaceKind::Interface) continue;
    const InterfaceTrace tr = face_trace(space, f);
    const Point2 n = f.normal;
    const int ep = f.plus_element, em = f.minus_element;
    const int nbp = tr.val_p.cols(), nbm = tr.val_m.cols();
    Vec u1(ncomp), u2(ncomp);
    for (int q = 0; q < tr.nq; ++q) {
      Eigen::MatrixXd flux_jac(ncomp, 2 * ncomp);
      if (state) {
        for (int i = 0; i < ncomp; ++i) {
          double vp = 0.0, vm = 0.0;
          for (int j = 0; j < nbp; ++j) vp += (*state)[dofs(ep, i, j)] * tr.val_p(q, j);
          for (int j = 0; j < nbm; ++j) vm += (*state)[dofs(em, i, j)] * tr.val_m(q, j);
          u1[i] = vp;
          u2[i] = vm;
        }
        flux_jac = model.diffusive_flux_jacobian(u1, u2);
      } else {
        flux_jac.leftCols(ncomp) = model.P;
        flux_jac.rightCols(ncomp) = -model.P;
      }
      const Vec r = model.friction(tr.x[q]);
      const Vec bI = interface_upwind(model, problem, t, tr.x[q], n);
      const Mat2 B1 = problem.advection(t, tr.x[q], 1);
      const Mat2 B2 = problem.advection(t, tr.x[q], 2);
      // d integrand_i / d(trial trace of component c on side s).
      auto demit = [&](int i, int c, double dint_d1, double dint_d2) {
        for (int sj = 0; sj < nbp + nbm; ++sj) {
          const bool plus = sj < nbp;
          const double phi_j = plus ? tr.val_p(q, sj) : tr.val_m(q, sj - nbp);
          const double d = plus ? dint_d1 : dint_d2;
          if (d == 0.0) continue;
          const int col = plus ? dofs(ep, c, sj) : dofs(em, c, sj - nbp);
          for (int k = 0; k < nbp; ++k)
            triplets.emplace_back(dofs(ep, i, k), col, tr.w[q] * d * phi_j * tr.val_p(q, k));
          for (int k = 0; k < nbm; ++k)
            triplets.emplace_back(dofs(em, i, k), col, -tr.w[q] * d * phi_j * tr.val_m(q, k));
        }
      };
      for (int i = 0; i < ncomp; ++i) {
        const double bn1 = B1(i, 0) * n.x + B1(i, 1) * n.y;
        const double bn2 = B2(i, 0) * n.x + B2(i, 1) * n.y;
        for (int c = 0; c < ncomp; ++c) {
          double d1 = flux_jac(i, c), d2 = flux_jac(i, ncomp + c);
          if (c == i) {
            d1 += -(1.0 - r[i]) * (0.5 * bn1 + bI[i]);
            d2 += -(1.0 - r[i]) * (0.5 * bn2 - bI[i]);
          }
          demit(i, c, d1, d2);
        }
      }
    }
  }
  SpMat K(space.total_dofs(), space.total_dofs());
  K.setFromTriplets(triplets.begin(), triplets.end());
  K.prune(0.0);
  return K;
}

}  // namespace

SpMat linearize_interface_form(const FeSpace& space, const InterfaceModel& model,
                               const ProblemDefinition& problem, double t) {
  if (!model.permeability_is_constant)
    throw NotLinear("linearize_interface_form requires a constant permeability");
  return assemble_interface_tangent(space, model, problem, nullptr, t);
}

SpMat interface_jacobian(const FeSpace& space, const InterfaceModel& model,
                         const ProblemDefinition& problem, const Vec& state, double t) {
  if (!model.diffusive_flux_jacobian)
    throw std::invalid_argument("interface_jacobian needs diffusive_flux_jacobian");
  return assemble_interface_tangent(space, model, problem, &state, t);
}

SpMat interface_jacobian_fd(const FeSpace& space, const InterfaceModel& model,
                            const ProblemDefinition& problem, const Vec& state, double t) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  std::vector<int> touched;
  for (const Face& f : mesh.faces) {
    if (f.kind != FaceKind::Interface) continue;
    for (int e : {f.plus_element, f.minus_element})
      for (int i = 0; i < space.n_components(); ++i)
        for (int j = 0; j < space.dofs().block[e]; ++j) touched.push_back(dofs(e, i, j));
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

  const double step = 1e-6 * (1.0 + (state.size() ? state.cwiseAbs().maxCoeff() : 0.0));
  std::vector<Eigen::Triplet<double>> triplets;
  Vec pert = state;
  for (int col : touched) {
    pert[col] = state[col] + step;
    const Vec fp = eval_interface_form(space, model, problem, pert, t);
    pert[col] = state[col] - step;
    const Vec fm = eval_interface_form(space, model, problem, pert, t);
    pert[col] = state[col];
    for (int row : touched) {
      const double d = (fp[row] - fm[row]) / (2.0 * step);
      if (d != 0.0) triplets.emplace_back(row, col, d);
    }
  }
  SpMat J(space.total_dofs(), space.total_dofs());
  J.setFromTriplets(triplets.begin(), triplets.end());
  return J;
}

double min_interface_upwind(const FeSpace& space, const InterfaceModel& model,
                            const ProblemDefinition& problem, double t) {
  const Mesh& mesh = space.mesh();
  double worst = std::numeric_limits<double>::infinity();
  for (const Face& f : mesh.faces) {
    if (f.kind != FaceKind::Interface) continue;
    const InterfaceTrace tr = face_trace(space, f);
    for (int q = 0; q < tr.nq; ++q)
      worst = std::min(worst, interface_upwind(model, problem, t, tr.x[q], f.normal).minCoeff());
  }
  return worst;
}

}  // namespace memdg
