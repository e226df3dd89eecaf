#include "memdg/operators.hpp"

#include <cmath>
#include <vector>

#include "memdg/errors.hpp"
#include "memdg/parallel.hpp"

namespace memdg {

namespace {

using Triplet = Eigen::Triplet<double>;

/// Basis traces of the two neighbors of a face on a shared quadrature rule.
/// Cached tables serve the equal-degree case; mixed degrees are evaluated on
/// the fly at the finer rule.
struct FaceBasis {
  int nq = 0;
  std::vector<double> w;   // quadrature weights scaled by |face|/2
  std::vector<Point2> x;   // physical points
  Eigen::MatrixXd val_p, dn_p;  // nq x nbP: trace values, normal derivatives
  Eigen::MatrixXd val_m, dn_m;  // nq x nbM (empty on boundary)
  int nb_p = 0, nb_m = 0;

  FaceBasis(const FeSpace& space, const Face& f, bool error_order) {
    const Mesh& mesh = space.mesh();
    const int mp = space.degree(f.plus_element);
    const int mm = f.is_boundary() ? mp : space.degree(f.minus_element);
    const double gx = space.grad_scale_x(), gy = space.grad_scale_y();
    const double nx = f.normal.x, ny = f.normal.y;

    auto from_tables = [&](const FeSpace::Tables& t, int side, Eigen::MatrixXd& val,
                           Eigen::MatrixXd& dn) {
      const auto& tv = error_order ? t.tval_err[side] : t.tval[side];
      const auto& txi = error_order ? t.tdxi_err[side] : t.tdxi[side];
      const auto& teta = error_order ? t.tdeta_err[side] : t.tdeta[side];
      val = tv;
      dn = (gx * nx) * txi + (gy * ny) * teta;
    };

    if (mp == mm) {
      const FeSpace::Tables& t = space.tables_for_degree(mp);
      const QuadratureRule& line = error_order ? t.line_err : t.line;
      nq = line.size();
      w.resize(nq);
      x.resize(nq);
      for (int q = 0; q < nq; ++q) {
        w[q] = line.weights[q] * 0.5 * f.length;
        x[q] = f.at(line.points[q]);
      }
      from_tables(t, f.plus_side, val_p, dn_p);
      nb_p = t.nb;
      if (!f.is_boundary()) {
        from_tables(t, f.minus_side, val_m, dn_m);
        nb_m = t.nb;
      }
    } else {
      const int order = std::max(mp, mm) + (error_order ? 4 : 2);
      const QuadratureRule line = gauss_legendre_1d(order);
      nq = line.size();
      w.resize(nq);
      x.resize(nq);
      auto fill = [&](int m, int side, Eigen::MatrixXd& val, Eigen::MatrixXd& dn) {
        const ReferenceBasis basis(m);
        const int nb = basis.size();
        val.resize(nq, nb);
        dn.resize(nq, nb);
        Eigen::VectorXd v;
        Eigen::MatrixXd g;
        for (int q = 0; q < nq; ++q) {
          basis.eval(side_point(side, line.points[q]), v, g);
          val.row(q) = v.transpose();
          dn.row(q) = (gx * nx) * g.col(0) + (gy * ny) * g.col(1);
        }
      };
      for (int q = 0; q < nq; ++q) {
        w[q] = line.weights[q] * 0.5 * f.length;
        x[q] = f.at(line.points[q]);
      }
      fill(mp, f.plus_side, val_p, dn_p);
      nb_p = val_p.cols();
      if (!f.is_boundary()) {
        fill(mm, f.minus_side, val_m, dn_m);
        nb_m = val_m.cols();
      }
    }
    (void)mesh;
  }
};

void check_positive(const Vec& a, double t, Point2 x) {
  for (int i = 0; i < a.size(); ++i)
    if (!(a[i] > 0.0))
      throw CoefficientSingular("diffusion entry " + std::to_string(i) + " is " +
                                std::to_string(a[i]) + " at t=" + std::to_string(t) +
                                ", x=(" + std::to_string(x.x) + "," + std::to_string(x.y) +
                                ")");
}

}  // namespace

SpMat assemble_mass(const FeSpace& space, int threads) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const double jac = space.jacobian();
  std::vector<Triplet> triplets;
  triplets.reserve(space.total_dofs());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const FeSpace::Tables& t = space.tables(e);
    for (int c = 0; c < space.n_components(); ++c)
      for (int j = 0; j < t.nb; ++j) {
        const int g = dofs(e, c, j);
        triplets.emplace_back(g, g, jac * t.ref_l2[j]);
      }
  }
  SpMat M(space.total_dofs(), space.total_dofs());
  M.setFromTriplets(triplets.begin(), triplets.end());
  (void)threads;
  return M;
}

Eigen::MatrixXd elementwise_diffusion_sup(const FeSpace& space,
                                          const ProblemDefinition& problem, double t) {
  const Mesh& mesh = space.mesh();
  Eigen::MatrixXd sup = Eigen::MatrixXd::Zero(mesh.n_elements(), problem.n_components);
  const double s[4] = {-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0};
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const int sub = mesh.element_subdomain[e];
    for (double sx : s)
      for (double sy : s) {
        const Vec a = problem.diffusion(t, mesh.from_reference(e, {sx, sy}), sub);
        for (int i = 0; i < problem.n_components; ++i)
          sup(e, i) = std::max(sup(e, i), std::abs(a[i]));
      }
  }
  return sup;
}

Vec face_penalty(const FeSpace& space, const PenaltyConfig& penalty,
                 const Eigen::MatrixXd& a_sup, const Face& face) {
  const double mbar = space.face_degree(face);
  const double hbar = space.face_h(face);
  Vec abar;
  if (face.is_boundary())
    abar = a_sup.row(face.plus_element);
  else
    abar = 0.5 * (a_sup.row(face.plus_element) + a_sup.row(face.minus_element));
  return (penalty.c_sigma * mbar * mbar / hbar) * abar;
}

SpMat assemble_operator(const FeSpace& space, const ProblemDefinition& problem,
                        const InterfaceModel& iface, const PenaltyConfig& penalty, double t,
                        int threads) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const int ncomp = problem.n_components;
  const int ne = mesh.n_elements();
  const int nf = mesh.n_faces();
  const double jac = space.jacobian();
  const double gx = space.grad_scale_x(), gy = space.grad_scale_y();
  const Eigen::MatrixXd a_sup = elementwise_diffusion_sup(space, problem, t);

  std::vector<std::vector<Triplet>> slots(ne + nf);

  // Volume terms: (A grad w - W B) : grad v, elementwise per component.
  parallel_for(0, ne, threads, [&](int e) {
    const FeSpace::Tables& tab = space.tables(e);
    const int sub = mesh.element_subdomain[e];
    const int nb = tab.nb;
    std::vector<Eigen::MatrixXd> local(ncomp, Eigen::MatrixXd::Zero(nb, nb));
    for (int q = 0; q < tab.vol.size(); ++q) {
      const Point2 x = mesh.from_reference(e, tab.vol.points[q]);
      const Vec a = problem.diffusion(t, x, sub);
      check_positive(a, t, x);
      const Mat2 B = problem.advection(t, x, sub);
      const double wq = tab.vol.weights[q] * jac;
      for (int i = 0; i < ncomp; ++i) {
        Eigen::MatrixXd& loc = local[i];
        for (int k = 0; k < nb; ++k) {  // test
          const double gkx = gx * tab.dxi(q, k), gky = gy * tab.deta(q, k);
          const double bgk = B(i, 0) * gkx + B(i, 1) * gky;
          for (int j = 0; j < nb; ++j) {  // trial
            const double gjx = gx * tab.dxi(q, j), gjy = gy * tab.deta(q, j);
            loc(k, j) += wq * (a[i] * (gjx * gkx + gjy * gky) - tab.val(q, j) * bgk);
          }
        }
      }
    }
    auto& out = slots[e];
    out.reserve(ncomp * nb * nb);
    for (int i = 0; i < ncomp; ++i)
      for (int k = 0; k < nb; ++k)
        for (int j = 0; j < nb; ++j) out.emplace_back(dofs(e, i, k), dofs(e, i, j), local[i](k, j));
  });

  // Face terms.
  parallel_for(0, nf, threads, [&](int fi) {
    const Face& f = mesh.faces[fi];
    const FaceBasis fb(space, f, false);
    const Point2 n = f.normal;
    auto& out = slots[ne + fi];

    if (f.kind == FaceKind::Boundary) {
      const int e = f.plus_element;
      const int sub = mesh.element_subdomain[e];
      const Vec sigma = face_penalty(space, penalty, a_sup, f);
      const Point2 mid = f.at(0.0);
      const int nb = fb.nb_p;
      std::vector<Eigen::MatrixXd> local(ncomp, Eigen::MatrixXd::Zero(nb, nb));
      for (int q = 0; q < fb.nq; ++q) {
        const Vec a = problem.diffusion(t, fb.x[q], sub);
        check_positive(a, t, fb.x[q]);
        const Mat2 B = problem.advection(t, fb.x[q], sub);
        for (int i = 0; i < ncomp; ++i) {
          const double bn = B(i, 0) * n.x + B(i, 1) * n.y;
          const double xplus = (bn >= 0.0) ? 1.0 : 0.0;  // outflow indicator
          Eigen::MatrixXd& loc = local[i];
          if (problem.boundary.is_dirichlet(i, mid, n)) {
            for (int k = 0; k < nb; ++k)
              for (int j = 0; j < nb; ++j)
                loc(k, j) += fb.w[q] *
                             (-(a[i] * fb.dn_p(q, j) - xplus * fb.val_p(q, j) * bn) * fb.val_p(q, k) -
                              a[i] * fb.dn_p(q, k) * fb.val_p(q, j) +
                              sigma[i] * fb.val_p(q, j) * fb.val_p(q, k));
          } else {
            for (int k = 0; k < nb; ++k)
              for (int j = 0; j < nb; ++j)
                loc(k, j) += fb.w[q] * xplus * bn * fb.val_p(q, j) * fb.val_p(q, k);
          }
        }
      }
      for (int i = 0; i < ncomp; ++i)
        for (int k = 0; k < nb; ++k)
          for (int j = 0; j < nb; ++j) out.emplace_back(dofs(e, i, k), dofs(e, i, j), local[i](k, j));
      return;
    }

    const int ep = f.plus_element, em = f.minus_element;
    const int subp = mesh.element_subdomain[ep], subm = mesh.element_subdomain[em];
    const int nbp = fb.nb_p, nbm = fb.nb_m;
    // Side-blocked local matrix: rows/cols 0..nbp-1 plus side, then minus side.
    const int nloc = nbp + nbm;
    std::vector<Eigen::MatrixXd> local(ncomp, Eigen::MatrixXd::Zero(nloc, nloc));
    auto val = [&](int q, int sj) { return sj < nbp ? fb.val_p(q, sj) : fb.val_m(q, sj - nbp); };
    auto dn = [&](int q, int sj) { return sj < nbp ? fb.dn_p(q, sj) : fb.dn_m(q, sj - nbp); };
    auto sgn = [&](int sj) { return sj < nbp ? 1.0 : -1.0; };

    if (f.kind == FaceKind::Interface) {
      for (int q = 0; q < fb.nq; ++q) {
        const Mat2 B1 = problem.advection(t, fb.x[q], subp);
        const Mat2 B2 = problem.advection(t, fb.x[q], subm);
        const Vec bI = interface_upwind(iface, problem, t, fb.x[q], n);
        for (int i = 0; i < ncomp; ++i) {
          const double bn1 = B1(i, 0) * n.x + B1(i, 1) * n.y;
          const double bn2 = B2(i, 0) * n.x + B2(i, 1) * n.y;
          Eigen::MatrixXd& loc = local[i];
          for (int sj = 0; sj < nloc; ++sj) {
            const double bn_s = sj < nbp ? bn1 : bn2;
            const double trial = 0.5 * val(q, sj) * bn_s + bI[i] * sgn(sj) * val(q, sj);
            for (int sk = 0; sk < nloc; ++sk)
              loc(sk, sj) += fb.w[q] * trial * sgn(sk) * val(q, sk);
          }
        }
      }
    } else {  // interior
      const Vec sigma = face_penalty(space, penalty, a_sup, f);
      for (int q = 0; q < fb.nq; ++q) {
        const Vec ap = problem.diffusion(t, fb.x[q], subp);
        const Vec am = problem.diffusion(t, fb.x[q], subm);
        check_positive(ap, t, fb.x[q]);
        check_positive(am, t, fb.x[q]);
        const Mat2 Bp = problem.advection(t, fb.x[q], subp);
        const Mat2 Bm = problem.advection(t, fb.x[q], subm);
        for (int i = 0; i < ncomp; ++i) {
          const double bnp = Bp(i, 0) * n.x + Bp(i, 1) * n.y;
          const double bnm = Bm(i, 0) * n.x + Bm(i, 1) * n.y;
          const double upwind = 0.5 * std::abs(bnp);
          Eigen::MatrixXd& loc = local[i];
          for (int sj = 0; sj < nloc; ++sj) {
            const double a_s = sj < nbp ? ap[i] : am[i];
            const double bn_s = sj < nbp ? bnp : bnm;
            const double flux_j = 0.5 * (a_s * dn(q, sj) - val(q, sj) * bn_s);
            for (int sk = 0; sk < nloc; ++sk) {
              const double a_r = sk < nbp ? ap[i] : am[i];
              loc(sk, sj) +=
                  fb.w[q] * (-flux_j * sgn(sk) * val(q, sk) -
                             0.5 * a_r * dn(q, sk) * sgn(sj) * val(q, sj) +
                             (sigma[i] + upwind) * sgn(sj) * val(q, sj) * sgn(sk) * val(q, sk));
            }
          }
        }
      }
    }

    out.reserve(ncomp * nloc * nloc);
    auto gdof = [&](int i, int s) {
      return s < nbp ? dofs(ep, i, s) : dofs(em, i, s - nbp);
    };
    for (int i = 0; i < ncomp; ++i)
      for (int sk = 0; sk < nloc; ++sk)
        for (int sj = 0; sj < nloc; ++sj)
          out.emplace_back(gdof(i, sk), gdof(i, sj), local[i](sk, sj));
  });

  std::vector<Triplet> all;
  std::size_t total = 0;
  for (const auto& s : slots) total += s.size();
  all.reserve(total);
  for (const auto& s : slots) all.insert(all.end(), s.begin(), s.end());
  SpMat B(space.total_dofs(), space.total_dofs());
  B.setFromTriplets(all.begin(), all.end());
  return B;
}

Vec assemble_boundary_rhs(const FeSpace& space, const ProblemDefinition& problem,
                          const PenaltyConfig& penalty, double t, int threads) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const int ncomp = problem.n_components;
  const Eigen::MatrixXd a_sup = elementwise_diffusion_sup(space, problem, t);
  const int nf = mesh.n_faces();
  std::vector<std::vector<std::pair<int, double>>> slots(nf);

  parallel_for(0, nf, threads, [&](int fi) {
    const Face& f = mesh.faces[fi];
    if (f.kind != FaceKind::Boundary) return;
    const FaceBasis fb(space, f, false);
    const int e = f.plus_element;
    const int sub = mesh.element_subdomain[e];
    const Vec sigma = face_penalty(space, penalty, a_sup, f);
    const Point2 mid = f.at(0.0);
    const Point2 n = f.normal;
    auto& out = slots[fi];
    for (int q = 0; q < fb.nq; ++q) {
      const Vec a = problem.diffusion(t, fb.x[q], sub);
      const Mat2 B = problem.advection(t, fb.x[q], sub);
      const Vec gd = problem.dirichlet_data(t, fb.x[q]);
      const Vec gn = problem.neumann_data(t, fb.x[q]);
      for (int i = 0; i < ncomp; ++i) {
        const double bn = B(i, 0) * n.x + B(i, 1) * n.y;
        const double xminus = (bn < 0.0) ? 1.0 : 0.0;  // inflow indicator
        if (problem.boundary.is_dirichlet(i, mid, n)) {
          for (int k = 0; k < fb.nb_p; ++k)
            out.emplace_back(dofs(e, i, k),
                             fb.w[q] * (-gd[i] * a[i] * fb.dn_p(q, k) -
                                        xminus * gd[i] * bn * fb.val_p(q, k) +
                                        sigma[i] * gd[i] * fb.val_p(q, k)));
        } else {
          for (int k = 0; k < fb.nb_p; ++k)
            out.emplace_back(dofs(e, i, k), fb.w[q] * gn[i] * fb.val_p(q, k));
        }
      }
    }
  });

  Vec rhs = Vec::Zero(space.total_dofs());
  for (const auto& s : slots)
    for (const auto& [idx, v] : s) rhs[idx] += v;
  return rhs;
}

Vec eval_reaction(const FeSpace& space, const ProblemDefinition& problem, const Vec& state,
                  double t, int threads) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const int ncomp = problem.n_components;
  const double jac = space.jacobian();
  Vec out = Vec::Zero(space.total_dofs());

  parallel_for(0, mesh.n_elements(), threads, [&](int e) {
    const FeSpace::Tables& tab = space.tables(e);
    const int sub = mesh.element_subdomain[e];
    const int nb = tab.nb;
    Eigen::MatrixXd coeff(nb, ncomp);
    for (int i = 0; i < ncomp; ++i)
      for (int j = 0; j < nb; ++j) coeff(j, i) = state[dofs(e, i, j)];
    const Eigen::MatrixXd uq = tab.val * coeff;  // nq x ncomp
    Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(nb, ncomp);
    Vec u(ncomp);
    for (int q = 0; q < tab.vol.size(); ++q) {
      const Point2 x = mesh.from_reference(e, tab.vol.points[q]);
      u = uq.row(q).transpose();
      Vec g = problem.reaction ? problem.reaction(u, x, sub) : Vec::Zero(ncomp).eval();
      if (!g.allFinite())
        throw NonFiniteValue("reaction overflowed on element " + std::to_string(e));
      if (problem.forcing) g -= problem.forcing(t, x, sub);
      moments.noalias() += (tab.vol.weights[q] * jac) * tab.val.row(q).transpose() * g.transpose();
    }
    for (int i = 0; i < ncomp; ++i)
      for (int j = 0; j < nb; ++j) out[dofs(e, i, j)] = moments(j, i);
  });
  return out;
}

namespace {

double dg_norm_impl(const FeSpace& space, const ProblemDefinition& problem,
                    const InterfaceModel& iface, const PenaltyConfig& penalty,
                    const Vec& state, const ExactField* exact, double t) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const int ncomp = problem.n_components;
  const double jac = space.jacobian();
  const double gx = space.grad_scale_x(), gy = space.grad_scale_y();
  const Eigen::MatrixXd a_sup = elementwise_diffusion_sup(space, problem, t);

  double acc = 0.0;

  // Volume: weighted gradient and divergence terms.
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const FeSpace::Tables& tab = space.tables(e);
    const int sub = mesh.element_subdomain[e];
    const int nb = tab.nb;
    Eigen::MatrixXd coeff(nb, ncomp);
    for (int i = 0; i < ncomp; ++i)
      for (int j = 0; j < nb; ++j) coeff(j, i) = state[dofs(e, i, j)];
    const Eigen::MatrixXd uq = tab.val_err * coeff;
    const Eigen::MatrixXd uxq = (gx * tab.dxi_err) * coeff;
    const Eigen::MatrixXd uyq = (gy * tab.deta_err) * coeff;
    for (int q = 0; q < tab.vol_err.size(); ++q) {
      const Point2 x = mesh.from_reference(e, tab.vol_err.points[q]);
      const Vec a = problem.diffusion(t, x, sub);
      const Vec div = problem.divergence_of_advection(t, x, sub);
      Vec w = uq.row(q).transpose();
      Vec wx = uxq.row(q).transpose();
      Vec wy = uyq.row(q).transpose();
      if (exact) {
        w -= exact->value(t, x, sub);
        const Mat2 gradu = exact->gradient(t, x, sub);
        wx -= gradu.col(0);
        wy -= gradu.col(1);
      }
      const double wq = tab.vol_err.weights[q] * jac;
      for (int i = 0; i < ncomp; ++i) {
        if (div[i] < -1e-12)
          throw NegativeRadicand("div B component " + std::to_string(i) +
                                 " is negative: " + std::to_string(div[i]));
        acc += wq * (a[i] * (wx[i] * wx[i] + wy[i] * wy[i]) +
                     0.5 * std::max(0.0, div[i]) * w[i] * w[i]);
      }
    }
  }

  // Face jumps.
  for (const Face& f : mesh.faces) {
    const FaceBasis fb(space, f, true);
    const Point2 n = f.normal;
    if (f.kind == FaceKind::Boundary) {
      const int e = f.plus_element;
      const int sub = mesh.element_subdomain[e];
      const Vec sigma = face_penalty(space, penalty, a_sup, f);
      const Point2 mid = f.at(0.0);
      for (int q = 0; q < fb.nq; ++q) {
        const Mat2 B = problem.advection(t, fb.x[q], sub);
        Vec tr(ncomp);
        for (int i = 0; i < ncomp; ++i) {
          tr[i] = 0.0;
          for (int j = 0; j < fb.nb_p; ++j) tr[i] += state[dofs(e, i, j)] * fb.val_p(q, j);
        }
        if (exact) tr -= exact->value(t, fb.x[q], sub);
        for (int i = 0; i < ncomp; ++i) {
          const double bn = B(i, 0) * n.x + B(i, 1) * n.y;
          double weight = 0.5 * std::abs(bn);
          if (problem.boundary.is_dirichlet(i, mid, n)) weight += sigma[i];
          acc += fb.w[q] * weight * tr[i] * tr[i];
        }
      }
      continue;
    }
    const int ep = f.plus_element, em = f.minus_element;
    const Vec sigma = face_penalty(space, penalty, a_sup, f);
    for (int q = 0; q < fb.nq; ++q) {
      Vec jump(ncomp);
      for (int i = 0; i < ncomp; ++i) {
        double vp = 0.0, vm = 0.0;
        for (int j = 0; j < fb.nb_p; ++j) vp += state[dofs(ep, i, j)] * fb.val_p(q, j);
        for (int j = 0; j < fb.nb_m; ++j) vm += state[dofs(em, i, j)] * fb.val_m(q, j);
        jump[i] = vp - vm;
      }
      if (f.kind == FaceKind::Interface) {
        if (exact)
          jump -= exact->value(t, fb.x[q], 1) - exact->value(t, fb.x[q], 2);
        const Vec bI = interface_upwind(iface, problem, t, fb.x[q], n);
        for (int i = 0; i < ncomp; ++i)
          acc += fb.w[q] * std::max(0.0, bI[i]) * jump[i] * jump[i];
      } else {
        // Exact branches agree on faces interior to a compartment.
        const Mat2 B = problem.advection(t, fb.x[q], mesh.element_subdomain[ep]);
        for (int i = 0; i < ncomp; ++i) {
          const double bn = B(i, 0) * n.x + B(i, 1) * n.y;
          acc += fb.w[q] * (sigma[i] + 0.5 * std::abs(bn)) * jump[i] * jump[i];
        }
      }
    }
  }
  return std::sqrt(acc);
}

}  // namespace

double dg_norm(const FeSpace& space, const ProblemDefinition& problem,
               const InterfaceModel& iface, const PenaltyConfig& penalty, const Vec& state,
               double t) {
  return dg_norm_impl(space, problem, iface, penalty, state, nullptr, t);
}

double dg_norm_error(const FeSpace& space, const ProblemDefinition& problem,
                     const InterfaceModel& iface, const PenaltyConfig& penalty,
                     const Vec& state, const ExactField& exact, double t) {
  return dg_norm_impl(space, problem, iface, penalty, state, &exact, t);
}

double l2_norm(const FeSpace& space, const Vec& state) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const double jac = space.jacobian();
  double acc = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const FeSpace::Tables& tab = space.tables(e);
    for (int i = 0; i < space.n_components(); ++i)
      for (int j = 0; j < tab.nb; ++j) {
        const double c = state[dofs(e, i, j)];
        acc += jac * tab.ref_l2[j] * c * c;  // Parseval with the orthogonal basis
      }
  }
  return std::sqrt(acc);
}

double l2_error(const FeSpace& space, const Vec& state, const ExactField& exact, double t) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const int ncomp = space.n_components();
  const double jac = space.jacobian();
  double acc = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const FeSpace::Tables& tab = space.tables(e);
    const int sub = mesh.element_subdomain[e];
    Eigen::MatrixXd coeff(tab.nb, ncomp);
    for (int i = 0; i < ncomp; ++i)
      for (int j = 0; j < tab.nb; ++j) coeff(j, i) = state[dofs(e, i, j)];
    const Eigen::MatrixXd uq = tab.val_err * coeff;
    for (int q = 0; q < tab.vol_err.size(); ++q) {
      const Point2 x = mesh.from_reference(e, tab.vol_err.points[q]);
      const Vec diff = uq.row(q).transpose() - exact.value(t, x, sub);
      acc += tab.vol_err.weights[q] * jac * diff.squaredNorm();
    }
  }
  return std::sqrt(acc);
}

double linf_estimate(const FeSpace& space, const Vec& state) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const int ncomp = space.n_components();
  double best = 0.0;
  Eigen::VectorXd vals;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const FeSpace::Tables& tab = space.tables(e);
    Eigen::MatrixXd coeff(tab.nb, ncomp);
    for (int i = 0; i < ncomp; ++i)
      for (int j = 0; j < tab.nb; ++j) coeff(j, i) = state[dofs(e, i, j)];
    best = std::max(best, (tab.val_err * coeff).array().abs().maxCoeff());
    const ReferenceBasis basis(tab.m);
    for (double sx : {-1.0, 1.0})
      for (double sy : {-1.0, 1.0}) {
        vals = basis.eval_values({sx, sy});
        best = std::max(best, (vals.transpose() * coeff).array().abs().maxCoeff());
      }
  }
  return best;
}

}  // namespace memdg
