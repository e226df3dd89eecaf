#include "memdg/stepper.hpp"

#include <cmath>
#include <iostream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include "memdg/errors.hpp"

namespace memdg {

struct LinearSolver::Impl {
  Eigen::SparseMatrix<double> a_col;  // the solvers keep references into this
  SpMat a_row;                        // residual checks
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu;
  std::unique_ptr<Eigen::GMRES<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>>> gmres;
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

bool LinearSolver::ready() const { return impl_->lu != nullptr || impl_->gmres != nullptr; }

void LinearSolver::factor(const SpMat& A, Method method) {
  method_ = method;
  impl_->a_row = A;
  impl_->a_col = A;
  impl_->lu.reset();
  impl_->gmres.reset();
  if (method == Method::SparseLU) {
    impl_->lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    impl_->lu->compute(impl_->a_col);
    if (impl_->lu->info() != Eigen::Success)
      throw SolverFailure("sparse LU factorization failed (singular matrix?)");
  } else {
    impl_->gmres = std::make_unique<
        Eigen::GMRES<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>>>();
    impl_->gmres->setTolerance(1e-12);
    impl_->gmres->setMaxIterations(2000);
    impl_->gmres->set_restart(60);
    impl_->gmres->preconditioner().setFillfactor(8);
    impl_->gmres->compute(impl_->a_col);
    if (impl_->gmres->info() != Eigen::Success)
      throw SolverFailure("GMRES/ILU setup failed");
  }
}

Vec LinearSolver::solve(const Vec& b) const {
  if (!ready()) throw SolverFailure("solve before factor");
  Vec x;
  if (impl_->lu)
    x = impl_->lu->solve(b);
  else
    x = impl_->gmres->solve(b);
  const double resid = (impl_->a_row * x - b).norm();
  if (!(resid <= 1e-10 * (b.norm() + 1e-300)) || !x.allFinite())
    throw SolverFailure("linear solve residual " + std::to_string(resid) +
                        " exceeds tolerance for |b| = " + std::to_string(b.norm()));
  return x;
}

DiscreteSystem build_discrete_system(const FeSpace& space, const ProblemDefinition& problem,
                                     const InterfaceModel& iface, const PenaltyConfig& penalty,
                                     const SchemeConfig& scheme, double t0) {
  DiscreteSystem sys;
  const int threads = scheme.threads;
  sys.M = assemble_mass(space, threads);
  SpMat B = assemble_operator(space, problem, iface, penalty, t0, threads);
  sys.L = (-B).eval();
  sys.interface_in_L = scheme.interface_implicit;
  if (scheme.interface_implicit) {
    if (!iface.permeability_is_constant)
      throw NotLinear("implicit interface routing requires a constant permeability");
    const SpMat K = linearize_interface_form(space, iface, problem, t0);
    sys.L = (sys.L - K).eval();
    sys.bucket = [&space, &problem, &penalty, threads](const Vec& u, double t) {
      Vec f = -eval_reaction(space, problem, u, t, threads);
      f += assemble_boundary_rhs(space, problem, penalty, t, threads);
      return f;
    };
  } else {
    sys.bucket = [&space, &problem, &iface, &penalty, threads](const Vec& u, double t) {
      Vec f = -eval_reaction(space, problem, u, t, threads);
      f -= eval_interface_form(space, iface, problem, u, t, threads);
      f += assemble_boundary_rhs(space, problem, penalty, t, threads);
      return f;
    };
  }
  return sys;
}

TimeIntegrator::TimeIntegrator(const DiscreteSystem& system, const SchemeConfig& scheme)
    : system_(&system), scheme_(scheme) {
  const double k = scheme.dt;
  if (!(k > 0.0)) throw std::invalid_argument("TimeIntegrator: dt must be positive");
  const SpMat implicit_stage = (system.M - (k * scheme.theta) * system.L).eval();
  explicit_stage_ = (system.M + (k * (1.0 - scheme.theta)) * system.L).eval();
  solver_.factor(implicit_stage, scheme.solver);
}

namespace {

Vec checked_bucket(const DiscreteSystem& system, const Vec& u, double t, int step) {
  Vec f = system.bucket(u, t);
  if (!f.allFinite())
    throw NonFiniteState("non-finite explicit stage at step " + std::to_string(step));
  return f;
}

}  // namespace

StateHistory TimeIntegrator::bootstrap_first_step(const Vec& u0, double t0) const {
  const double k = scheme_.dt;
  StateHistory h;
  h.u_prev = u0;
  h.t_prev = t0;
  h.f_prev = checked_bucket(*system_, u0, t0, 0);
  const Vec rhs = explicit_stage_ * u0 + k * h.f_prev;
  h.u_curr = solver_.solve(rhs);
  h.t_curr = t0 + k;
  h.f_curr = checked_bucket(*system_, h.u_curr, h.t_curr, 1);
  h.step_index = 1;
  return h;
}

const Vec& TimeIntegrator::step(StateHistory& h) const {
  const double k = scheme_.dt;
  const Vec rhs = explicit_stage_ * h.u_curr + (0.5 * k) * (3.0 * h.f_curr - h.f_prev);
  Vec next = solver_.solve(rhs);
  h.u_prev.swap(h.u_curr);
  h.u_curr = std::move(next);
  h.f_prev.swap(h.f_curr);
  h.t_prev = h.t_curr;
  h.t_curr += k;
  h.step_index += 1;
  h.f_curr = checked_bucket(*system_, h.u_curr, h.t_curr, h.step_index);
  return h.u_curr;
}

IntegrateResult integrate(const DiscreteSystem& system, const SchemeConfig& scheme,
                          const Vec& u0, const std::vector<Observer>& observers) {
  const double k = scheme.dt;
  const long long steps = std::llround(scheme.t_final / k);
  if (std::abs(steps * k - scheme.t_final) > 1e-9 * std::max(1.0, scheme.t_final))
    std::cerr << "warning: t_final/dt = " << scheme.t_final / k
              << " is not an integer; running " << steps << " steps\n";

  auto notify = [&](int n, double t, const Vec& u) {
    for (const auto& obs : observers) obs.fn(n, t, u);
  };
  auto check = [&](int n, const Vec& u) {
    if (!u.allFinite())
      throw NonFiniteState("non-finite state at step " + std::to_string(n));
  };

  check(0, u0);
  notify(0, 0.0, u0);
  if (steps == 0) return {u0, 0};

  const TimeIntegrator integrator(system, scheme);
  StateHistory h = integrator.bootstrap_first_step(u0, 0.0);
  check(1, h.u_curr);
  notify(1, h.t_curr, h.u_curr);
  for (int n = 2; n <= steps; ++n) {
    integrator.step(h);
    check(n, h.u_curr);
    notify(n, h.t_curr, h.u_curr);
  }
  return {h.u_curr, static_cast<int>(steps)};
}

Vec initial_l2(const FeSpace& space, const ProblemDefinition& problem) {
  return space.project(problem.initial);
}

namespace {

/// Moments of B(u, phi) + lambda (u, phi) + N(u, phi) for a two-branch field.
Vec assemble_applied_form(const FeSpace& space, const ProblemDefinition& problem,
                          const InterfaceModel& iface, const PenaltyConfig& penalty,
                          const ExactField& u, double lambda, double t) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const int ncomp = problem.n_components;
  const double jac = space.jacobian();
  const double gx = space.grad_scale_x(), gy = space.grad_scale_y();
  Vec out = Vec::Zero(space.total_dofs());

  // Volume: (A grad u - U B) : grad phi + lambda u . phi.
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const FeSpace::Tables& tab = space.tables(e);
    const int sub = mesh.element_subdomain[e];
    for (int q = 0; q < tab.vol_err.size(); ++q) {
      const Point2 x = mesh.from_reference(e, tab.vol_err.points[q]);
      const Vec a = problem.diffusion(t, x, sub);
      const Mat2 B = problem.advection(t, x, sub);
      const Vec uv = u.value(t, x, sub);
      const Mat2 ug = u.gradient(t, x, sub);
      const double wq = tab.vol_err.weights[q] * jac;
      for (int i = 0; i < ncomp; ++i) {
        const double fx = a[i] * ug(i, 0) - uv[i] * B(i, 0);
        const double fy = a[i] * ug(i, 1) - uv[i] * B(i, 1);
        for (int k = 0; k < tab.nb; ++k) {
          const double gkx = gx * tab.dxi_err(q, k), gky = gy * tab.deta_err(q, k);
          out[dofs(e, i, k)] +=
              wq * (fx * gkx + fy * gky + lambda * uv[i] * tab.val_err(q, k));
        }
      }
    }
  }

  const Eigen::MatrixXd a_sup = elementwise_diffusion_sup(space, problem, t);

  for (const Face& f : mesh.faces) {
    const Point2 n = f.normal;
    const TracePoints tp = trace_quadrature(mesh, f, gauss_legendre_1d(
        (f.is_boundary() ? space.degree(f.plus_element)
                         : std::max(space.degree(f.plus_element), space.degree(f.minus_element))) + 4));
    if (f.kind == FaceKind::Boundary) {
      const int e = f.plus_element;
      const int sub = mesh.element_subdomain[e];
      const Vec sigma = face_penalty(space, penalty, a_sup, f);
      const Point2 mid = f.at(0.0);
      const ReferenceBasis basis(space.degree(e));
      Eigen::VectorXd phi;
      Eigen::MatrixXd dphi;
      for (std::size_t q = 0; q < tp.physical.size(); ++q) {
        const Point2 x = tp.physical[q];
        const Vec a = problem.diffusion(t, x, sub);
        const Mat2 B = problem.advection(t, x, sub);
        const Vec uv = u.value(t, x, sub);
        const Mat2 ug = u.gradient(t, x, sub);
        basis.eval(tp.plus_ref[q], phi, dphi);
        for (int i = 0; i < ncomp; ++i) {
          if (!problem.boundary.is_dirichlet(i, mid, n)) {
            // Neumann outflow term of the operator.
            const double bn = B(i, 0) * n.x + B(i, 1) * n.y;
            const double xplus = (bn >= 0.0) ? 1.0 : 0.0;
            for (int k = 0; k < basis.size(); ++k)
              out[dofs(e, i, k)] += tp.weights[q] * xplus * uv[i] * bn * phi[k];
            continue;
          }
          const double bn = B(i, 0) * n.x + B(i, 1) * n.y;
          const double xplus = (bn >= 0.0) ? 1.0 : 0.0;
          const double flux = a[i] * (ug(i, 0) * n.x + ug(i, 1) * n.y) - xplus * uv[i] * bn;
          for (int k = 0; k < basis.size(); ++k) {
            const double dnphi = gx * n.x * dphi(k, 0) + gy * n.y * dphi(k, 1);
            out[dofs(e, i, k)] += tp.weights[q] * (-(flux * phi[k]) - a[i] * dnphi * uv[i] +
                                                   sigma[i] * uv[i] * phi[k]);
          }
        }
      }
      continue;
    }

    const int ep = f.plus_element, em = f.minus_element;
    const int subp = mesh.element_subdomain[ep], subm = mesh.element_subdomain[em];
    const ReferenceBasis bp(space.degree(ep)), bm(space.degree(em));
    Eigen::VectorXd phip, phim;
    Eigen::MatrixXd dphip, dphim;

    if (f.kind == FaceKind::Interface) {
      for (std::size_t q = 0; q < tp.physical.size(); ++q) {
        const Point2 x = tp.physical[q];
        const Mat2 B1 = problem.advection(t, x, 1);
        const Mat2 B2 = problem.advection(t, x, 2);
        const Vec u1 = u.value(t, x, 1), u2 = u.value(t, x, 2);
        const Vec bI = interface_upwind(iface, problem, t, x, n);
        const Vec r = iface.friction(x);
        const Vec ptilde = iface.flux(u1, u2);
        bp.eval(tp.plus_ref[q], phip, dphip);
        bm.eval(tp.minus_ref[q], phim, dphim);
        for (int i = 0; i < ncomp; ++i) {
          const double bn1 = B1(i, 0) * n.x + B1(i, 1) * n.y;
          const double bn2 = B2(i, 0) * n.x + B2(i, 1) * n.y;
          const double mean_adv = 0.5 * (u1[i] * bn1 + u2[i] * bn2);
          const double jump = u1[i] - u2[i];
          // Operator interface term plus the membrane form.
          const double integrand = (mean_adv + bI[i] * jump) +
                                   (ptilde[i] - (1.0 - r[i]) * (mean_adv + bI[i] * jump));
          for (int k = 0; k < bp.size(); ++k)
            out[dofs(ep, i, k)] += tp.weights[q] * integrand * phip[k];
          for (int k = 0; k < bm.size(); ++k)
            out[dofs(em, i, k)] -= tp.weights[q] * integrand * phim[k];
        }
      }
    } else {
      const Vec sigma = face_penalty(space, penalty, a_sup, f);
      for (std::size_t q = 0; q < tp.physical.size(); ++q) {
        const Point2 x = tp.physical[q];
        const Vec ap = problem.diffusion(t, x, subp), am = problem.diffusion(t, x, subm);
        const Mat2 Bp = problem.advection(t, x, subp), Bm = problem.advection(t, x, subm);
        const Vec up = u.value(t, x, subp), um = u.value(t, x, subm);
        const Mat2 ugp = u.gradient(t, x, subp), ugm = u.gradient(t, x, subm);
        bp.eval(tp.plus_ref[q], phip, dphip);
        bm.eval(tp.minus_ref[q], phim, dphim);
        for (int i = 0; i < ncomp; ++i) {
          const double bnp = Bp(i, 0) * n.x + Bp(i, 1) * n.y;
          const double bnm = Bm(i, 0) * n.x + Bm(i, 1) * n.y;
          const double mean_flux =
              0.5 * ((ap[i] * (ugp(i, 0) * n.x + ugp(i, 1) * n.y) - up[i] * bnp) +
                     (am[i] * (ugm(i, 0) * n.x + ugm(i, 1) * n.y) - um[i] * bnm));
          const double jump = up[i] - um[i];
          const double pen = (sigma[i] + 0.5 * std::abs(bnp)) * jump;
          for (int k = 0; k < bp.size(); ++k) {
            const double dnphi = gx * n.x * dphip(k, 0) + gy * n.y * dphip(k, 1);
            out[dofs(ep, i, k)] += tp.weights[q] * (-(mean_flux * phip[k]) -
                                                    0.5 * ap[i] * dnphi * jump + pen * phip[k]);
          }
          for (int k = 0; k < bm.size(); ++k) {
            const double dnphi = gx * n.x * dphim(k, 0) + gy * n.y * dphim(k, 1);
            out[dofs(em, i, k)] += tp.weights[q] * ((mean_flux * phim[k]) -
                                                    0.5 * am[i] * dnphi * jump - pen * phim[k]);
          }
        }
      }
    }
  }
  return out;
}

Vec solve_elliptic(const FeSpace& space, const ProblemDefinition& problem,
                   const InterfaceModel& iface, const PenaltyConfig& penalty, double lambda,
                   const Vec& rhs, const Vec& w0, double t) {
  const SpMat B = assemble_operator(space, problem, iface, penalty, t);
  const SpMat M = assemble_mass(space);
  SpMat A = (B + lambda * M).eval();
  SpMat K;
  const bool fold = iface.permeability_is_constant;
  if (fold) {
    K = linearize_interface_form(space, iface, problem, t);
    A = (A + K).eval();
  }
  LinearSolver solver;
  solver.factor(A);

  Vec w = w0;
  double prev_inc = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 50; ++it) {
    Vec lag = eval_interface_form(space, iface, problem, w, t);
    if (fold) lag -= K * w;
    const Vec next = solver.solve(rhs - lag);
    const double inc = (next - w).cwiseAbs().maxCoeff();
    w = next;
    if (inc <= 1e-12 * (1.0 + w.cwiseAbs().maxCoeff())) return w;
    if (it > 5 && inc > 2.0 * prev_inc)
      throw PicardDiverged("elliptic projection: increment growing at iteration " +
                           std::to_string(it) + " (" + std::to_string(inc) + ")");
    prev_inc = inc;
  }
  throw PicardDiverged("elliptic projection: no convergence within 50 iterations");
}

}  // namespace

Vec elliptic_projection(const FeSpace& space, const ProblemDefinition& problem,
                        const InterfaceModel& iface, const PenaltyConfig& penalty,
                        double lambda, const ExactField& target, double t) {
  const Vec rhs = assemble_applied_form(space, problem, iface, penalty, target, lambda, t);
  const Vec w0 = space.project(
      [&](Point2 x, int sub) { return target.value(t, x, sub); });
  return solve_elliptic(space, problem, iface, penalty, lambda, rhs, w0, t);
}

Vec elliptic_projection_of_discrete(const FeSpace& space, const ProblemDefinition& problem,
                                    const InterfaceModel& iface, const PenaltyConfig& penalty,
                                    double lambda, const Vec& target, double t) {
  const SpMat B = assemble_operator(space, problem, iface, penalty, t);
  const SpMat M = assemble_mass(space);
  Vec rhs = B * target + lambda * (M * target);
  rhs += eval_interface_form(space, iface, problem, target, t);
  return solve_elliptic(space, problem, iface, penalty, lambda, rhs, target, t);
}

Vec initial_state(const FeSpace& space, const ProblemDefinition& problem,
                  const InterfaceModel& iface, const PenaltyConfig& penalty,
                  const SchemeConfig& scheme) {
  if (scheme.init == SchemeConfig::Init::L2Projection) return initial_l2(space, problem);
  if (!problem.exact)
    throw std::invalid_argument("elliptic-projection initial data needs the exact solution");
  return elliptic_projection(space, problem, iface, penalty, scheme.elliptic_lambda,
                             *problem.exact, 0.0);
}

}  // namespace memdg
