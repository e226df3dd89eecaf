#include "memdg/harness.hpp"
#include "memdg/errors.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "memdg/io.hpp"

namespace memdg {

namespace {

// Spatial profile of the convergence test: X(x) per compartment times
// E(y) = exp((y^2-1)^2),
struct Profile {
  static double X(double x, int sub) { return sub == 1 ? 4.0 * x * (1.0 + x) : -4.0 * x * x * x + 3.0 * x + 1.0; }
  static double Xp(double x, int sub) { return sub == 1 ? 4.0 + 8.0 * x : -12.0 * x * x + 3.0; }
  static double Xpp(double x, int sub) { return sub == 1 ? 8.0 : -24.0 * x; }
  static double E(double y) {
    const double g = (y * y - 1.0) * (y * y - 1.0);
    return std::exp(g);
  }
  static double Ep(double y) { return (4.0 * y * y * y - 4.0 * y) * E(y); }
  static double Epp(double y) {
    const double gp = 4.0 * y * y * y - 4.0 * y;
    const double gpp = 12.0 * y * y - 4.0;
    return (gpp + gp * gp) * E(y);
  }
};

}  // namespace

double ManufacturedProblem::residual(double t, Point2 x, int subdomain) const {
  const Vec ut = problem.exact->time_derivative(t, x, subdomain);
  const Vec uv = problem.exact->value(t, x, subdomain);
  const Mat2 ug = problem.exact->gradient(t, x, subdomain);
  const Vec lap = laplacian(t, x, subdomain);
  const Vec a = problem.diffusion(t, x, subdomain);
  const Mat2 B = problem.advection(t, x, subdomain);
  const Vec F = problem.reaction(uv, x, subdomain);
  const Vec f = problem.forcing(t, x, subdomain);
  double worst = 0.0;
  for (int i = 0; i < problem.n_components; ++i) {
    // Constant diagonal diffusion and divergence-free advection:
    // -div(a_i grad u_i - u_i B_i) = -a_i lap(u_i) + B_i . grad u_i.
    const double r = ut[i] - a[i] * lap[i] + (B(i, 0) * ug(i, 0) + B(i, 1) * ug(i, 1)) +
                     F[i] - f[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

ManufacturedProblem build_convergence_problem() {
  ManufacturedProblem mp;
  ProblemDefinition& p = mp.problem;
  p.n_components = 2;
  p.alpha_min = 1.0;
  p.gamma = 1.0;
  p.diffusion = constant_field(Vec::Ones(2));
  Mat2 b(2, 2);
  b << -1.0, 0.0, -1.0, 0.0;
  p.advection = constant_advection(b);
  p.advection_div = constant_field(Vec::Zero(2));
  p.reaction = [](const Vec& u, Point2, int sub) {
    Vec F(2);
    if (sub == 1)
      F[0] = -(u[0] * u[0] - u[1] * (1.0 - u[1]));
    else
      F[0] = u[1];
    F[1] = -u[0];
    return F;
  };
  p.forcing = [](double t, Point2 x, int sub) {
    const double E = Profile::E(x.y), Epp = Profile::Epp(x.y);
    const double X = Profile::X(x.x, sub), Xp = Profile::Xp(x.x, sub),
                 Xpp = Profile::Xpp(x.x, sub);
    const double shape = (Xpp + Xp) * E + X * Epp;
    Vec f(2);
    f[0] = -std::cos(t) * shape;
    if (sub == 1) {
      const double G = X * E;
      f[0] -= G * G;
    }
    f[1] = -std::sin(t) * shape;
    return f;
  };
  p.dirichlet_data = constant_boundary_data(Vec::Zero(2));
  p.neumann_data = constant_boundary_data(Vec::Zero(2));
  p.boundary = BoundarySpec::dirichlet_vertical_sides();

  ExactField exact;
  exact.value = [](double t, Point2 x, int sub) {
    const double G = Profile::X(x.x, sub) * Profile::E(x.y);
    Vec u(2);
    u[0] = std::cos(t) * G;
    u[1] = std::sin(t) * G;
    return u;
  };
  exact.gradient = [](double t, Point2 x, int sub) {
    const double E = Profile::E(x.y), Ep = Profile::Ep(x.y);
    const double X = Profile::X(x.x, sub), Xp = Profile::Xp(x.x, sub);
    Mat2 g(2, 2);
    g(0, 0) = std::cos(t) * Xp * E;
    g(0, 1) = std::cos(t) * X * Ep;
    g(1, 0) = std::sin(t) * Xp * E;
    g(1, 1) = std::sin(t) * X * Ep;
    return g;
  };
  exact.time_derivative = [](double t, Point2 x, int sub) {
    const double G = Profile::X(x.x, sub) * Profile::E(x.y);
    Vec u(2);
    u[0] = -std::sin(t) * G;
    u[1] = std::cos(t) * G;
    return u;
  };
  p.exact = exact;
  p.initial = [exact](Point2 x, int sub) { return exact.value(0.0, x, sub); };

  mp.laplacian = [](double t, Point2 x, int sub) {
    const double E = Profile::E(x.y), Epp = Profile::Epp(x.y);
    const double X = Profile::X(x.x, sub), Xpp = Profile::Xpp(x.x, sub);
    const double shape = Xpp * E + X * Epp;
    Vec l(2);
    l[0] = std::cos(t) * shape;
    l[1] = std::sin(t) * shape;
    return l;
  };

  // Membrane closure compatible with the exact solution: the flow crosses
  // from compartment 2 into compartment 1, so the second weight dominates.
  Eigen::MatrixXd P(2, 2);
  P << 3.0, 0.0, 0.0, 3.0;
  mp.iface = make_constant_interface(P, Vec::Zero(2), Vec::Ones(2), Vec::Ones(2));
  return mp;
}

AdvectionProblem build_advection_problem() {
  AdvectionProblem ap;
  ProblemDefinition& p = ap.problem;
  p.n_components = 1;
  p.alpha_min = 1e-2;
  p.gamma = 0.0;
  p.diffusion = constant_field(Vec::Constant(1, 1e-2));
  Mat2 b(1, 2);
  b << 0.5, 0.5;
  p.advection = constant_advection(b);
  p.advection_div = constant_field(Vec::Zero(1));
  p.dirichlet_data = constant_boundary_data(Vec::Zero(1));
  p.neumann_data = constant_boundary_data(Vec::Zero(1));
  p.boundary = BoundarySpec::all_neumann();
  p.initial = [](Point2 x, int) {
    Vec u(1);
    const double r2 = (x.x + 0.5) * (x.x + 0.5) + x.y * x.y;
    u[0] = std::exp(-8.0 * r2);
    return u;
  };
  ap.iface = make_constant_interface(Eigen::MatrixXd::Constant(1, 1, 0.2),
                                     Vec::Constant(1, 5.0 / 6.0), Vec::Constant(1, 1.0 / 6.0),
                                     Vec::Constant(1, 0.6));
  return ap;
}

void ErrorAccumulator::add(double t, double dg_sq, double l2) {
  if (started_) integral_ += 0.5 * (t - prev_t_) * (prev_val_ + dg_sq);
  started_ = true;
  prev_t_ = t;
  prev_val_ = dg_sq;
  max_l2_ = std::max(max_l2_, l2);
  ++count_;
}

std::vector<double> rates_from_errors(const std::vector<double>& errors) {
  std::vector<double> rates(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 1; j < errors.size(); ++j)
    rates[j] = std::log2(errors[j - 1] / errors[j]);
  return rates;
}

std::string ConvergenceTable::to_text() const {
  std::ostringstream os;
  os << "  cells     dofs     err_L2S   rate    err_LinfL2  rate\n";
  char line[160];
  for (const auto& r : rows) {
    auto rate = [](double v) {
      char buf[16];
      if (std::isnan(v)) std::snprintf(buf, sizeof buf, "%6s", "-");
      else std::snprintf(buf, sizeof buf, "%6.2f", v);
      return std::string(buf);
    };
    std::snprintf(line, sizeof line, "%7d %8d   %.3e  %s    %.3e  %s\n", r.cells, r.dofs,
                  r.err_l2s, rate(r.rate_l2s).c_str(), r.err_linf_l2,
                  rate(r.rate_linf_l2).c_str());
    os << line;
  }
  return os.str();
}

ConvergenceTable run_convergence_study(int degree, int n_levels, double dt, double c_sigma,
                                       const StudyOptions& options) {
  const ManufacturedProblem mp = build_convergence_problem();
  const PenaltyConfig penalty(c_sigma);
  ConvergenceTable table;

  Mesh mesh = build_structured_mesh(Domain2D(-1.0, 1.0, -1.0, 1.0, 0.0), 2, 2);
  for (const auto& w : mp.problem.validate(mesh)) std::cerr << "warning: " << w << "\n";
  for (const auto& w : mp.iface.validate(mesh, mp.problem))
    std::cerr << "warning: " << w << "\n";
  for (int level = 0; level < n_levels; ++level) {
    const FeSpace space(mesh, degree, mp.problem.n_components);
    SchemeConfig scheme;
    scheme.dt = dt;
    scheme.t_final = options.t_final;
    scheme.theta = options.theta;
    scheme.interface_implicit = options.interface_implicit;
    scheme.solver = options.solver;
    scheme.threads = options.threads;
    scheme.init = options.init;
    scheme.elliptic_lambda = options.elliptic_lambda;

    const DiscreteSystem system =
        build_discrete_system(space, mp.problem, mp.iface, penalty, scheme);
    const Vec u0 = initial_state(space, mp.problem, mp.iface, penalty, scheme);

    ErrorAccumulator acc;
    Observer err_obs{[&](int, double t, const Vec& u) {
      const double dg =
          dg_norm_error(space, mp.problem, mp.iface, penalty, u, *mp.problem.exact, t);
      acc.add(t, dg * dg, l2_error(space, u, *mp.problem.exact, t));
    }};
    integrate(system, scheme, u0, {err_obs});

    ConvergenceRow row;
    row.cells = mesh.n_elements();
    row.dofs = space.total_dofs();
    row.err_l2s = acc.l2s_error();
    row.err_linf_l2 = acc.linf_l2_error();
    if (!table.rows.empty()) {
      row.rate_l2s = std::log2(table.rows.back().err_l2s / row.err_l2s);
      row.rate_linf_l2 = std::log2(table.rows.back().err_linf_l2 / row.err_linf_l2);
    }
    table.rows.push_back(row);
    if (options.verbose)
      std::cerr << "level " << level << ": cells=" << row.cells << " err_L2S=" << row.err_l2s
                << " err_LinfL2=" << row.err_linf_l2 << "\n";
    if (level + 1 < n_levels) mesh = refine_uniform(mesh);
  }
  return table;
}

Vec total_mass(const FeSpace& space, const Vec& state) {
  const Mesh& mesh = space.mesh();
  const double cell_area = mesh.dx * mesh.dy;
  Vec mass = Vec::Zero(space.n_components());
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int i = 0; i < space.n_components(); ++i)
      mass[i] += cell_area * state[space.dofs()(e, i, 0)];
  return mass;
}

double strip_mean(const FeSpace& space, const Vec& state, int component, double x_lo,
                  double x_hi) {
  const Mesh& mesh = space.mesh();
  double sum = 0.0;
  int count = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double cx = mesh.element_center(e).x;
    if (cx >= x_lo && cx < x_hi) {
      sum += state[space.dofs()(e, component, 0)];  // constant mode = element mean
      ++count;
    }
  }
  return count ? sum / count : 0.0;
}

double interface_jump_mean(const FeSpace& space, const Vec& state) {
  const Mesh& mesh = space.mesh();
  double sum = 0.0;
  int count = 0;
  for (const Face& f : mesh.faces) {
    if (f.kind != FaceKind::Interface) continue;
    const FeSpace::Tables& t = space.tables_for_degree(space.degree(f.plus_element));
    for (int q = 0; q < t.line.size(); ++q) {
      for (int i = 0; i < space.n_components(); ++i) {
        double vp = 0.0, vm = 0.0;
        for (int j = 0; j < t.nb; ++j) {
          vp += state[space.dofs()(f.plus_element, i, j)] * t.tval[f.plus_side](q, j);
          vm += state[space.dofs()(f.minus_element, i, j)] * t.tval[f.minus_side](q, j);
        }
        sum += std::abs(vp - vm);
        ++count;
      }
    }
  }
  return count ? sum / count : 0.0;
}

std::vector<AdvectionReport> run_advection_study(const std::vector<int>& nx_list, int degree,
                                                 double dt, double t_final,
                                                 const std::string& out_dir, int threads,
                                                 double c_sigma) {
  const AdvectionProblem ap = build_advection_problem();
  const PenaltyConfig penalty(c_sigma);
  std::vector<AdvectionReport> reports;

  bool warned = false;
  for (int nx : nx_list) {
    const Mesh mesh = build_structured_mesh(Domain2D(-1.0, 1.0, -1.0, 1.0, 0.0), nx, nx);
    if (!warned) {
      for (const auto& w : ap.problem.validate(mesh)) std::cerr << "warning: " << w << "\n";
      for (const auto& w : ap.iface.validate(mesh, ap.problem))
        std::cerr << "warning: " << w << "\n";
      warned = true;
    }
    const FeSpace space(mesh, degree, 1);
    SchemeConfig scheme;
    scheme.dt = dt;
    scheme.t_final = t_final;
    scheme.threads = threads;
    const DiscreteSystem system =
        build_discrete_system(space, ap.problem, ap.iface, penalty, scheme);
    const Vec u0 = initial_l2(space, ap.problem);

    AdvectionReport report;
    report.nx = nx;
    report.initial_linf = linf_estimate(space, u0);
    report.max_linf = 0.0;

    const double snap_interval = 0.5;
    Observer watch{[&](int, double t, const Vec& u) {
      report.max_linf = std::max(report.max_linf, linf_estimate(space, u));
      const double nearest = std::round(t / snap_interval) * snap_interval;
      if (std::abs(t - nearest) < 0.5 * dt && nearest <= t_final + 1e-12) {
        report.snapshot_times.push_back(t);
        report.interface_jump_mean.push_back(interface_jump_mean(space, u));
        if (!out_dir.empty()) {
          std::ostringstream name;
          name << out_dir << "/advection_" << nx << "_t" << nearest << ".vtk";
          write_vtk(space, u, name.str(), {"u"});
          report.vtk_files.push_back(name.str());
        }
      }
    }};

    Vec final_state;
    try {
      final_state = integrate(system, scheme, u0, {watch}).state;
      report.finite = true;
    } catch (const NonFiniteState&) {
      report.finite = false;
      reports.push_back(report);
      continue;
    }
    const double h = mesh.dx;
    report.layer_strip_mean = strip_mean(space, final_state, 0, -h, 0.0);
    report.layer_neighbor_mean = strip_mean(space, final_state, 0, -2.0 * h, -h);
    reports.push_back(report);
  }
  return reports;
}

std::vector<double> temporal_self_convergence(const std::vector<double>& dts, double dt_ref,
                                              int nx, int degree, double t_final,
                                              int threads) {
  const ManufacturedProblem mp = build_convergence_problem();
  const PenaltyConfig penalty;
  const Mesh mesh = build_structured_mesh(Domain2D(-1.0, 1.0, -1.0, 1.0, 0.0), nx, nx);
  const FeSpace space(mesh, degree, mp.problem.n_components);

  auto run = [&](double k) {
    SchemeConfig scheme;
    scheme.dt = k;
    scheme.t_final = t_final;
    scheme.threads = threads;
    // The membrane permeability is constant, so its form belongs to the
    // linear operator; the coarsest steps sit outside the explicit-stage
    // stability interval of the jump term on this mesh.
    scheme.interface_implicit = true;
    const DiscreteSystem system =
        build_discrete_system(space, mp.problem, mp.iface, penalty, scheme);
    return integrate(system, scheme, initial_l2(space, mp.problem), {}).state;
  };

  const Vec ref = run(dt_ref);
  std::vector<double> errors;
  errors.reserve(dts.size());
  for (double k : dts) errors.push_back(l2_norm(space, (run(k) - ref).eval()));
  return errors;
}

}  // namespace memdg
