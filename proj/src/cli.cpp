#include "memdg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "memdg/errors.hpp"
#include "memdg/harness.hpp"
#include "memdg/io.hpp"

namespace memdg {

namespace {

void configure(CLI::App& app, RunConfig& cfg, bool& dt_given, bool& tfinal_given) {
  app.add_option("--experiment", cfg.experiment, "convergence | advection | custom")
      ->required()
      ->check(CLI::IsMember({"convergence", "advection", "custom"}));
  app.add_option("--degree", cfg.degree, "polynomial degree per cell")
      ->check(CLI::Range(1, 4))
      ->capture_default_str();
  app.add_option("--levels", cfg.levels, "refinement levels, starting at 2x2")
      ->check(CLI::Range(1, 10))
      ->capture_default_str();
  app.add_option("--dt", cfg.dt, "time step (advection default: 1e-3)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str()
      ->trigger_on_parse()
      ->each([&dt_given](const std::string&) { dt_given = true; });
  app.add_option("--t-final", cfg.t_final, "final time (advection default: 2)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str()
      ->trigger_on_parse()
      ->each([&tfinal_given](const std::string&) { tfinal_given = true; });
  app.add_option("--sigma", cfg.sigma, "discontinuity penalization constant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--theta", cfg.theta, "implicit weight of the trapezium stage")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--interface", cfg.interface_mode, "membrane term routing")
      ->check(CLI::IsMember({"explicit", "implicit"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  app.add_option("--solver", cfg.solver, "linear solver")
      ->check(CLI::IsMember({"lu", "gmres"}))
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "assembly/evaluation threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  app.add_option("--nx", cfg.nx, "mesh sizes for the advection experiment")
      ->check(CLI::Range(2, 4096));
  app.add_option("--init", cfg.init, "initial condition projection")
      ->check(CLI::IsMember({"l2", "elliptic"}))
      ->capture_default_str();
  app.add_option("--lambda", cfg.elliptic_lambda, "elliptic-projection shift")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--config", cfg.config_file, "JSON problem file (custom experiment)");
  app.add_flag("--dump-system", cfg.dump_system, "write M.mtx and L.mtx to the output dir");
}

}  // namespace

std::uint64_t RunConfig::hash() const {
  std::ostringstream os;
  os << experiment << '|' << degree << '|' << levels << '|' << dt << '|' << t_final << '|'
     << sigma << '|' << theta << '|' << interface_mode << '|' << out_dir << '|' << solver
     << '|' << threads << '|' << init << '|' << elliptic_lambda << '|' << config_file << '|'
     << dump_system;
  for (int n : nx) os << '|' << n;
  const std::string s = os.str();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string usage_text() {
  CLI::App app{"memdg: interior-penalty dG solver for two-compartment "
               "advection-diffusion-reaction systems with membrane coupling"};
  app.name("memdg");
  RunConfig cfg;
  bool b1 = false, b2 = false;
  configure(app, cfg, b1, b2);
  return app.help();
}

ParsedCli parse_cli(const std::vector<std::string>& args) {
  CLI::App app{"memdg: interior-penalty dG solver for two-compartment "
               "advection-diffusion-reaction systems with membrane coupling"};
  app.name("memdg");
  ParsedCli result;
  bool dt_given = false, tfinal_given = false;
  configure(app, result.config, dt_given, tfinal_given);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.help = true;
    result.help_text = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n\n" + app.help());
  }
  if (result.config.experiment == "advection") {
    if (!dt_given) result.config.dt = 1e-3;
    if (!tfinal_given) result.config.t_final = 2.0;
  }
  if (result.config.experiment == "custom" && result.config.config_file.empty())
    throw UsageError("custom experiment requires --config FILE\n\n" + app.help());
  return result;
}

namespace {

LinearSolver::Method solver_of(const RunConfig& cfg) {
  return cfg.solver == "gmres" ? LinearSolver::Method::Gmres : LinearSolver::Method::SparseLU;
}

int run_convergence(const RunConfig& cfg) {
  StudyOptions opt;
  opt.theta = cfg.theta;
  opt.t_final = cfg.t_final;
  opt.interface_implicit = cfg.interface_mode == "implicit";
  opt.solver = solver_of(cfg);
  opt.threads = cfg.threads;
  opt.init = cfg.init == "elliptic" ? SchemeConfig::Init::EllipticProjection
                                    : SchemeConfig::Init::L2Projection;
  opt.elliptic_lambda = cfg.elliptic_lambda;
  opt.verbose = true;

  const ConvergenceTable table =
      run_convergence_study(cfg.degree, cfg.levels, cfg.dt, cfg.sigma, opt);
  std::cout << "convergence study, degree " << cfg.degree << ", dt " << cfg.dt << ":\n"
            << table.to_text();
  const std::string csv = cfg.out_dir + "/convergence_m" + std::to_string(cfg.degree) + ".csv";
  write_csv(table, csv);
  std::cout << "table written to " << csv << "\n";
  return 0;
}

int run_advection(const RunConfig& cfg) {
  const auto reports = run_advection_study(cfg.nx, cfg.degree, cfg.dt, cfg.t_final,
                                           cfg.out_dir, cfg.threads, cfg.sigma);
  for (const auto& r : reports) {
    std::cout << "advection run " << r.nx << "x" << r.nx << ": "
              << (r.finite ? "stable" : "NON-FINITE") << ", max|u|=" << r.max_linf
              << " (initial " << r.initial_linf << ")\n";
    for (std::size_t i = 0; i < r.snapshot_times.size(); ++i)
      std::cout << "  t=" << r.snapshot_times[i]
                << "  mean interface jump=" << r.interface_jump_mean[i] << "\n";
    std::cout << "  upwind strip means at t-final: adjacent " << r.layer_strip_mean
              << ", next " << r.layer_neighbor_mean << "\n";
    if (!r.finite) return 1;
  }
  return 0;
}

int run_custom(const RunConfig& cfg) {
  std::ifstream in(cfg.config_file);
  if (!in) throw IoError("cannot open config " + cfg.config_file);
  nlohmann::json j;
  in >> j;

  const auto dom = j.value("domain", nlohmann::json::object());
  Domain2D domain(dom.value("x0", -1.0), dom.value("x1", 1.0), dom.value("y0", -1.0),
                  dom.value("y1", 1.0), dom.value("interface_x", 0.0));
  const int nx = j.value("nx", 16), ny = j.value("ny", nx);
  const Mesh mesh = build_structured_mesh(domain, nx, ny);
  std::cout << mesh.summary() << "\n";

  ProblemDefinition p;
  p.n_components = 1;
  p.diffusion = constant_field(Vec::Constant(1, j.value("diffusion", 1e-2)));
  Mat2 b(1, 2);
  const auto adv = j.value("advection", std::vector<double>{0.5, 0.5});
  b << adv.at(0), adv.at(1);
  p.advection = constant_advection(b);
  p.advection_div = constant_field(Vec::Zero(1));
  p.dirichlet_data = constant_boundary_data(Vec::Zero(1));
  p.neumann_data = constant_boundary_data(Vec::Zero(1));
  const std::string bc = j.value("boundary", std::string("neumann"));
  p.boundary = bc == "dirichlet" ? BoundarySpec::all_dirichlet()
               : bc == "dirichlet_vertical" ? BoundarySpec::dirichlet_vertical_sides()
                                            : BoundarySpec::all_neumann();
  const auto init = j.value("initial", nlohmann::json::object());
  const auto center = init.value("center", std::vector<double>{-0.5, 0.0});
  const double width = init.value("width", 8.0);
  p.initial = [center, width](Point2 x, int) {
    const double r2 = (x.x - center.at(0)) * (x.x - center.at(0)) +
                      (x.y - center.at(1)) * (x.y - center.at(1));
    return Vec::Constant(1, std::exp(-width * r2)).eval();
  };

  const auto ji = j.value("interface", nlohmann::json::object());
  const double ups1 = ji.value("upsilon1", 0.5);
  InterfaceModel iface = make_constant_interface(
      Eigen::MatrixXd::Constant(1, 1, ji.value("permeability", 1.0)),
      Vec::Constant(1, ups1), Vec::Constant(1, 1.0 - ups1),
      Vec::Constant(1, ji.value("friction", 1.0)));

  for (const auto& w : p.validate(mesh)) std::cerr << "warning: " << w << "\n";
  for (const auto& w : iface.validate(mesh, p)) std::cerr << "warning: " << w << "\n";

  const FeSpace space(mesh, cfg.degree, 1);
  SchemeConfig scheme;
  scheme.dt = cfg.dt;
  scheme.t_final = cfg.t_final;
  scheme.theta = cfg.theta;
  scheme.interface_implicit = cfg.interface_mode == "implicit";
  scheme.solver = solver_of(cfg);
  scheme.threads = cfg.threads;
  const PenaltyConfig penalty(cfg.sigma);
  const DiscreteSystem system = build_discrete_system(space, p, iface, penalty, scheme);
  if (cfg.dump_system) {
    write_matrix_market(system.M, cfg.out_dir + "/M.mtx");
    write_matrix_market(system.L, cfg.out_dir + "/L.mtx");
  }

  const double snap = j.value("snapshot_interval", 0.5);
  int written = 0;
  Observer vtk_obs{[&](int, double t, const Vec& u) {
    const double nearest = std::round(t / snap) * snap;
    if (std::abs(t - nearest) < 0.5 * cfg.dt) {
      std::ostringstream name;
      name << cfg.out_dir << "/custom_t" << nearest << ".vtk";
      write_vtk(space, u, name.str(), {"u"});
      ++written;
    }
  }};
  const auto result = integrate(system, scheme, initial_l2(space, p), {vtk_obs});
  std::cout << "custom run finished: " << result.steps << " steps, max|u|="
            << linf_estimate(space, result.state) << ", " << written << " snapshots in "
            << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int run_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  ParsedCli parsed;
  try {
    parsed = parse_cli(args);
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (parsed.help) {
    std::cout << parsed.help_text;
    return 0;
  }
  const RunConfig& cfg = parsed.config;
  try {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.dump_system && cfg.experiment != "custom") {
      const bool conv = cfg.experiment == "convergence";
      const auto built_problem = conv ? build_convergence_problem().problem
                                      : build_advection_problem().problem;
      const auto built_iface =
          conv ? build_convergence_problem().iface : build_advection_problem().iface;
      const Mesh mesh = build_structured_mesh(Domain2D(-1, 1, -1, 1, 0.0),
                                              conv ? 2 : cfg.nx.front(),
                                              conv ? 2 : cfg.nx.front());
      const FeSpace space(mesh, cfg.degree, built_problem.n_components);
      SchemeConfig scheme;
      scheme.interface_implicit = cfg.interface_mode == "implicit";
      scheme.threads = cfg.threads;
      const DiscreteSystem system = build_discrete_system(
          space, built_problem, built_iface, PenaltyConfig(cfg.sigma), scheme);
      write_matrix_market(system.M, cfg.out_dir + "/M.mtx");
      write_matrix_market(system.L, cfg.out_dir + "/L.mtx");
    }
    if (cfg.experiment == "convergence") return run_convergence(cfg);
    if (cfg.experiment == "advection") return run_advection(cfg);
    return run_custom(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace memdg
