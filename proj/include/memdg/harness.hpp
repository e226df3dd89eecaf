#pragma once

#include <string>
#include <vector>

#include "memdg/stepper.hpp"

namespace memdg {

/// Problem with a known exact solution and the forcing that makes the PDE
/// hold; carries the analytic Laplacian so the residual can be cross-checked.
struct ManufacturedProblem {
  ProblemDefinition problem;
  InterfaceModel iface;
  std::function<Vec(double t, Point2 x, int subdomain)> laplacian;

  /// Max-abs PDE residual u_t - div(A grad u - U B) + F(u) - f over components.
  double residual(double t, Point2 x, int subdomain) const;
};

/// Two-component advection-diffusion-reaction system on [-1,1]^2 with the
/// membrane at x = 0 and a smooth discontinuous-across-the-interface exact
/// solution; forcing derived analytically.
ManufacturedProblem build_convergence_problem();

/// Scalar advection-dominated configuration: a = 1e-2, b = (0.5, 0.5),
/// homogeneous Neumann walls, filtering membrane, Gaussian initial bump.
struct AdvectionProblem {
  ProblemDefinition problem;
  InterfaceModel iface;
};
AdvectionProblem build_advection_problem();

/// Running composite-trapezoid integral of the squared energy-norm error and
/// running max of the L2 error, sampled once per accepted step.
class ErrorAccumulator {
 public:
  void add(double t, double dg_error_squared, double l2_error);
  double l2s_error() const { return std::sqrt(std::max(0.0, integral_)); }
  double linf_l2_error() const { return max_l2_; }
  int samples() const { return count_; }

 private:
  bool started_ = false;
  double prev_t_ = 0.0, prev_val_ = 0.0;
  double integral_ = 0.0;
  double max_l2_ = 0.0;
  int count_ = 0;
};

struct ConvergenceRow {
  int cells = 0;
  int dofs = 0;
  double err_l2s = 0.0;
  double rate_l2s = std::numeric_limits<double>::quiet_NaN();
  double err_linf_l2 = 0.0;
  double rate_linf_l2 = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::string to_text() const;
};

/// rate_j = log2(err_{j-1} / err_j); the first entry is NaN.
std::vector<double> rates_from_errors(const std::vector<double>& errors);

struct StudyOptions {
  double theta = 0.5;
  double t_final = 1.0;
  bool interface_implicit = false;
  LinearSolver::Method solver = LinearSolver::Method::SparseLU;
  int threads = 1;
  SchemeConfig::Init init = SchemeConfig::Init::L2Projection;
  double elliptic_lambda = 1.0;
  bool verbose = false;
};

/// Levels 2x2, 4x4, ... integrated to t_final with error norms accumulated
/// every step against the exact solution.
ConvergenceTable run_convergence_study(int degree, int n_levels, double dt, double c_sigma,
                                       const StudyOptions& options = {});

struct AdvectionReport {
  int nx = 0;
  bool finite = false;
  double initial_linf = 0.0;
  double max_linf = 0.0;
  std::vector<double> snapshot_times;
  std::vector<double> interface_jump_mean;  // mean |[[u]]| at snapshot times
  double layer_strip_mean = 0.0;      // mean over [-h, 0) x [y0, y1] at t_final
  double layer_neighbor_mean = 0.0;   // mean over [-2h, -h)
  std::vector<std::string> vtk_files;
};

/// Integrates the advection configuration on each mesh in nx_list; emits VTK
/// snapshots at 0.5-intervals when out_dir is nonempty.
std::vector<AdvectionReport> run_advection_study(const std::vector<int>& nx_list, int degree,
                                                 double dt, double t_final,
                                                 const std::string& out_dir = "",
                                                 int threads = 1, double c_sigma = 10.0);

/// |U_k(T) - U_ref(T)|_{L2} on a fixed mesh for each dt (self-convergence).
std::vector<double> temporal_self_convergence(const std::vector<double>& dts, double dt_ref,
                                              int nx, int degree, double t_final,
                                              int threads = 1);

/// Integral of each component over the whole domain (constant-mode weights).
Vec total_mass(const FeSpace& space, const Vec& state);

/// Mean of one component over the elements whose centers fall in [x_lo, x_hi).
double strip_mean(const FeSpace& space, const Vec& state, int component, double x_lo,
                  double x_hi);

/// Mean |u1 - u2| over the interface quadrature points.
double interface_jump_mean(const FeSpace& space, const Vec& state);

}  // namespace memdg
