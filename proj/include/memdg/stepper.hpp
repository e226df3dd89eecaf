#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "memdg/interface.hpp"
#include "memdg/operators.hpp"

namespace memdg {

/// Factor-once wrapper around the implicit-stage matrix. Every solve is
/// residual-checked to 1e-10 relative and throws SolverFailure past that.
class LinearSolver {
 public:
  enum class Method { SparseLU, Gmres };

  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  void factor(const SpMat& A, Method method = Method::SparseLU);
  Vec solve(const Vec& b) const;
  bool ready() const;
  Method method() const { return method_; }

 private:
  struct Impl;
  Method method_ = Method::SparseLU;
  std::unique_ptr<Impl> impl_;
};

struct SchemeConfig {
  double dt = 5e-4;
  double theta = 0.5;  // trapezium weight on the linear operator
  double t_final = 1.0;
  bool interface_implicit = false;
  enum class Init { L2Projection, EllipticProjection };
  Init init = Init::L2Projection;
  double elliptic_lambda = 1.0;
  LinearSolver::Method solver = LinearSolver::Method::SparseLU;
  int threads = 1;
};

/// Combined explicit right-hand side as a pure function of (state, t).
using ExplicitBucket = std::function<Vec(const Vec&, double)>;

/// M U_t = L U + F(U): mass, linear operator and the explicit bucket.
struct DiscreteSystem {
  SpMat M;
  SpMat L;
  ExplicitBucket bucket;
  bool interface_in_L = false;
};

/// Assembles mass and the linear operator at t0, routes the membrane form
/// into L (constant permeability only) or into the bucket, and wires the
/// bucket to -reaction - interface + boundary data.
DiscreteSystem build_discrete_system(const FeSpace& space, const ProblemDefinition& problem,
                                     const InterfaceModel& iface, const PenaltyConfig& penalty,
                                     const SchemeConfig& scheme, double t0 = 0.0);

struct StateHistory {
  Vec u_prev, u_curr;
  Vec f_prev, f_curr;  // cached bucket values at (u_prev, t_prev), (u_curr, t_curr)
  double t_prev = 0.0, t_curr = 0.0;
  int step_index = 0;
};

/// Two-step scheme driver holding the factored implicit-stage matrix
/// (M - k theta L) and the precomputed explicit-stage matrix.
class TimeIntegrator {
 public:
  TimeIntegrator(const DiscreteSystem& system, const SchemeConfig& scheme);

  /// First step: theta scheme on L, first-order explicit bucket.
  StateHistory bootstrap_first_step(const Vec& u0, double t0 = 0.0) const;
  /// One AB2-AM2 step; advances the history in place and returns the state.
  const Vec& step(StateHistory& history) const;

  const LinearSolver& solver() const { return solver_; }

 private:
  const DiscreteSystem* system_;
  SchemeConfig scheme_;
  SpMat explicit_stage_;  // M + k (1-theta) L
  LinearSolver solver_;
};

struct Observer {
  std::function<void(int step, double t, const Vec&)> fn;
};

struct IntegrateResult {
  Vec state;
  int steps = 0;
};

/// Runs t: 0 -> t_final; observers see every accepted state including the
/// initial one. Throws NonFiniteState with the offending step index.
IntegrateResult integrate(const DiscreteSystem& system, const SchemeConfig& scheme,
                          const Vec& u0, const std::vector<Observer>& observers = {});

/// Componentwise L2-orthogonal projection of the initial data.
Vec initial_l2(const FeSpace& space, const ProblemDefinition& problem);

/// Stationary projection solve: B(w,v) + lambda (w,v) + N(w,v) equals the
/// same form applied to the target field; Picard on the membrane
/// nonlinearity (one pass when the permeability is constant).
Vec elliptic_projection(const FeSpace& space, const ProblemDefinition& problem,
                        const InterfaceModel& iface, const PenaltyConfig& penalty,
                        double lambda, const ExactField& target, double t = 0.0);

/// Same solve with a discrete target (consistency: returns the target).
Vec elliptic_projection_of_discrete(const FeSpace& space, const ProblemDefinition& problem,
                                    const InterfaceModel& iface, const PenaltyConfig& penalty,
                                    double lambda, const Vec& target, double t = 0.0);

/// Initial state per the scheme configuration.
Vec initial_state(const FeSpace& space, const ProblemDefinition& problem,
                  const InterfaceModel& iface, const PenaltyConfig& penalty,
                  const SchemeConfig& scheme);

}  // namespace memdg
