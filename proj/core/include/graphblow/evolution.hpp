#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <vector>

#include "graphblow/graph.hpp"
#include "graphblow/vertex_function.hpp"

namespace graphblow {

/// Explicit embedded Runge-Kutta options for u_t = Delta u + u^p.
struct SolverOptions {
  double rtol = 1e-6;
  double atol = 1e-9;
  double t_max = std::numeric_limits<double>::infinity();
  /// Blow-up is declared when sup u reaches this; never on step failure.
  double U_big = 1e8;
  long max_steps = 200000000;
  std::vector<double> sample_times;
  /// Vertices pinned to zero (absorbing truncation boundary). Empty = none.
  std::vector<int> dirichlet_boundary;
  /// Keep every accepted step (with derivatives) for dense evaluation.
  bool store_dense = false;
};

struct BlowupBracket {
  double t_lo = 0.0;  ///< integration verified existence up to here
  double t_hi = 0.0;  ///< certified upper end from the reaction tail
  double width() const { return t_hi - t_lo; }
};

struct DenseStep {
  double t;
  Eigen::VectorXd u;
  Eigen::VectorXd f;  ///< du/dt at t
};

struct EvolutionResult {
  enum class Status { completed, blowup };
  Status status = Status::completed;
  double t_end = 0.0;         ///< t_max (completed) or the stopping time (blowup)
  double sup_end = 0.0;       ///< sup u at t_end
  std::optional<BlowupBracket> bracket;
  std::vector<double> sample_times;        ///< the subset reached before t_end
  std::vector<Eigen::VectorXd> samples;
  std::vector<DenseStep> dense;
  long steps_accepted = 0;
  long steps_rejected = 0;
  double min_u_seen = 0.0;    ///< most negative state entry ever accepted

  bool blew_up() const { return status == Status::blowup; }
  /// Cubic Hermite evaluation inside the stored trajectory (store_dense).
  Eigen::VectorXd value_at(double t) const;
};

/// Integrate u_t = Delta u + u^p from u0 >= 0 until t_max or until sup u
/// crosses U_big. On a crossing the result carries the bracket
/// [t_stop, t_stop + (1 + eps_tail) sup^{1-p}/(p-1)] with
/// eps_tail = 10 * (2 D_mu) * U_big^{1-p}: past t_stop the running maximum
/// dominates the reaction-only solution with drift -D_mu u, which reaches
/// infinity within the padded tail.
EvolutionResult integrate(const WeightedGraph& g, const Eigen::VectorXd& u0, double p,
                          const SolverOptions& opts);

struct LifespanOptions {
  double t_max = 1e6;
  int initial_radius = 8;     ///< generator targets: first truncation radius
  int max_doublings = 6;
  std::optional<double> U_big;  ///< default: derived from the tolerance
  double rtol = 1e-8;
  double atol = 1e-11;
};

struct LifespanEstimate {
  bool blew_up = false;
  double T_est = std::numeric_limits<double>::infinity();
  BlowupBracket bracket;      ///< [t_max, inf) when no blow-up was seen
  bool converged = false;     ///< successive radii (or the bracket) within tol
  double tolerance = 0.0;
  std::vector<std::pair<int, double>> radius_table;  ///< (R, T(R)), generator targets
};

/// Lifespan of u_t = Delta u + u^p, u(0) = lambda psi. Finite targets run
/// once; generator targets run absorbing truncations at R, 2R, 4R, ...
/// (nonincreasing T(R), approaching the infinite-graph value from above)
/// until two agree within tol.
LifespanEstimate estimate_lifespan(const GraphSpec& target, const PsiSpec& psi, double lambda,
                                   double p, double tol, const LifespanOptions& lopts = {});

/// U_big that makes the blow-up bracket width at most tol for exponent p
/// (clamped to [1e4, 1e12]).
double ubig_for_tolerance(double tol, double p);

/// Function values on a uniform time grid over [0, T].
struct TimeGridFunction {
  double T = 0.0;
  int panels = 0;
  Eigen::MatrixXd values;  ///< n x (panels + 1)
  double time_at(int j) const { return T * double(j) / double(panels); }
};

struct MonotoneResult {
  TimeGridFunction lower, upper;  ///< final iterates; the truth lies between
  std::vector<double> gaps;       ///< sup gap per iteration, nonincreasing
  bool converged = false;
  int iterations = 0;
};

/// Sub/supersolution pair for data psi on [0, T]: the pure-diffusion flow
/// (reaction dropped) below, the space-constant reaction solution from
/// sup psi above. Requires T < (sup psi)^{1-p}/(p-1).
std::pair<TimeGridFunction, TimeGridFunction> monotone_default_bracket(
    const WeightedGraph& g, const Eigen::VectorXd& psi, double p, double T, int panels);

/// Monotone iteration between an ordered sub/supersolution pair: each sweep
/// solves u_t - Delta u + M u = v^p + M v exactly in the linear part
/// (semigroup action, 16-point Gauss-Legendre quadrature per panel for the
/// forcing). M must dominate the reaction slope p (sup upper)^{p-1}.
/// Defect signs of the inputs are checked on the grid before iterating.
MonotoneResult monotone_iterate(const WeightedGraph& g, const Eigen::VectorXd& psi, double p,
                                double T, const TimeGridFunction& lower,
                                const TimeGridFunction& upper, double M, int max_iters = 80,
                                double gap_tol = 1e-9);

/// Max over sample times of sup_x | u(t) - e^{t Delta} u(0)
///   - int_0^t e^{(t-s) Delta} u(s)^p ds |, the defect in the integral form
/// of the equation. Requires a densely stored, non-blow-up trajectory.
double duhamel_residual(const WeightedGraph& g, const EvolutionResult& traj, double p,
                        double quad_tol = 1e-10);

struct ComparisonCheck {
  bool ordered = false;
  double max_violation = 0.0;  ///< max over samples of max(0, u - v)
  double t_end = 0.0;
};

/// Integrate both data (u0 <= v0 required) on a shared grid and verify the
/// order is preserved up to solver tolerance.
ComparisonCheck comparison_check(const WeightedGraph& g, const Eigen::VectorXd& u0,
                                 const Eigen::VectorXd& v0, double p, double T_window,
                                 double rtol = 1e-10, double atol = 1e-12);

}  // namespace graphblow
