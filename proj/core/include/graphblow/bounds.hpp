#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphblow/domain.hpp"
#include "graphblow/evolution.hpp"
#include "graphblow/graph.hpp"
#include "graphblow/spectral.hpp"
#include "graphblow/vertex_function.hpp"

namespace graphblow {

/// Reaction-only lower bound: T >= (lambda * sup psi)^{1-p} / (p-1).
double lower_bound_basic(double lambda, double psi_sup, double p);

/// Eigenfunction-pairing upper bound on a subdomain. With eta0 =
/// lambda * sum_Omega psi phi mu: blow-up is certified when
/// eta0^{p-1} > lambda1, and then
/// T <= -log(1 - lambda1 / eta0^{p-1}) / (lambda1 (p-1)).
struct KaplanBound {
  double lambda1 = 0.0;
  double eta0 = 0.0;
  bool threshold_met = false;
  std::optional<double> T_up;
  GroundState state;
  std::vector<int> interior;  ///< interior of the subdomain used
};

KaplanBound kaplan_bound(const WeightedGraph& g, const DomainSubset& om, double lambda,
                         const VertexFunction& psi, double p);

/// Try singleton interiors across supp psi and balls of radius 1..r_cap
/// around the max of psi; return the smallest certified T_up. nullopt when
/// no candidate meets the threshold.
std::optional<KaplanBound> kaplan_bound_auto(const WeightedGraph& g, double lambda,
                                             const VertexFunction& psi, double p, int r_cap = 3);

/// Root-based upper bound from the smoothed data F(t) = (e^{t Delta} lambda psi)(x_bar):
/// the first root of  g(t) = (p-1) t - F(t)^{1-p}  on (0, t_max] bounds the
/// lifespan whenever the solution exists that long.
struct HeatKernelBound {
  std::optional<double> T_up;
  double g_at_t_max = 0.0;   ///< sign diagnostic when no root was found
  double agreement = 0.0;    ///< truncation two-margin disagreement (generators)
  int truncation_radius = 0; ///< radius actually used (generators)
};

HeatKernelBound heat_kernel_upper_bound(const WeightedGraph& g, int x_bar, double lambda,
                                        const VertexFunction& psi, double p, double t_max);
HeatKernelBound heat_kernel_upper_bound(const GraphSpec& target, const std::string& x_bar_id,
                                        double lambda, const PsiSpec& psi, double p,
                                        double t_max);

/// Occupation density of the superlevel set {psi >= beta} in balls:
/// D(beta; r) = max over margin-safe centers of V(B(x,r) cap {psi >= beta})
/// / V(B(x,r)). Requires the unit-measure convention (mu == 1).
struct DensityProfile {
  double beta = 0.0;
  std::vector<std::pair<int, double>> rows;  ///< (r, D(beta;r))
  double d_bar = 0.0;   ///< tail estimate of limsup_r D(beta;r)
  std::string estimator_note;
  bool tail_monotone = false;  ///< D nonincreasing across the tail rows
};

DensityProfile density_profile(const WeightedGraph& g, const VertexFunction& psi, double beta,
                               const std::vector<int>& r_grid);

/// T <= (beta * d_bar)^{1-p} / (p-1) at lambda = 1 (unit-measure setting);
/// nullopt when beta * d_bar = 0.
std::optional<double> density_bound(const DensityProfile& profile, double p);

/// Finite-graph blow-up threshold via the one-ghost-vertex eigenpair:
/// Lambda1 = lambda1^{1/(p-1)} / sum_V psi phi mu. Every lambda > Lambda1
/// has finite lifespan.
struct FiniteThreshold {
  double lambda1_ghost = 0.0;
  double pairing = 0.0;  ///< sum_V psi phi mu
  double Lambda1 = 0.0;
  GroundState state;
};

FiniteThreshold finite_graph_threshold(const WeightedGraph& g, int x_tilde,
                                       const VertexFunction& psi, double p,
                                       double ghost_weight = 1.0);

/// Finite-graph sandwich for strictly positive data:
///   t1(lambda) = lambda^{1-p} c_low <= T_lambda <= lambda^{1-p} c_high,
/// with c_low/c_high built from sup/inf psi. Equality iff psi is constant.
struct SandwichBound {
  double c_low = 0.0;   ///< 1 / ((p-1) (sup psi)^{p-1})
  double c_high = 0.0;  ///< 1 / ((p-1) (inf psi)^{p-1})
  double p = 2.0;
  double t1(double lambda) const;  ///< lambda^{1-p} c_low
  double t2(double lambda) const;  ///< lambda^{1-p} c_high
};

SandwichBound sandwich_finite(const WeightedGraph& g, const VertexFunction& psi, double p);

struct SweepRow {
  double lambda = 0.0;
  double T_est = 0.0;
  BlowupBracket bracket;
  double scaled = 0.0;        ///< lambda^{p-1} T_est
  double lower_scaled = 0.0;  ///< lambda^{p-1} * basic lower bound (constant in lambda)
  std::optional<double> upper_scaled;  ///< scaled sandwich/kernel upper bound when available
  bool ok = false;
  std::string note;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::optional<double> limit_value;  ///< 1/((p-1) sup psi^{p-1}); small-lambda
                                      ///< direction only with assumed psi_inf
  bool monotone_toward_limit = false;
  bool partial = false;  ///< some rows failed or were skipped
  std::string direction;
};

struct SweepOptions {
  std::string direction = "large";  ///< "large" or "small"
  double tol = 1e-6;
  double t_max = 1e6;
  std::optional<double> psi_inf;  ///< enables the small-lambda limit (assumed, not verified)
  LifespanOptions lifespan;
};

/// lambda^{p-1} T_lambda across a lambda grid with the applicable limit and
/// bound columns; rows that exhaust their budget are marked, not faked.
SweepTable asymptotic_sweep(const GraphSpec& target, const PsiSpec& psi, double p,
                            std::vector<double> lambda_grid, const SweepOptions& opts);

/// One tagged upper/lower bound with its provenance ("reaction-lower",
/// "pairing-upper", "kernel-root-upper", "sandwich-upper", ...).
struct BoundEntry {
  std::string tag;
  std::string kind;  ///< "lower" or "upper"
  double value = 0.0;
  std::string note;
};

struct BoundsReport {
  std::vector<BoundEntry> entries;
  std::optional<KaplanBound> kaplan;
  std::optional<HeatKernelBound> kernel_root;
  std::optional<FiniteThreshold> finite_threshold;
  std::optional<SandwichBound> sandwich;
  double lower_basic = 0.0;
};

/// Aggregate every applicable bound for the given problem instance.
/// x_tilde < 0 picks the max of psi.
BoundsReport assemble_bounds_report(const WeightedGraph& g, double lambda,
                                    const VertexFunction& psi, double p, int x_tilde = -1,
                                    double t_max_for_root = 1e3);

}  // namespace graphblow
