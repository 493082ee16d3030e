#include "graphblow/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "graphblow/heat_kernel.hpp"

namespace graphblow {

double lower_bound_basic(double lambda, double psi_sup, double p) {
  if (!(lambda > 0.0) || !(psi_sup > 0.0)) throw ValidationError("lambda and sup psi must be positive");
  if (!(p > 1.0)) throw ValidationError("reaction exponent must satisfy p > 1");
  return std::pow(lambda * psi_sup, 1.0 - p) / (p - 1.0);
}

KaplanBound kaplan_bound(const WeightedGraph& g, const DomainSubset& om, double lambda,
                         const VertexFunction& psi, double p) {
  if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
  if (!(p > 1.0)) throw ValidationError("reaction exponent must satisfy p > 1");

  KaplanBound out;
  out.state = dirichlet_ground_state(g, om);
  out.lambda1 = out.state.lambda1;
  out.interior = om.interior();

  double eta0 = 0.0;
  for (int x : om.interior()) {
    if (!psi.defined(x))
      throw ValidationError("psi is undefined on the subdomain interior (vertex '" +
                            g.id_of(x) + "')");
    eta0 += psi.at(x) * out.state.phi.at(x) * g.mu(x);
  }
  out.eta0 = lambda * eta0;

  double ratio = out.lambda1 / std::pow(out.eta0, p - 1.0);
  if (out.eta0 > 0.0 && ratio < 1.0) {
    out.threshold_met = true;
    out.T_up = -std::log(1.0 - ratio) / (out.lambda1 * (p - 1.0));
  }
  return out;
}

std::optional<KaplanBound> kaplan_bound_auto(const WeightedGraph& g, double lambda,
                                             const VertexFunction& psi, double p, int r_cap) {
  std::optional<KaplanBound> best;
  auto consider = [&](const std::vector<int>& interior) {
    DomainSubset om;
    try {
      om = DomainSubset::from_interior(g, interior);
    } catch (const ValidationError&) {
      return;
    }
    try {
      KaplanBound b = kaplan_bound(g, om, lambda, psi, p);
      if (b.threshold_met && (!best || *b.T_up < *best->T_up)) best = std::move(b);
    } catch (const SolveError&) {
    }
  };

  for (int x = 0; x < g.order(); ++x)
    if (psi.defined(x) && psi.at(x) > 0.0) consider({x});

  int xmax = -1;
  double vmax = 0.0;
  for (int x = 0; x < g.order(); ++x)
    if (psi.defined(x) && psi.at(x) > vmax) vmax = psi.at(x), xmax = x;
  if (xmax >= 0)
    for (int r = 1; r <= r_cap; ++r) consider(g.ball(xmax, r));

  return best;
}

namespace {

HeatKernelBound kernel_root_on(const WeightedGraph& g, int x_bar, double lambda,
                               const VertexFunction& psi, double p, double t_max) {
  if (x_bar < 0 || x_bar >= g.order()) throw ValidationError("x_bar is not a vertex index");
  if (!(t_max > 0.0)) throw ValidationError("t_max must be positive");

  SemigroupEvaluator ev(g);
  Eigen::VectorXd data = lambda * psi.to_vector();
  auto gfun = [&](double t) {
    double F = ev.apply(t, data)[x_bar];
    if (!(F > 0.0)) return -std::numeric_limits<double>::infinity();
    return (p - 1.0) * t - std::pow(F, 1.0 - p);
  };

  HeatKernelBound out;
  const int scan = 512;
  double prev_t = 0.0;
  double root_lo = -1.0, root_hi = -1.0;
  for (int i = 1; i <= scan; ++i) {
    double t = t_max * double(i) / scan;
    if (gfun(t) >= 0.0) {
      root_lo = prev_t;
      root_hi = t;
      break;
    }
    prev_t = t;
  }
  out.g_at_t_max = gfun(t_max);
  if (root_hi < 0.0) return out;

  for (int it = 0; it < 200 && root_hi - root_lo > 1e-12 * std::max(1.0, root_hi); ++it) {
    double m = 0.5 * (root_lo + root_hi);
    (gfun(m) >= 0.0 ? root_hi : root_lo) = m;
  }
  out.T_up = root_hi;
  return out;
}

}  // namespace

HeatKernelBound heat_kernel_upper_bound(const WeightedGraph& g, int x_bar, double lambda,
                                        const VertexFunction& psi, double p, double t_max) {
  return kernel_root_on(g, x_bar, lambda, psi, p, t_max);
}

HeatKernelBound heat_kernel_upper_bound(const GraphSpec& target, const std::string& x_bar_id,
                                        double lambda, const PsiSpec& psi, double p,
                                        double t_max) {
  if (!target.is_generator()) {
    WeightedGraph g = target.build();
    return kernel_root_on(g, g.index_of(x_bar_id), lambda, psi.materialize(g), p, t_max);
  }

  // Generator target: evaluate on truncations with a heat-propagation margin
  // and grow until two consecutive margins agree.
  WeightedGraph probe = target.with_radius(2).build();
  double dmu = probe.constants().d_mu;
  int margin = int(std::ceil(2.0 + 2.0 * std::sqrt(dmu * t_max)));

  HeatKernelBound out, prev;
  bool have_prev = false;
  for (int k = 0; k < 7; ++k, margin *= 2) {
    WeightedGraph g = target.with_radius(margin + 2).build();
    int x_bar = g.index_of(x_bar_id);
    const auto& tr = g.truncation();
    if (g.distances_from(tr->center)[x_bar] + margin > tr->radius)
      throw ValidationError("x_bar is not margin-safe inside the truncation");
    out = kernel_root_on(g, x_bar, lambda, psi.materialize(g), p, t_max);
    out.truncation_radius = tr->radius;
    if (have_prev) {
      double a = out.T_up ? *out.T_up : std::numeric_limits<double>::infinity();
      double b = prev.T_up ? *prev.T_up : std::numeric_limits<double>::infinity();
      out.agreement = std::abs(a - b);
      if (out.agreement <= 1e-9 * std::max(1.0, std::isfinite(a) ? a : 0.0) ||
          (!out.T_up && !prev.T_up))
        return out;
    }
    prev = out;
    have_prev = true;
  }
  return out;  // last attempt, agreement field shows the residual disagreement
}

DensityProfile density_profile(const WeightedGraph& g, const VertexFunction& psi, double beta,
                               const std::vector<int>& r_grid) {
  if (!(beta > 0.0)) throw ValidationError("level beta must be positive");
  if (r_grid.empty()) throw ValidationError("radius grid is empty");
  for (int x = 0; x < g.order(); ++x)
    if (std::abs(g.mu(x) - 1.0) > 1e-12)
      throw ValidationError("density profile requires the unit-measure convention (mu == 1), "
                            "violated at vertex '" + g.id_of(x) + "'");

  std::vector<int> grid = r_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < 1) throw ValidationError("radii must be at least 1");

  std::vector<uint8_t> super(g.order(), 0);
  for (int x = 0; x < g.order(); ++x)
    if (psi.defined(x) && psi.at(x) >= beta) super[x] = 1;

  DensityProfile out;
  out.beta = beta;
  int skipped = 0;
  for (int r : grid) {
    std::vector<int> centers = g.truncation() ? g.truncation_safe_vertices(r)
                                              : [&] {
                                                  std::vector<int> all(g.order());
                                                  for (int i = 0; i < g.order(); ++i) all[i] = i;
                                                  return all;
                                                }();
    if (centers.empty()) {
      ++skipped;
      continue;
    }
    double best = 0.0;
    for (int c : centers) {
      auto ball = g.ball(c, r);
      int hit = 0;
      for (int v : ball) hit += super[v];
      best = std::max(best, double(hit) / double(ball.size()));
    }
    out.rows.emplace_back(r, best);
  }
  if (out.rows.empty())
    throw TruncationError("no radius in the grid admits a margin-safe center");

  size_t tail_from = out.rows.size() / 2;
  out.tail_monotone = true;
  for (size_t i = tail_from; i < out.rows.size(); ++i) {
    out.d_bar = std::max(out.d_bar, out.rows[i].second);
    if (i > tail_from && out.rows[i].second > out.rows[i - 1].second + 1e-12)
      out.tail_monotone = false;
  }
  out.estimator_note = "max over margin-safe centers per radius; d_bar = max over the " +
                       std::to_string(out.rows.size() - tail_from) + " largest radii" +
                       (skipped ? " (" + std::to_string(skipped) + " radii skipped: no safe center)"
                                : "");
  return out;
}

std::optional<double> density_bound(const DensityProfile& profile, double p) {
  if (!(p > 1.0)) throw ValidationError("reaction exponent must satisfy p > 1");
  double bd = profile.beta * profile.d_bar;
  if (!(bd > 0.0)) return std::nullopt;
  return std::pow(bd, 1.0 - p) / (p - 1.0);
}

FiniteThreshold finite_graph_threshold(const WeightedGraph& g, int x_tilde,
                                       const VertexFunction& psi, double p,
                                       double ghost_weight) {
  if (!(p > 1.0)) throw ValidationError("reaction exponent must satisfy p > 1");
  FiniteThreshold out;
  out.state = ghost_ground_state(g, x_tilde, ghost_weight);
  out.lambda1_ghost = out.state.lambda1;
  for (int x = 0; x < g.order(); ++x) {
    if (!psi.defined(x)) throw ValidationError("psi must be defined everywhere");
    if (psi.at(x) < 0.0) throw ValidationError("psi must be nonnegative");
    out.pairing += psi.at(x) * out.state.phi.at(x) * g.mu(x);
  }
  if (!(out.pairing > 0.0)) throw ValidationError("psi pairs to zero against the ground state");
  out.Lambda1 = std::pow(out.lambda1_ghost, 1.0 / (p - 1.0)) / out.pairing;
  return out;
}

double SandwichBound::t1(double lambda) const { return std::pow(lambda, 1.0 - p) * c_low; }
double SandwichBound::t2(double lambda) const { return std::pow(lambda, 1.0 - p) * c_high; }

SandwichBound sandwich_finite(const WeightedGraph& g, const VertexFunction& psi, double p) {
  if (!(p > 1.0)) throw ValidationError("reaction exponent must satisfy p > 1");
  for (int x = 0; x < g.order(); ++x)
    if (!psi.defined(x)) throw ValidationError("psi must be defined everywhere");
  double sup = psi.max_value(), inf = psi.min_value();
  if (!(inf > 0.0))
    throw ValidationError("the sandwich needs strictly positive data (inf psi > 0)");
  SandwichBound out;
  out.c_low = 1.0 / ((p - 1.0) * std::pow(sup, p - 1.0));
  out.c_high = 1.0 / ((p - 1.0) * std::pow(inf, p - 1.0));
  out.p = p;
  return out;
}

SweepTable asymptotic_sweep(const GraphSpec& target, const PsiSpec& psi, double p,
                            std::vector<double> lambda_grid, const SweepOptions& opts) {
  if (opts.direction != "large" && opts.direction != "small")
    throw ValidationError("sweep direction must be 'large' or 'small'");
  if (lambda_grid.empty()) throw ValidationError("lambda grid is empty");
  for (double l : lambda_grid)
    if (!(l > 0.0)) throw ValidationError("lambda grid entries must be positive");
  std::sort(lambda_grid.begin(), lambda_grid.end());

  WeightedGraph rep = target.is_generator()
                          ? target.with_radius(std::max(2, opts.lifespan.initial_radius)).build()
                          : target.build();
  double psi_sup = psi.materialize(rep).max_value();
  if (!(psi_sup > 0.0)) throw ValidationError("psi must be positive somewhere");

  SweepTable table;
  table.direction = opts.direction;
  if (opts.direction == "large")
    table.limit_value = 1.0 / ((p - 1.0) * std::pow(psi_sup, p - 1.0));
  else if (opts.psi_inf)
    table.limit_value = 1.0 / ((p - 1.0) * std::pow(*opts.psi_inf, p - 1.0));

  std::optional<double> c_high;
  if (!target.is_generator()) {
    try {
      c_high = sandwich_finite(rep, psi.materialize(rep), p).c_high;
    } catch (const ValidationError&) {
    }
  } else if (opts.psi_inf) {
    c_high = 1.0 / ((p - 1.0) * std::pow(*opts.psi_inf, p - 1.0));
  }

  LifespanOptions lopts = opts.lifespan;
  lopts.t_max = opts.t_max;

  for (double lambda : lambda_grid) {
    SweepRow row;
    row.lambda = lambda;
    row.lower_scaled = std::pow(lambda, p - 1.0) * lower_bound_basic(lambda, psi_sup, p);
    if (c_high) row.upper_scaled = *c_high;
    try {
      LifespanEstimate est = estimate_lifespan(target, psi, lambda, p, opts.tol, lopts);
      if (est.blew_up) {
        row.T_est = est.T_est;
        row.bracket = est.bracket;
        row.scaled = std::pow(lambda, p - 1.0) * est.T_est;
        row.ok = est.converged;
        if (!est.converged) row.note = "bracket/radius schedule did not reach tol";
      } else {
        row.T_est = std::numeric_limits<double>::infinity();
        row.bracket = est.bracket;
        row.scaled = std::numeric_limits<double>::infinity();
        row.note = "no blow-up before t_max";
      }
    } catch (const std::exception& e) {
      row.note = e.what();
    }
    if (!row.ok) table.partial = true;
    table.rows.push_back(std::move(row));
  }

  // Approach is from above (large) / below (small): either way the scaled
  // column should be nonincreasing in lambda, up to bracket slack.
  table.monotone_toward_limit = true;
  const SweepRow* last_ok = nullptr;
  for (const auto& row : table.rows) {
    if (!row.ok) continue;
    if (last_ok) {
      double slack = std::pow(last_ok->lambda, p - 1.0) * last_ok->bracket.width() +
                     std::pow(row.lambda, p - 1.0) * row.bracket.width() + 1e-12;
      if (row.scaled > last_ok->scaled + slack) table.monotone_toward_limit = false;
    }
    last_ok = &row;
  }
  return table;
}

BoundsReport assemble_bounds_report(const WeightedGraph& g, double lambda,
                                    const VertexFunction& psi, double p, int x_tilde,
                                    double t_max_for_root) {
  BoundsReport rep;
  rep.lower_basic = lower_bound_basic(lambda, psi.max_value(), p);
  rep.entries.push_back({"reaction-lower", "lower", rep.lower_basic,
                         "T >= (lambda sup psi)^{1-p}/(p-1)"});

  int xbar = x_tilde;
  if (xbar < 0) {
    double vmax = -1.0;
    for (int x = 0; x < g.order(); ++x)
      if (psi.defined(x) && psi.at(x) > vmax) vmax = psi.at(x), xbar = x;
  }
  if (xbar < 0 || xbar >= g.order()) throw ValidationError("no usable reference vertex");

  rep.kaplan = kaplan_bound_auto(g, lambda, psi, p);
  if (rep.kaplan && rep.kaplan->T_up)
    rep.entries.push_back({"pairing-upper", "upper", *rep.kaplan->T_up,
                           "eigenfunction pairing on an interior of size " +
                               std::to_string(rep.kaplan->interior.size())});

  rep.kernel_root = heat_kernel_upper_bound(g, xbar, lambda, psi, p, t_max_for_root);
  if (rep.kernel_root->T_up)
    rep.entries.push_back({"kernel-root-upper", "upper", *rep.kernel_root->T_up,
                           "first root of (p-1)t - F(t)^{1-p} at vertex '" + g.id_of(xbar) +
                               "'"});

  try {
    rep.finite_threshold = finite_graph_threshold(g, xbar, psi, p);
  } catch (const std::exception&) {
  }

  try {
    rep.sandwich = sandwich_finite(g, psi, p);
    rep.entries.push_back({"sandwich-upper", "upper", rep.sandwich->t2(lambda),
                           "finite-graph positive-data upper bound"});
  } catch (const ValidationError&) {
  }
  return rep;
}

}  // namespace graphblow
