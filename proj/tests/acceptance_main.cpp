// Acceptance harness: fourteen end-to-end criteria, one line each.
// Exit code 0 only when every criterion passes.

#include <graphblow/graphblow.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"

using namespace graphblow;
using testutil::random_connected_graph;
using testutil::random_positive_vector;

namespace {

struct Criterion {
  const char* label;
  double time_cap_s;
  std::function<bool(std::string&)> run;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// ---------------------------------------------------------------- criteria

bool c01_isolated_vertex(std::string& d) {
  GraphBuilder b;
  b.add_vertex("o", 1.0);
  WeightedGraph g = b.build();
  struct Case {
    double p, u0, T;
  } cases[] = {{2.0, 1.0, 1.0}, {3.0, 2.0, 0.125}};
  for (auto c : cases) {
    SolverOptions o;
    o.U_big = 1e6;
    o.rtol = 1e-10;
    o.atol = 1e-13;
    Eigen::VectorXd u0(1);
    u0 << c.u0;
    EvolutionResult r = integrate(g, u0, c.p, o);
    if (!r.blew_up()) return false;
    double mid = 0.5 * (r.bracket->t_lo + r.bracket->t_hi);
    std::ostringstream os;
    os << "p=" << c.p << " T=" << mid;
    d += (d.empty() ? "" : "; ") + os.str();
    if (!near(mid, c.T, 1e-6)) return false;
  }
  return true;
}

bool c02_constant_exactness(std::string& d) {
  const double c = 1.3;
  int checked = 0;
  double worst = 0.0;
  for (double p : {2.0, 2.5, 3.0, 3.5, 4.0}) {
    for (double lambda : {0.7, 2.0}) {
      LifespanEstimate est = estimate_lifespan(GraphSpec::parse("cycle:12"),
                                               PsiSpec::parse("const:1.3"), lambda, p, 1e-6);
      if (!est.blew_up || !est.converged) return false;
      double want = std::pow(lambda * c, 1.0 - p) / (p - 1.0);
      worst = std::max(worst, std::abs(est.T_est - want));
      if (!near(est.T_est, want, 1e-6)) return false;
      ++checked;
    }
  }
  std::ostringstream os;
  os << checked << " cases, worst |T - closed form| = " << worst;
  d = os.str();
  return checked == 10;
}

bool c03_kernel_audit(std::string& d) {
  std::mt19937_64 rng(20240817);
  double worst_prop = 0.0, worst_route = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    int n = 5 + int(rng() % 46);  // 5..50
    WeightedGraph g = random_connected_graph(rng, n);
    KernelAudit a = kernel_audit(g, {0.1, 1.0, 5.0});
    worst_prop = std::max(worst_prop, a.max_property_violation());
    worst_route = std::max(worst_route, a.max_route_mismatch);
  }
  std::ostringstream os;
  os << "worst property " << worst_prop << ", worst route mismatch " << worst_route;
  d = os.str();
  return worst_prop <= 1e-10 && worst_route <= 1e-9;
}

bool c04_interval_spectra(std::string& d) {
  double worst = 0.0;
  for (int n = 1; n <= 30; ++n) {
    WeightedGraph g = GraphSpec::parse("path:" + std::to_string(n + 2)).build();
    std::vector<int> interior;
    for (int i = 1; i <= n; ++i) interior.push_back(g.index_of(std::to_string(i)));
    GroundState gs = ground_state_on_interior(g, interior);
    double want = 2.0 * (1.0 - std::cos(M_PI / (n + 1)));
    worst = std::max(worst, std::abs(gs.lambda1 - want) / want);

    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      L(i, i) = 2.0;
      if (i + 1 < n) L(i, i + 1) = L(i + 1, i) = -1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    if (std::abs(gs.lambda1 - es.eigenvalues()[0]) > 1e-8) return false;
  }
  std::ostringstream os;
  os << "n = 1..30, worst relative error " << worst;
  d = os.str();
  return worst <= 1e-8;
}

bool c05_brackets_respect_lower_bound(std::string& d) {
  std::mt19937_64 rng(51);
  double closest = 1e9;
  for (int trial = 0; trial < 10; ++trial) {
    WeightedGraph g = random_connected_graph(rng, 6 + int(rng() % 7));
    Eigen::VectorXd u0 = random_positive_vector(rng, g.order(), 0.5, 1.5);
    double p = 2.0 + 0.1 * double(rng() % 11);
    SolverOptions o;
    o.U_big = ubig_for_tolerance(1e-6, p);
    o.rtol = 1e-9;
    o.atol = 1e-12;
    EvolutionResult r = integrate(g, u0, p, o);
    if (!r.blew_up()) return false;
    double lb = lower_bound_basic(1.0, u0.maxCoeff(), p);
    closest = std::min(closest, r.bracket->t_lo - lb);
    if (r.bracket->t_lo < lb - 1e-8) return false;
  }
  std::ostringstream os;
  os << "10 instances, min(t_lo - bound) = " << closest;
  d = os.str();
  return true;
}

bool c06_pairing_bound_certifies(std::string& d) {
  std::mt19937_64 rng(62);
  int done = 0, attempts = 0;
  double worst_gap = -1e9;
  while (done < 20 && attempts < 200) {
    ++attempts;
    WeightedGraph g = random_connected_graph(rng, 6 + int(rng() % 9));
    Eigen::VectorXd pv = random_positive_vector(rng, g.order(), 0.5, 1.5);
    VertexFunction psi = VertexFunction::from_vector(g, pv);
    double p = 2.0 + 0.25 * double(rng() % 3);

    int xmax = 0;
    for (int x = 1; x < g.order(); ++x)
      if (pv[x] > pv[xmax]) xmax = x;
    DomainSubset om;
    try {
      om = DomainSubset::from_interior(g, g.ball(xmax, 1));
    } catch (const ValidationError&) {
      try {
        om = DomainSubset::from_interior(g, {xmax});
      } catch (const ValidationError&) {
        continue;
      }
    }
    GroundState gs;
    try {
      gs = dirichlet_ground_state(g, om);
    } catch (const SolveError&) {
      continue;
    }
    double pairing = 0.0;
    for (int v : om.interior()) pairing += psi.at(v) * gs.phi.at(v) * g.mu(v);
    if (pairing <= 0.0) continue;
    double lambda = 1.5 * std::pow(gs.lambda1, 1.0 / (p - 1.0)) / pairing;

    KaplanBound kb = kaplan_bound(g, om, lambda, psi, p);
    if (!kb.threshold_met || !kb.T_up) return false;

    SolverOptions o;
    o.U_big = ubig_for_tolerance(1e-6, p);
    o.rtol = 1e-9;
    o.atol = 1e-12;
    o.t_max = *kb.T_up * 1.5 + 1.0;
    EvolutionResult r = integrate(g, lambda * pv, p, o);
    if (!r.blew_up()) return false;
    double mid = 0.5 * (r.bracket->t_lo + r.bracket->t_hi);
    worst_gap = std::max(worst_gap, mid - *kb.T_up);
    if (mid > *kb.T_up + 1e-6) return false;
    ++done;
  }
  std::ostringstream os;
  os << done << " certified instances, max(T_sim - T_up) = " << worst_gap;
  d = os.str();
  return done == 20;
}

bool c07_kernel_root_vs_truth(std::string& d) {
  WeightedGraph g = GraphSpec::parse("path:2").build();
  VertexFunction psi = VertexFunction::constant(g, 1.0);
  double lambda = 2.0, p = 2.0;
  HeatKernelBound hb = heat_kernel_upper_bound(g, 0, lambda, psi, p, 10.0);
  if (!hb.T_up) return false;

  SolverOptions o;
  o.U_big = 1e7;
  o.rtol = 1e-10;
  o.atol = 1e-13;
  EvolutionResult r = integrate(g, Eigen::VectorXd::Constant(2, lambda), p, o);
  if (!r.blew_up()) return false;
  double mid = 0.5 * (r.bracket->t_lo + r.bracket->t_hi);
  std::ostringstream os;
  os << "root " << *hb.T_up << " vs simulated " << mid;
  d = os.str();
  return near(mid, *hb.T_up, 1e-6);
}

bool c08_sandwich_window(std::string& d) {
  std::mt19937_64 rng(88);
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    WeightedGraph g = random_connected_graph(rng, 5 + int(rng() % 6));
    Eigen::VectorXd pv = random_positive_vector(rng, g.order(), 0.5, 1.5);
    VertexFunction psi = VertexFunction::from_vector(g, pv);
    SandwichBound sb = sandwich_finite(g, psi, 2.0);
    for (double lambda : {3.0, 1.0, 0.3, 0.1}) {
      SolverOptions o;
      o.U_big = ubig_for_tolerance(1e-6, 2.0);
      o.rtol = 1e-9;
      o.atol = 1e-12;
      o.t_max = sb.t2(lambda) * 1.2 + 1.0;
      EvolutionResult r = integrate(g, lambda * pv, 2.0, o);
      if (!r.blew_up()) return false;
      double mid = 0.5 * (r.bracket->t_lo + r.bracket->t_hi);
      if (mid < sb.t1(lambda) - 1e-6 || mid > sb.t2(lambda) + 1e-6) return false;
      ++checked;
    }
  }
  std::ostringstream os;
  os << checked << " (graph, lambda) pairs inside their windows";
  d = os.str();
  return checked == 40;
}

bool c09_scaled_lifespans_descend(std::string& d) {
  WeightedGraph g = GraphSpec::parse("cycle:16").build();
  Eigen::VectorXd pv(16);
  for (int i = 0; i < 16; ++i)
    pv[i] = 0.3 + 0.7 * 0.5 * (1.0 + std::cos(2.0 * M_PI * i / 16.0));  // sup = 1 at i = 0
  std::vector<double> scaled;
  for (double lambda : {10.0, 30.0, 100.0, 300.0}) {
    SolverOptions o;
    o.U_big = ubig_for_tolerance(1e-8, 2.0);
    o.rtol = 1e-10;
    o.atol = 1e-13;
    EvolutionResult r = integrate(g, lambda * pv, 2.0, o);
    if (!r.blew_up()) return false;
    scaled.push_back(lambda * 0.5 * (r.bracket->t_lo + r.bracket->t_hi));
  }
  std::ostringstream os;
  os << "lambda T = ";
  for (double s : scaled) os << s << " ";
  d = os.str();
  for (size_t i = 1; i < scaled.size(); ++i)
    if (scaled[i] >= scaled[i - 1]) return false;
  for (double s : scaled)
    if (s < 1.0 - 1e-9) return false;
  return scaled.back() <= 1.15;
}

bool c10_comparison_pairs(std::string& d) {
  std::mt19937_64 rng(100);
  double worst = 0.0;
  int pairs = 0;
  for (int gi = 0; gi < 10; ++gi) {
    WeightedGraph g = random_connected_graph(rng, 6 + int(rng() % 6));
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd u0 = random_positive_vector(rng, g.order(), 0.2, 0.7);
      Eigen::VectorXd v0 = u0 + random_positive_vector(rng, g.order(), 0.0, 0.4);
      ComparisonCheck c = comparison_check(g, u0, v0, 2.0, 0.4);
      worst = std::max(worst, c.max_violation);
      if (c.max_violation > 1e-8) return false;
      ++pairs;
    }
  }
  std::ostringstream os;
  os << pairs << " ordered pairs, worst violation " << worst;
  d = os.str();
  return pairs == 100;
}

bool c11_monotone_matches_rk(std::string& d) {
  std::mt19937_64 rng(111);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    WeightedGraph g = trial % 2 == 0 ? GraphSpec::parse("cycle:" + std::to_string(6 + trial)).build()
                                     : random_connected_graph(rng, 6 + trial);
    Eigen::VectorXd psi = random_positive_vector(rng, g.order(), 0.3, 0.8);
    double p = 2.0;
    double T = 0.8 * lower_bound_basic(1.0, psi.maxCoeff(), p);
    auto [lo, hi] = monotone_default_bracket(g, psi, p, T, 256);
    double M = 1.01 * p * hi.values.maxCoeff();
    MonotoneResult mr = monotone_iterate(g, psi, p, T, lo, hi, M, 100, 1e-9);
    if (!mr.converged) return false;
    for (size_t i = 1; i < mr.gaps.size(); ++i)
      if (mr.gaps[i] > mr.gaps[i - 1] + 1e-12) return false;

    SolverOptions o;
    o.rtol = 1e-10;
    o.atol = 1e-13;
    o.t_max = T;
    o.store_dense = true;
    EvolutionResult r = integrate(g, psi, p, o);
    for (int j = 0; j <= mr.lower.panels; ++j) {
      double dev =
          (r.value_at(mr.lower.time_at(j)) - mr.lower.values.col(j)).cwiseAbs().maxCoeff();
      worst = std::max(worst, dev);
      if (dev > 1e-5) return false;
    }
  }
  std::ostringstream os;
  os << "10 instances, worst |RK - iterate| = " << worst;
  d = os.str();
  return true;
}

bool c12_integral_residual(std::string& d) {
  std::mt19937_64 rng(121);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    WeightedGraph g = random_connected_graph(rng, 6 + 2 * trial);
    Eigen::VectorXd u0 = random_positive_vector(rng, g.order(), 0.3, 0.9);
    SolverOptions o;
    o.t_max = 0.4;
    o.rtol = 1e-11;
    o.atol = 1e-14;
    o.store_dense = true;
    o.sample_times = {0.1, 0.25, 0.4};
    EvolutionResult r = integrate(g, u0, 2.0, o);
    worst = std::max(worst, duhamel_residual(g, r, 2.0, 1e-10));
  }
  std::ostringstream os;
  os << "worst residual " << worst;
  d = os.str();
  return worst <= 1e-6;
}

bool c13_witness_on_the_line(std::string& d) {
  WeightedGraph g = GraphSpec::parse("lattice:1:22").build();
  EcWitness w = ec_witness_search(g, g.index_of("0"), 0.1, 5.0, 12);
  if (!w.found) return false;
  std::ostringstream os;
  os << "interior " << w.omega->interior().size() << ", lambda1 " << w.state->lambda1;
  d = os.str();
  auto dist = g.distances_from(g.index_of("0"));
  for (int v : w.omega->all())
    if (dist[v] <= 5) return false;
  return w.omega->interior().size() == 10 && w.state->lambda1 < 0.1 &&
         near(w.state->lambda1, 0.081014052771005263, 1e-9);
}

bool c14_halfline_density(std::string& d) {
  WeightedGraph g = GraphSpec::parse("lattice:1:30").build();
  VertexFunction psi = PsiSpec::parse("halfline").materialize(g);
  DensityProfile prof = density_profile(g, psi, 1.0, {2, 3, 4, 6, 8, 10});
  auto bound = density_bound(prof, 2.0);
  if (!bound || !near(prof.d_bar, 1.0, 1e-12) || !near(*bound, 1.0, 1e-12)) return false;

  LifespanOptions lo;
  lo.initial_radius = 8;
  lo.max_doublings = 5;
  LifespanEstimate est = estimate_lifespan(GraphSpec::parse("lattice:1:0"),
                                           PsiSpec::parse("halfline"), 1.0, 2.0, 1e-4, lo);
  if (!est.blew_up || !est.converged) return false;
  std::ostringstream os;
  os << "d_bar 1, bound 1, simulated T = " << est.T_est;
  d = os.str();
  // the lifespan is pinned to 1: reaction bound below, density bound above;
  // the estimate resolves T to +-tol/2 by construction
  return est.T_est >= 1.0 - 1e-4 && est.T_est <= *bound + 5e-3;
}

}  // namespace

int main() {
  std::vector<Criterion> cs = {
      {"isolated vertex matches the scalar lifespan", 1.0, c01_isolated_vertex},
      {"constant-data lifespans across a (p, lambda) grid", 5.0, c02_constant_exactness},
      {"kernel audit on 20 random graphs", 30.0, c03_kernel_audit},
      {"interval spectra match the closed form", 5.0, c04_interval_spectra},
      {"blow-up brackets respect the reaction lower bound", 30.0, c05_brackets_respect_lower_bound},
      {"pairing bound certifies randomized instances", 60.0, c06_pairing_bound_certifies},
      {"kernel-root bound equals the two-vertex truth", 5.0, c07_kernel_root_vs_truth},
      {"lifespans sit inside the positive-data sandwich", 60.0, c08_sandwich_window},
      {"scaled lifespans decrease toward the large-lambda limit", 30.0, c09_scaled_lifespans_descend},
      {"order preservation across 100 data pairs", 60.0, c10_comparison_pairs},
      {"bracketing iteration tracks the integrator", 60.0, c11_monotone_matches_rk},
      {"integral-form residual stays below 1e-6", 30.0, c12_integral_residual},
      {"low-eigenvalue witness pinned on the integer line", 10.0, c13_witness_on_the_line},
      {"half-line occupation density certifies the lifespan", 60.0, c14_halfline_density},
  };

  int failed = 0;
  for (size_t i = 0; i < cs.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = cs[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cs[i].time_cap_s) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("over time cap");
    }
    std::printf("[%s] C%02zu %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", i + 1, cs[i].label, secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failed;
  }
  std::printf("%d/14 criteria passed\n", 14 - failed);
  return failed == 0 ? 0 : 1;
}
