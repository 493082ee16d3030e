#include "graphblow/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "graphblow/heat_kernel.hpp"
#include "graphblow/operators.hpp"

namespace graphblow {

namespace {

// Dormand-Prince 5(4) pair, FSAL.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Rhs {
  const Eigen::SparseMatrix<double>& L;
  double p;
  const std::vector<uint8_t>& pinned;

  Eigen::VectorXd operator()(const Eigen::VectorXd& u) const {
    Eigen::VectorXd f = L * u;
    for (int i = 0; i < u.size(); ++i) {
      f[i] += u[i] > 0.0 ? std::pow(u[i], p) : 0.0;
      if (pinned[i]) f[i] = 0.0;
    }
    return f;
  }
};

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& u,
                  const Eigen::VectorXd& unew, double atol, double rtol) {
  double acc = 0.0;
  for (int i = 0; i < err.size(); ++i) {
    double sc = atol + rtol * std::max(std::abs(u[i]), std::abs(unew[i]));
    double q = err[i] / sc;
    acc += q * q;
  }
  return std::sqrt(acc / err.size());
}

double initial_step(const Rhs& rhs, const Eigen::VectorXd& u0, const Eigen::VectorXd& f0,
                    double atol, double rtol, double hmax) {
  double d0 = 0.0, d1 = 0.0;
  for (int i = 0; i < u0.size(); ++i) {
    double sc = atol + rtol * std::abs(u0[i]);
    d0 += (u0[i] / sc) * (u0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / u0.size());
  d1 = std::sqrt(d1 / u0.size());
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, hmax);

  Eigen::VectorXd u1 = u0 + h0 * f0;
  Eigen::VectorXd f1 = rhs(u1);
  double d2 = 0.0;
  for (int i = 0; i < u0.size(); ++i) {
    double sc = atol + rtol * std::abs(u0[i]);
    double q = (f1[i] - f0[i]) / sc;
    d2 += q * q;
  }
  d2 = std::sqrt(d2 / u0.size()) / h0;
  double dm = std::max(d1, d2);
  double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::max(1e-6, h0 * 1e-3);
  return std::min({100.0 * h0, h1, hmax});
}

}  // namespace

Eigen::VectorXd EvolutionResult::value_at(double t) const {
  if (dense.size() < 2)
    throw ValidationError("trajectory was not stored densely; rerun with store_dense");
  if (t < dense.front().t - 1e-14 || t > dense.back().t + 1e-14)
    throw ValidationError("time " + std::to_string(t) + " outside the stored trajectory");
  t = std::clamp(t, dense.front().t, dense.back().t);

  auto it = std::lower_bound(dense.begin() + 1, dense.end(), t,
                             [](const DenseStep& s, double tt) { return s.t < tt; });
  if (it == dense.end()) --it;
  const DenseStep& A = *(it - 1);
  const DenseStep& B = *it;
  double h = B.t - A.t;
  if (h <= 0.0) return B.u;
  double th = (t - A.t) / h;
  double h00 = (1 + 2 * th) * (1 - th) * (1 - th), h10 = th * (1 - th) * (1 - th);
  double h01 = th * th * (3 - 2 * th), h11 = th * th * (th - 1);
  return h00 * A.u + (h10 * h) * A.f + h01 * B.u + (h11 * h) * B.f;
}

EvolutionResult integrate(const WeightedGraph& g, const Eigen::VectorXd& u0, double p,
                          const SolverOptions& opts) {
  const int n = g.order();
  if (u0.size() != n) throw ValidationError("initial data length does not match graph order");
  if (!(p > 1.0)) throw ValidationError("reaction exponent must satisfy p > 1");
  if (!(opts.U_big > 1.0)) throw ValidationError("U_big must exceed 1");
  for (int i = 0; i < n; ++i)
    if (u0[i] < 0.0)
      throw ValidationError("initial data must be nonnegative (vertex '" + g.id_of(i) + "')");

  std::vector<uint8_t> pinned(n, 0);
  for (int v : opts.dirichlet_boundary) {
    if (v < 0 || v >= n) throw ValidationError("boundary set contains invalid index");
    pinned[v] = 1;
  }

  std::vector<double> stops = opts.sample_times;
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  for (double s : stops)
    if (s < 0.0 || s > opts.t_max)
      throw ValidationError("sample times must lie in [0, t_max]");

  Eigen::SparseMatrix<double> L = laplacian_matrix(g);
  Rhs rhs{L, p, pinned};

  Eigen::VectorXd u = u0;
  for (int i = 0; i < n; ++i)
    if (pinned[i]) u[i] = 0.0;

  EvolutionResult res;
  const double dmu = g.constants().d_mu;
  const double hmax = dmu > 0.0 ? 1.0 / (2.0 * dmu) : 1e6;
  const double uround = 2.3e-16;

  double t = 0.0;
  Eigen::VectorXd f = rhs(u);
  size_t next_stop = 0;
  auto record_samples_at = [&](double tt, const Eigen::VectorXd& uu) {
    while (next_stop < stops.size() && std::abs(stops[next_stop] - tt) <= 1e-13 * std::max(1.0, tt)) {
      res.sample_times.push_back(stops[next_stop]);
      res.samples.push_back(uu);
      ++next_stop;
    }
  };
  record_samples_at(0.0, u);
  if (opts.store_dense) res.dense.push_back({t, u, f});

  double h = initial_step(rhs, u, f, opts.atol, opts.rtol, hmax);
  double facold = 1e-4;
  const double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
  bool rejected_last = false;

  Eigen::VectorXd k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), unew(n), err(n);

  auto finish = [&](EvolutionResult::Status st) {
    res.status = st;
    res.t_end = t;
    res.sup_end = u.maxCoeff();
    return res;
  };

  if (u.maxCoeff() >= opts.U_big) {
    // Data already past the declaration level: bracket degenerates at 0.
    res.bracket = BlowupBracket{0.0, 0.0};
    return finish(EvolutionResult::Status::blowup);
  }
  if (opts.t_max <= 0.0) return finish(EvolutionResult::Status::completed);

  while (true) {
    if (res.steps_accepted + res.steps_rejected >= opts.max_steps)
      throw SolveError("step budget exhausted at t = " + std::to_string(t));

    double target = opts.t_max;
    if (next_stop < stops.size()) target = std::min(target, stops[next_stop]);
    h = std::min({h, hmax, target - t});
    if (h < 16.0 * uround * std::max(std::abs(t), 1.0)) {
      std::ostringstream os;
      os << "step size underflow at t = " << t << " (sup u = " << u.maxCoeff()
         << "); if the solution is blowing up, lower U_big";
      throw SolveError(os.str());
    }

    k2 = rhs(u + h * (a21 * f));
    k3 = rhs(u + h * (a31 * f + a32 * k2));
    k4 = rhs(u + h * (a41 * f + a42 * k2 + a43 * k3));
    k5 = rhs(u + h * (a51 * f + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = rhs(u + h * (a61 * f + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    unew = u + h * (b1 * f + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = rhs(unew);
    err = h * (e1 * f + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double errn = error_norm(err, u, unew, opts.atol, opts.rtol);
    if (!std::isfinite(errn) || !unew.allFinite()) {
      ++res.steps_rejected;
      h *= 0.25;
      rejected_last = true;
      continue;
    }

    double fac11 = std::pow(std::max(errn, 1e-10), expo1);
    if (errn <= 1.0) {
      double fac = std::clamp(fac11 / std::pow(facold, beta) / safe, 0.2, 5.0);
      double hnew = h / fac;
      facold = std::max(errn, 1e-4);

      t += h;
      u.swap(unew);
      f.swap(k7);  // FSAL
      ++res.steps_accepted;

      double umin = u.minCoeff();
      res.min_u_seen = std::min(res.min_u_seen, umin);
      if (umin < -opts.atol)
        throw SolveError("state went negative beyond atol at t = " + std::to_string(t) +
                         " (min " + std::to_string(umin) + "); solver fault");

      record_samples_at(t, u);
      if (opts.store_dense) res.dense.push_back({t, u, f});

      double sup = u.maxCoeff();
      if (sup >= opts.U_big) {
        double eps_tail = 10.0 * (2.0 * dmu) * std::pow(opts.U_big, 1.0 - p);
        double tail = (1.0 + eps_tail) * std::pow(sup, 1.0 - p) / (p - 1.0);
        res.bracket = BlowupBracket{t, t + tail};
        return finish(EvolutionResult::Status::blowup);
      }
      if (t >= opts.t_max - 1e-14 * std::max(1.0, opts.t_max))
        return finish(EvolutionResult::Status::completed);

      if (rejected_last) hnew = std::min(hnew, h);
      rejected_last = false;
      h = hnew;
    } else {
      ++res.steps_rejected;
      h = h / std::min(5.0, fac11 / safe);
      rejected_last = true;
    }
  }
}

double ubig_for_tolerance(double tol, double p) {
  if (!(tol > 0.0)) throw ValidationError("lifespan tolerance must be positive");
  double u = std::pow((p - 1.0) * tol / 2.0, 1.0 / (1.0 - p));
  return std::clamp(u, 1e4, 1e12);
}

namespace {

EvolutionResult run_truncation(const WeightedGraph& g, const PsiSpec& psi, double lambda,
                               double p, const LifespanOptions& lopts, double ubig,
                               bool pin_outer_shell) {
  Eigen::VectorXd u0 = lambda * psi.materialize(g).to_vector();
  SolverOptions opts;
  opts.rtol = lopts.rtol;
  opts.atol = lopts.atol;
  opts.t_max = lopts.t_max;
  opts.U_big = ubig;
  if (pin_outer_shell) {
    const auto& tr = g.truncation();
    auto dist = g.distances_from(tr->center);
    for (int v = 0; v < g.order(); ++v)
      if (dist[v] == tr->radius) opts.dirichlet_boundary.push_back(v);
  }
  return integrate(g, u0, p, opts);
}

}  // namespace

LifespanEstimate estimate_lifespan(const GraphSpec& target, const PsiSpec& psi, double lambda,
                                   double p, double tol, const LifespanOptions& lopts) {
  if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
  LifespanEstimate est;
  est.tolerance = tol;

  double ubig = lopts.U_big ? *lopts.U_big : ubig_for_tolerance(tol, p);

  auto scale_floor = [&](const WeightedGraph& g) {
    double psup = psi.materialize(g).max_value();
    double dmu = std::max(1.0, g.constants().d_mu);
    double floor = std::max(10.0 * lambda * psup, std::pow(1e3 * dmu, 1.0 / (p - 1.0)));
    return std::max(ubig, std::min(floor, 1e12));
  };

  if (!target.is_generator()) {
    WeightedGraph g = target.build();
    EvolutionResult r = run_truncation(g, psi, lambda, p, lopts, scale_floor(g), false);
    if (r.blew_up()) {
      est.blew_up = true;
      est.bracket = *r.bracket;
      est.T_est = 0.5 * (r.bracket->t_lo + r.bracket->t_hi);
      est.converged = r.bracket->width() <= tol;
    } else {
      est.bracket = {lopts.t_max, std::numeric_limits<double>::infinity()};
    }
    return est;
  }

  int R = std::max(2, lopts.initial_radius);
  double prevT = std::numeric_limits<double>::quiet_NaN();
  for (int step = 0; step <= lopts.max_doublings; ++step, R *= 2) {
    WeightedGraph g = target.with_radius(R).build();
    EvolutionResult r = run_truncation(g, psi, lambda, p, lopts, scale_floor(g), true);
    if (!r.blew_up()) {
      est.radius_table.emplace_back(R, std::numeric_limits<double>::infinity());
      prevT = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double T = 0.5 * (r.bracket->t_lo + r.bracket->t_hi);
    est.radius_table.emplace_back(R, T);
    est.blew_up = true;
    est.bracket = *r.bracket;
    est.T_est = T;
    if (!std::isnan(prevT) && std::abs(prevT - T) <= tol) {
      est.converged = true;
      return est;
    }
    prevT = T;
  }
  // Schedule exhausted: report the last truncation honestly, unconverged.
  return est;
}

std::pair<TimeGridFunction, TimeGridFunction> monotone_default_bracket(
    const WeightedGraph& g, const Eigen::VectorXd& psi, double p, double T, int panels) {
  if (panels < 8) throw ValidationError("time grid needs at least 8 panels");
  double s0 = psi.maxCoeff();
  if (!(T < std::pow(s0, 1.0 - p) / (p - 1.0)))
    throw ValidationError("window must end before the reaction-only blow-up time");

  SemigroupEvaluator ev(g);
  TimeGridFunction lo, hi;
  lo.T = hi.T = T;
  lo.panels = hi.panels = panels;
  lo.values.resize(g.order(), panels + 1);
  hi.values.resize(g.order(), panels + 1);
  for (int j = 0; j <= panels; ++j) {
    double t = T * double(j) / panels;
    lo.values.col(j) = ev.apply(t, psi);
    double w = s0 * std::pow(1.0 - (p - 1.0) * std::pow(s0, p - 1.0) * t, -1.0 / (p - 1.0));
    hi.values.col(j).setConstant(w);
  }
  return {std::move(lo), std::move(hi)};
}

namespace {

constexpr int kGL = 16;
// 16-point Gauss-Legendre nodes/weights on [0,1].
constexpr double gl_x[kGL] = {
    0.00529953250417503074, 0.02771248846338371725, 0.06718439880608412503,
    0.12229779582249848305, 0.19106187779867812577, 0.27099161117138630683,
    0.35919822461037054338, 0.45249374508118127990, 0.54750625491881872010,
    0.64080177538962945662, 0.72900838882861369317, 0.80893812220132187423,
    0.87770220417750151695, 0.93281560119391587497, 0.97228751153661628275,
    0.99470046749582496926};
constexpr double gl_w[kGL] = {
    0.01357622970587704743, 0.03112676196932394643, 0.04757925584124639369,
    0.06231448562776694339, 0.07479799440828837048, 0.08457825969750127206,
    0.09130170752246179552, 0.09472530522753425498, 0.09472530522753425498,
    0.09130170752246179552, 0.08457825969750127206, 0.07479799440828837048,
    0.06231448562776694339, 0.04757925584124639369, 0.03112676196932394643,
    0.01357622970587704743};

// Cubic 4-point Lagrange weights for interpolation at grid offset xi from
// stencil base (points 0,1,2,3).
void lagrange4(double xi, double c[4]) {
  c[0] = -(xi - 1) * (xi - 2) * (xi - 3) / 6.0;
  c[1] = xi * (xi - 2) * (xi - 3) / 2.0;
  c[2] = -xi * (xi - 1) * (xi - 3) / 2.0;
  c[3] = xi * (xi - 1) * (xi - 2) / 6.0;
}

}  // namespace

MonotoneResult monotone_iterate(const WeightedGraph& g, const Eigen::VectorXd& psi, double p,
                                double T, const TimeGridFunction& lower,
                                const TimeGridFunction& upper, double M, int max_iters,
                                double gap_tol) {
  const int n = g.order();
  const int panels = lower.panels;
  if (upper.panels != panels || lower.values.cols() != panels + 1 ||
      upper.values.cols() != panels + 1 || lower.values.rows() != n ||
      upper.values.rows() != n)
    throw ValidationError("bracket functions must share one n x (panels+1) grid");
  if (panels < 8) throw ValidationError("time grid needs at least 8 panels");
  if (!(T > 0.0) || std::abs(lower.T - T) > 1e-12 || std::abs(upper.T - T) > 1e-12)
    throw ValidationError("bracket functions must live on [0, T]");
  if (psi.size() != n) throw ValidationError("initial data length does not match graph order");

  double sup_upper = upper.values.maxCoeff();
  double psi_sup = psi.maxCoeff();
  if (!(T < std::pow(psi_sup, 1.0 - p) / (p - 1.0)))
    throw ValidationError("window must end strictly before the reaction-only lower bound");
  if (M < p * std::pow(sup_upper, p - 1.0) - 1e-12)
    throw ValidationError("damping constant must dominate the reaction slope p * sup(upper)^{p-1}");
  if (((upper.values - lower.values).minCoeff()) < -1e-12)
    throw ValidationError("bracket is not ordered: lower exceeds upper somewhere");
  for (int i = 0; i < n; ++i)
    if (psi[i] < lower.values(i, 0) - 1e-9 || psi[i] > upper.values(i, 0) + 1e-9)
      throw ValidationError("initial data must lie between the bracket's initial slices");

  // Defect signs on the grid, with finite-difference slack from the third
  // time difference.
  const double dt = T / panels;
  Eigen::SparseMatrix<double> L = laplacian_matrix(g);
  auto defect = [&](const TimeGridFunction& F, int j) {
    Eigen::VectorXd du(n);
    if (j == 0)
      du = (-3.0 * F.values.col(0) + 4.0 * F.values.col(1) - F.values.col(2)) / (2 * dt);
    else if (j == panels)
      du = (3.0 * F.values.col(panels) - 4.0 * F.values.col(panels - 1) +
            F.values.col(panels - 2)) /
           (2 * dt);
    else
      du = (F.values.col(j + 1) - F.values.col(j - 1)) / (2 * dt);
    Eigen::VectorXd v = F.values.col(j);
    Eigen::VectorXd re = v.array().max(0.0).pow(p);
    return Eigen::VectorXd(du - L * v - re);
  };
  auto fd_slack = [&](const TimeGridFunction& F) {
    double d3 = 0.0;
    for (int j = 0; j + 3 <= panels; ++j)
      d3 = std::max(d3, (F.values.col(j + 3) - 3 * F.values.col(j + 2) +
                         3 * F.values.col(j + 1) - F.values.col(j))
                            .cwiseAbs()
                            .maxCoeff());
    return d3 / dt;  // ~ |u_ttt| dt^2 / 3 with u_ttt ~ d3/dt^3
  };
  double slack_lo = fd_slack(lower) + 1e-9 * (1 + sup_upper);
  double slack_hi = fd_slack(upper) + 1e-9 * (1 + sup_upper);
  for (int j = 0; j <= panels; ++j) {
    if (defect(lower, j).maxCoeff() > slack_lo)
      throw ValidationError("lower input is not a subsolution on the grid (defect " +
                            std::to_string(defect(lower, j).maxCoeff()) + " at slice " +
                            std::to_string(j) + ")");
    if (defect(upper, j).minCoeff() < -slack_hi)
      throw ValidationError("upper input is not a supersolution on the grid (defect " +
                            std::to_string(defect(upper, j).minCoeff()) + " at slice " +
                            std::to_string(j) + ")");
  }

  // Exact linear solves: u_t - Delta u + M u = H  panel by panel, with the
  // forcing integrated by 16-point Gauss-Legendre and the previous iterate
  // interpolated cubically between grid slices.
  SemigroupEvaluator ev(g);
  Eigen::MatrixXd E = std::exp(-M * dt) * ev.propagator(dt);
  std::vector<Eigen::MatrixXd> A(kGL);
  for (int q = 0; q < kGL; ++q) {
    double rem = dt * (1.0 - gl_x[q]);
    A[q] = (dt * gl_w[q] * std::exp(-M * rem)) * ev.propagator(rem);
  }

  auto sweep = [&](const TimeGridFunction& prev) {
    TimeGridFunction next = prev;
    next.values.col(0) = psi;
    Eigen::VectorXd cur = psi;
    double c[4];
    for (int j = 1; j <= panels; ++j) {
      Eigen::VectorXd acc = E * cur;
      int base = std::clamp(j - 2, 0, panels - 3);
      for (int q = 0; q < kGL; ++q) {
        double sg = (j - 1) + gl_x[q];  // node in grid units
        lagrange4(sg - base, c);
        Eigen::VectorXd v = c[0] * prev.values.col(base) + c[1] * prev.values.col(base + 1) +
                            c[2] * prev.values.col(base + 2) + c[3] * prev.values.col(base + 3);
        Eigen::VectorXd H = v.array().max(0.0).pow(p) + M * v.array();
        acc.noalias() += A[q] * H;
      }
      cur = std::move(acc);
      next.values.col(j) = cur;
    }
    return next;
  };

  MonotoneResult res;
  TimeGridFunction lo = lower, hi = upper;
  res.gaps.push_back((hi.values - lo.values).cwiseAbs().maxCoeff());
  const double otol = 1e-8 * (1.0 + sup_upper);

  for (int it = 0; it < max_iters; ++it) {
    TimeGridFunction nlo = sweep(lo), nhi = sweep(hi);
    if ((nlo.values - lo.values).minCoeff() < -otol)
      throw SolveError("monotonicity broke: new lower iterate dropped below the old one");
    if ((hi.values - nhi.values).minCoeff() < -otol)
      throw SolveError("monotonicity broke: new upper iterate rose above the old one");
    if ((nhi.values - nlo.values).minCoeff() < -otol)
      throw SolveError("monotonicity broke: iterates crossed");
    lo = std::move(nlo);
    hi = std::move(nhi);
    ++res.iterations;
    double gap = (hi.values - lo.values).cwiseAbs().maxCoeff();
    res.gaps.push_back(gap);
    if (gap <= gap_tol) {
      res.converged = true;
      break;
    }
  }
  res.lower = std::move(lo);
  res.upper = std::move(hi);
  return res;
}

namespace {

// Adaptive Simpson on a vector integrand; err measured in the sup norm.
template <typename F>
Eigen::VectorXd adaptive_simpson(const F& f, double a, double b, const Eigen::VectorXd& fa,
                                 const Eigen::VectorXd& fm, const Eigen::VectorXd& fb,
                                 double tol, int depth) {
  double m = 0.5 * (a + b), h = b - a;
  Eigen::VectorXd flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  Eigen::VectorXd whole = (h / 6.0) * (fa + 4.0 * fm + fb);
  Eigen::VectorXd left = (h / 12.0) * (fa + 4.0 * flm + fm);
  Eigen::VectorXd right = (h / 12.0) * (fm + 4.0 * frm + fb);
  Eigen::VectorXd diff = left + right - whole;
  if (depth <= 0 || diff.cwiseAbs().maxCoeff() <= 15.0 * tol) return left + right + diff / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

}  // namespace

double duhamel_residual(const WeightedGraph& g, const EvolutionResult& traj, double p,
                        double quad_tol) {
  if (traj.dense.size() < 2)
    throw ValidationError("residual check needs a densely stored trajectory");
  if (traj.blew_up())
    throw ValidationError("residual check applies to windows where the solution stayed bounded");

  SemigroupEvaluator ev(g);
  Eigen::VectorXd u0 = traj.dense.front().u;

  std::vector<double> times = traj.sample_times;
  if (times.empty()) {
    int k = 8;
    for (int i = 1; i <= k; ++i) times.push_back(traj.t_end * i / k);
  }

  double worst = 0.0;
  for (double t : times) {
    if (t <= 0.0) continue;
    auto integrand = [&](double s) {
      Eigen::VectorXd us = traj.value_at(s);
      Eigen::VectorXd re = us.array().max(0.0).pow(p);
      return Eigen::VectorXd(ev.apply(t - s, re));
    };
    Eigen::VectorXd fa = integrand(0.0), fm = integrand(0.5 * t), fb = integrand(t);
    Eigen::VectorXd duh =
        ev.apply(t, u0) + adaptive_simpson(integrand, 0.0, t, fa, fm, fb, quad_tol, 24);
    worst = std::max(worst, (traj.value_at(t) - duh).cwiseAbs().maxCoeff());
  }
  return worst;
}

ComparisonCheck comparison_check(const WeightedGraph& g, const Eigen::VectorXd& u0,
                                 const Eigen::VectorXd& v0, double p, double T_window,
                                 double rtol, double atol) {
  if ((v0 - u0).minCoeff() < 0.0)
    throw ValidationError("comparison check needs ordered data u0 <= v0");

  SolverOptions opts;
  opts.rtol = rtol;
  opts.atol = atol;
  opts.t_max = T_window;
  const int k = 32;
  for (int i = 0; i <= k; ++i) opts.sample_times.push_back(T_window * i / k);

  EvolutionResult ru = integrate(g, u0, p, opts);
  EvolutionResult rv = integrate(g, v0, p, opts);

  ComparisonCheck out;
  size_t common = std::min(ru.samples.size(), rv.samples.size());
  out.t_end = common ? ru.sample_times[common - 1] : 0.0;
  for (size_t i = 0; i < common; ++i)
    out.max_violation =
        std::max(out.max_violation, (ru.samples[i] - rv.samples[i]).maxCoeff());
  out.max_violation = std::max(0.0, out.max_violation);
  out.ordered = out.max_violation <= 1e-8;
  return out;
}

}  // namespace graphblow
