#include "graphblow/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace graphblow {

namespace {

void require_defined(const WeightedGraph& g, const VertexFunction& f, int v, const char* who) {
  if (!f.defined(v))
    throw ValidationError(std::string(who) + " needs f at vertex '" + g.id_of(v) +
                          "', which is outside the function's domain");
}

void require_positive(const WeightedGraph& g, const VertexFunction& f, int v, const char* who) {
  require_defined(g, f, v, who);
  if (!(f.at(v) > 0.0))
    throw ValidationError(std::string(who) + " needs f > 0, violated at vertex '" + g.id_of(v) +
                          "'");
}

}  // namespace

double laplacian_at(const WeightedGraph& g, const VertexFunction& f, int x) {
  require_defined(g, f, x, "laplacian");
  double fx = f.at(x), acc = 0.0;
  for (const auto& nb : g.neighbors(x)) {
    require_defined(g, f, nb.v, "laplacian");
    acc += nb.w * (f.at(nb.v) - fx);
  }
  return acc / g.mu(x);
}

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& f,
                         const std::vector<int>& at) {
  VertexFunction out = VertexFunction::undefined(g);
  for (int x : at) out.set(x, laplacian_at(g, f, x));
  return out;
}

Eigen::SparseMatrix<double> laplacian_matrix(const WeightedGraph& g) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.order() + 2 * g.edge_count());
  for (int x = 0; x < g.order(); ++x) {
    trip.emplace_back(x, x, -g.weight_sum(x) / g.mu(x));
    for (const auto& nb : g.neighbors(x)) trip.emplace_back(x, nb.v, nb.w / g.mu(x));
  }
  Eigen::SparseMatrix<double> L(g.order(), g.order());
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

Eigen::VectorXd dirichlet_laplacian(const WeightedGraph& g, const DomainSubset& om,
                                    const Eigen::VectorXd& f_interior) {
  const auto& interior = om.interior();
  if (f_interior.size() != static_cast<long>(interior.size()))
    throw ValidationError("interior data length does not match the domain interior");
  std::vector<int> pos(g.order(), -1);
  for (size_t i = 0; i < interior.size(); ++i) pos[interior[i]] = static_cast<int>(i);

  Eigen::VectorXd out(interior.size());
  for (size_t i = 0; i < interior.size(); ++i) {
    int x = interior[i];
    double acc = -g.weight_sum(x) * f_interior[i];
    for (const auto& nb : g.neighbors(x))
      if (pos[nb.v] >= 0) acc += nb.w * f_interior[pos[nb.v]];
    out[i] = acc / g.mu(x);
  }
  return out;
}

VertexFunction dirichlet_laplacian(const WeightedGraph& g, const DomainSubset& om,
                                   const VertexFunction& f) {
  const auto& interior = om.interior();
  Eigen::VectorXd fi(interior.size());
  for (size_t i = 0; i < interior.size(); ++i) {
    if (!f.defined(interior[i]))
      throw ValidationError("interior data missing at vertex '" + g.id_of(interior[i]) + "'");
    fi[i] = f.at(interior[i]);
  }
  Eigen::VectorXd r = dirichlet_laplacian(g, om, fi);
  return VertexFunction::on_set(g, interior,
                                std::vector<double>(r.data(), r.data() + r.size()));
}

double gamma_at(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h, int x) {
  require_defined(g, f, x, "gamma");
  require_defined(g, h, x, "gamma");
  double fx = f.at(x), hx = h.at(x), acc = 0.0;
  for (const auto& nb : g.neighbors(x)) {
    require_defined(g, f, nb.v, "gamma");
    require_defined(g, h, nb.v, "gamma");
    acc += nb.w * (f.at(nb.v) - fx) * (h.at(nb.v) - hx);
  }
  return acc / (2.0 * g.mu(x));
}

double gamma_at(const WeightedGraph& g, const VertexFunction& f, int x) {
  return gamma_at(g, f, f, x);
}

VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f, const std::vector<int>& at) {
  VertexFunction out = VertexFunction::undefined(g);
  for (int x : at) out.set(x, gamma_at(g, f, x));
  return out;
}

double gamma2_at(const WeightedGraph& g, const VertexFunction& f, int x) {
  std::vector<int> closed1{x};
  for (const auto& nb : g.neighbors(x)) closed1.push_back(nb.v);
  VertexFunction gf = gamma(g, f, closed1);           // needs f on the 2-ball
  VertexFunction lf = laplacian(g, f, closed1);
  double dgf = laplacian_at(g, gf, x);
  double gfl = gamma_at(g, f, lf, x);
  return 0.5 * (dgf - 2.0 * gfl);
}

namespace {

CdeCheck cde_eval(const WeightedGraph& g, int x, const VertexFunction& f, double n, double K,
                  CdeVariant variant) {
  CdeCheck c;
  c.variant = variant;
  c.n = n;
  c.K = K;

  std::vector<int> closed1{x};
  for (const auto& nb : g.neighbors(x)) closed1.push_back(nb.v);

  VertexFunction gf = gamma(g, f, closed1);
  VertexFunction ratio = VertexFunction::undefined(g);
  for (int v : closed1) ratio.set(v, gf.at(v) / f.at(v));

  double gfx = gf.at(x);
  double lfx = laplacian_at(g, f, x);
  c.lhs = gamma2_at(g, f, x) - gamma_at(g, f, ratio, x);

  if (variant == CdeVariant::cde) {
    if (!(lfx < 0.0)) {
      c.vacuous = true;
      c.satisfied = true;
      c.rhs = K * gfx;  // reported for context; the gate did not fire
      c.slack = 1e-9 * (1.0 + std::abs(c.lhs) + std::abs(c.rhs));
      return c;
    }
    c.rhs = (lfx * lfx) / n + K * gfx;
  } else {
    VertexFunction logf = VertexFunction::undefined(g);
    for (int v : closed1) logf.set(v, std::log(f.at(v)));
    double dlog = laplacian_at(g, logf, x);
    double q = f.at(x) * dlog;
    c.rhs = (q * q) / n + K * gfx;
  }
  c.slack = 1e-9 * (1.0 + std::abs(c.lhs) + std::abs(c.rhs));
  c.satisfied = c.lhs >= c.rhs - c.slack;
  return c;
}

}  // namespace

CdeCheck cde_verify(const WeightedGraph& g, int x, const VertexFunction& f, double n, double K,
                    CdeVariant variant) {
  if (x < 0 || x >= g.order()) throw ValidationError("cde check at invalid vertex index");
  if (!(n > 0.0)) throw ValidationError("cde dimension parameter must be positive");
  for (int v : g.ball(x, 2)) require_positive(g, f, v, "cde check");
  return cde_eval(g, x, f, n, K, variant);
}

CdeSearchResult cde_falsify(const WeightedGraph& g, int x, double n, double K,
                            CdeVariant variant, int budget, std::uint64_t seed) {
  if (!(n > 0.0)) throw ValidationError("cde dimension parameter must be positive");
  if (budget < 10) throw ValidationError("cde falsifier budget must be at least 10");
  std::vector<int> support = g.ball(x, 2);
  size_t x_idx = 0;
  for (size_t i = 0; i < support.size(); ++i)
    if (support[i] == x) x_idx = i;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Both sides of the inequality are 2-homogeneous under f -> c*f, so scale is
  // a flat direction of the search; pin f(x) = 1 to quotient it out and keep
  // every candidate in a floating-point-trustworthy range.
  auto center = [&](std::vector<double>& logf) {
    double shift = logf[x_idx];
    for (auto& l : logf) l -= shift;
  };
  auto make_f = [&](const std::vector<double>& logf) {
    VertexFunction f = VertexFunction::undefined(g);
    for (size_t i = 0; i < support.size(); ++i) f.set(support[i], std::exp(logf[i]));
    return f;
  };
  // Vacuous evaluations (gated variant, Delta f >= 0) are not candidates.
  // Rank by relative margin: the absolute margin grows without bound along
  // genuine violation rays, which would steer the descent toward magnitudes
  // where the evaluation itself loses meaning.
  auto score = [&](const CdeCheck& c) {
    if (c.vacuous) return std::numeric_limits<double>::infinity();
    return c.margin() / (1.0 + std::abs(c.lhs) + std::abs(c.rhs));
  };

  CdeSearchResult res;
  std::vector<double> best_logf(support.size(), 0.0);
  double best = std::numeric_limits<double>::infinity();
  bool have = false;

  int random_budget = budget * 8 / 10;
  std::vector<double> logf(support.size());
  for (int it = 0; it < random_budget; ++it) {
    for (auto& l : logf) l = gauss(rng);
    center(logf);
    CdeCheck c = cde_eval(g, x, make_f(logf), n, K, variant);
    ++res.evaluations;
    if (!have || score(c) < best) {
      best = score(c);
      best_logf = logf;
      res.worst = c;
      have = true;
    }
  }
  if (!std::isfinite(best)) {
    // Every sample was vacuous (possible only for the gated variant).
    best_logf.assign(support.size(), 0.0);
    res.worst = cde_eval(g, x, make_f(best_logf), n, K, variant);
    best = score(res.worst);
  }

  // Coordinate descent from the best sample with a shrinking step.
  double step = 0.5;
  int remaining = budget - res.evaluations;
  while (remaining > 0 && step > 1e-6) {
    bool improved = false;
    for (size_t i = 0; i < support.size() && remaining > 0; ++i) {
      for (double dir : {+1.0, -1.0}) {
        if (remaining <= 0) break;
        auto trial = best_logf;
        trial[i] += dir * step;
        center(trial);  // a step on coordinate x becomes a global ratio move
        CdeCheck c = cde_eval(g, x, make_f(trial), n, K, variant);
        ++res.evaluations;
        --remaining;
        if (score(c) < best) {
          best = score(c);
          best_logf = trial;
          res.worst = c;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  res.witness_f = make_f(best_logf);
  return res;
}

}  // namespace graphblow
