#include "graphblow/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace graphblow {

namespace {

// Symmetric positive-definite restriction matrix: diagonal m(x) (full
// incident weight, so edges leaving the set act as absorption), off-diagonal
// -w_xy for pairs inside the set. `extra_diag` adds absorption weight (ghost).
Eigen::SparseMatrix<double> restriction_matrix(const WeightedGraph& g,
                                               const std::vector<int>& interior,
                                               const std::vector<int>& pos,
                                               const Eigen::VectorXd& extra_diag) {
  const int n = static_cast<int>(interior.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i) {
    int x = interior[i];
    trip.emplace_back(i, i, g.weight_sum(x) + extra_diag[i]);
    for (const auto& nb : g.neighbors(x))
      if (pos[nb.v] >= 0) trip.emplace_back(i, pos[nb.v], -nb.w);
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

void require_interior_connected(const WeightedGraph& g, const std::vector<int>& interior,
                                const std::vector<int>& pos) {
  std::vector<uint8_t> seen(interior.size(), 0);
  std::deque<int> q{interior[0]};
  seen[pos[interior[0]]] = 1;
  size_t count = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (const auto& nb : g.neighbors(x))
      if (pos[nb.v] >= 0 && !seen[pos[nb.v]]) {
        seen[pos[nb.v]] = 1;
        ++count;
        q.push_back(nb.v);
      }
  }
  if (count != interior.size())
    throw ValidationError(
        "interior is not connected through interior edges; the principal eigenvector is not "
        "guaranteed positive there");
}

struct CoreResult {
  double lambda = 0.0;
  Eigen::VectorXd phi;  // normalized: sum phi mu = 1, strictly positive
  double residual = 0.0;
  int iterations = 0;
  std::string method;
};

// Smallest eigenpair of  L phi = lambda M phi  (both SPD), normalized to
// unit mu-weighted sum. Dense solve up to 64 unknowns, then refined (and
// beyond 64, driven entirely) by inverse power iteration on the factorized L.
CoreResult smallest_pair(const Eigen::SparseMatrix<double>& L, const Eigen::VectorXd& mu,
                         double tol, int max_iter) {
  const int n = static_cast<int>(mu.size());
  CoreResult r;
  Eigen::VectorXd v;

  if (n <= 64) {
    Eigen::VectorXd isq = mu.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd B = isq.asDiagonal() * Eigen::MatrixXd(L) * isq.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    v = isq.asDiagonal() * es.eigenvectors().col(0);
    r.method = "dense";
  } else {
    v = Eigen::VectorXd::Ones(n);
    r.method = "inverse-power";
  }

  auto normalize = [&](Eigen::VectorXd& w) {
    double s = w.dot(mu);
    if (s == 0.0) throw SolveError("eigenvector solve degenerated (zero mu-weighted sum)");
    w /= s;
  };
  auto rayleigh_residual = [&](const Eigen::VectorXd& w, double& lam, double& res) {
    Eigen::VectorXd Lw = L * w;
    lam = w.dot(Lw) / w.dot(mu.cwiseProduct(w));
    res = ((Lw - lam * mu.cwiseProduct(w)).cwiseQuotient(mu)).cwiseAbs().maxCoeff();
  };

  normalize(v);
  rayleigh_residual(v, r.lambda, r.residual);

  if (r.residual > tol * std::max(1.0, std::abs(r.lambda))) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> fact(L);
    if (fact.info() != Eigen::Success)
      throw SolveError("factorization of the restriction matrix failed (domain not absorbing?)");
    while (r.iterations < max_iter) {
      Eigen::VectorXd w = fact.solve(mu.cwiseProduct(v));
      normalize(w);
      v = std::move(w);
      ++r.iterations;
      rayleigh_residual(v, r.lambda, r.residual);
      if (r.residual <= tol * std::max(1.0, std::abs(r.lambda))) break;
    }
    if (r.residual > tol * std::max(1.0, std::abs(r.lambda))) {
      std::ostringstream os;
      os << "eigenpair iteration did not converge: residual " << r.residual << " after "
         << r.iterations << " iterations (tolerance " << tol << ")";
      throw SolveError(os.str());
    }
  }

  for (int i = 0; i < n; ++i)
    if (!(v[i] > 0.0))
      throw SolveError("computed ground state is not strictly positive on the interior "
                       "(index " + std::to_string(i) + "); the domain may be defective");
  r.phi = std::move(v);
  return r;
}

std::vector<int> position_map(const WeightedGraph& g, const std::vector<int>& interior) {
  std::vector<int> pos(g.order(), -1);
  for (size_t i = 0; i < interior.size(); ++i) pos[interior[i]] = static_cast<int>(i);
  return pos;
}

}  // namespace

GroundState ground_state_on_interior(const WeightedGraph& g, const std::vector<int>& interior,
                                     double tol, int max_iter) {
  std::vector<int> sorted = interior;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty()) throw ValidationError("interior set is empty");
  for (int v : sorted)
    if (v < 0 || v >= g.order())
      throw ValidationError("interior set contains invalid index " + std::to_string(v));
  if (static_cast<int>(sorted.size()) == g.order())
    throw ValidationError(
        "interior covers the whole graph, so nothing absorbs; attach a ghost vertex instead");

  auto pos = position_map(g, sorted);
  require_interior_connected(g, sorted, pos);

  Eigen::VectorXd mu(sorted.size()), extra = Eigen::VectorXd::Zero(sorted.size());
  for (size_t i = 0; i < sorted.size(); ++i) mu[i] = g.mu(sorted[i]);

  CoreResult core = smallest_pair(restriction_matrix(g, sorted, pos, extra), mu, tol, max_iter);

  GroundState gs;
  gs.lambda1 = core.lambda;
  gs.residual = core.residual;
  gs.iterations = core.iterations;
  gs.method = core.method;
  gs.phi = VertexFunction::on_set(
      g, sorted, std::vector<double>(core.phi.data(), core.phi.data() + core.phi.size()));
  return gs;
}

GroundState dirichlet_ground_state(const WeightedGraph& g, const DomainSubset& om, double tol,
                                   int max_iter) {
  GroundState gs = ground_state_on_interior(g, om.interior(), tol, max_iter);
  for (int v : om.boundary()) gs.phi.set(v, 0.0);
  return gs;
}

GroundState ghost_ground_state(const WeightedGraph& g, int x_tilde, double ghost_weight,
                               double tol, int max_iter) {
  if (x_tilde < 0 || x_tilde >= g.order())
    throw ValidationError("ghost attachment vertex index is invalid");
  if (!(ghost_weight > 0.0)) throw ValidationError("ghost edge weight must be positive");

  std::vector<int> interior(g.order());
  for (int v = 0; v < g.order(); ++v) interior[v] = v;
  auto pos = interior;  // identity

  Eigen::VectorXd mu(g.order()), extra = Eigen::VectorXd::Zero(g.order());
  for (int v = 0; v < g.order(); ++v) mu[v] = g.mu(v);
  extra[x_tilde] = ghost_weight;

  CoreResult core = smallest_pair(restriction_matrix(g, interior, pos, extra), mu, tol, max_iter);

  GroundState gs;
  gs.lambda1 = core.lambda;
  gs.residual = core.residual;
  gs.iterations = core.iterations;
  gs.method = core.method;
  gs.phi = VertexFunction::from_vector(g, core.phi);
  return gs;
}

EcWitness ec_witness_search(const WeightedGraph& g, int x_tilde, double eps, double delta,
                            int size_cap) {
  if (x_tilde < 0 || x_tilde >= g.order())
    throw ValidationError("witness search needs a valid reference vertex");
  if (!(eps > 0.0)) throw ValidationError("witness search threshold eps must be positive");
  if (delta < 0.0) throw ValidationError("witness search distance delta must be nonnegative");

  EcWitness out;
  const double accept = 0.9 * eps;  // certification margin; see header
  auto dist = g.distances_from(x_tilde);
  std::vector<int> dist_center =
      g.truncation() ? g.distances_from(g.truncation()->center) : std::vector<int>();
  auto safe = [&](const std::vector<int>& vs) {
    if (!g.truncation()) return true;
    for (int v : vs)
      if (dist_center[v] + 1 > g.truncation()->radius) return false;
    return true;
  };

  int idelta = static_cast<int>(std::floor(delta));
  std::vector<int> seeds;
  for (int v = 0; v < g.order(); ++v)
    if (dist[v] == idelta + 1) seeds.push_back(v);
  if (seeds.empty())
    for (int v = 0; v < g.order(); ++v)
      if (dist[v] > idelta) seeds.push_back(v);
  std::sort(seeds.begin(), seeds.end(),
            [&](int a, int b) { return g.id_of(a) < g.id_of(b); });
  if (seeds.size() > 32) seeds.resize(32);
  if (seeds.empty()) {
    out.note = "no vertices beyond distance " + std::to_string(idelta) + " from '" +
               g.id_of(x_tilde) + "'";
    return out;
  }

  auto try_candidate = [&](const DomainSubset& om) -> bool {
    ++out.candidates_tried;
    GroundState gs;
    try {
      gs = dirichlet_ground_state(g, om);
    } catch (const std::exception&) {
      return false;
    }
    if (gs.lambda1 < accept) {
      out.found = true;
      out.omega = om;
      out.state = std::move(gs);
      return true;
    }
    return false;
  };

  // Geodesic path segments away from x_tilde, tried in increasing length
  // across all seeds. A segment of k vertices typically has k-2 interior.
  std::vector<std::vector<int>> paths;
  for (int s : seeds) {
    std::vector<int> path{s};
    while (static_cast<int>(path.size()) < size_cap) {
      int tail = path.back(), next = -1;
      for (const auto& nb : g.neighbors(tail))
        if (dist[nb.v] > dist[tail] && (next < 0 || g.id_of(nb.v) < g.id_of(next))) next = nb.v;
      if (next < 0) break;
      path.push_back(next);
    }
    paths.push_back(std::move(path));
  }

  // Singleton interiors first (the shortest "paths").
  for (int s : seeds) {
    std::vector<int> closed{s};
    for (const auto& nb : g.neighbors(s)) closed.push_back(nb.v);
    bool far = std::all_of(closed.begin(), closed.end(),
                           [&](int v) { return dist[v] > idelta; });
    if (!far) continue;
    if (!safe(closed)) {
      ++out.margin_rejections;
      continue;
    }
    try {
      DomainSubset om = DomainSubset::from_interior(g, {s});
      if (try_candidate(om)) {
        out.note = "singleton interior at '" + g.id_of(s) + "'";
        return out;
      }
    } catch (const ValidationError&) {
    }
  }

  for (int len = 3; len <= size_cap; ++len) {
    for (const auto& full : paths) {
      if (static_cast<int>(full.size()) < len) continue;
      std::vector<int> seg(full.begin(), full.begin() + len);
      if (!safe(seg)) {
        ++out.margin_rejections;
        continue;
      }
      try {
        DomainSubset om = DomainSubset::from_set(g, seg);
        if (try_candidate(om)) {
          out.note = "geodesic segment of " + std::to_string(len) + " vertices from '" +
                     g.id_of(seg.front()) + "'";
          return out;
        }
      } catch (const ValidationError&) {
      }
    }
  }

  // Balls around the seeds, growing while they stay beyond delta.
  for (int s : seeds) {
    for (int r = 1;; ++r) {
      std::vector<int> ball = g.ball(s, r);
      if (static_cast<int>(ball.size()) > size_cap) break;
      bool far = std::all_of(ball.begin(), ball.end(), [&](int v) { return dist[v] > idelta; });
      if (!far) break;
      if (!safe(ball)) {
        ++out.margin_rejections;
        break;
      }
      try {
        DomainSubset om = DomainSubset::from_set(g, ball);
        if (try_candidate(om)) {
          out.note = "ball of radius " + std::to_string(r) + " at '" + g.id_of(s) + "'";
          return out;
        }
      } catch (const ValidationError&) {
      }
      if (static_cast<int>(ball.size()) == g.order()) break;
    }
  }

  std::ostringstream os;
  os << "no subset beyond distance " << idelta << " reached lambda1 < " << accept << " ("
     << out.candidates_tried << " candidates";
  if (out.margin_rejections > 0)
    os << ", " << out.margin_rejections << " skipped at the truncation edge; a larger radius "
       << "may help";
  os << ")";
  out.note = os.str();
  return out;
}

}  // namespace graphblow
