#include "graphblow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "graphblow/json_io.hpp"

namespace graphblow {

int WeightedGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("unknown vertex id '" + id + "'");
  return it->second;
}

std::optional<double> WeightedGraph::edge_weight(int u, int v) const {
  for (const auto& nb : adj_[u])
    if (nb.v == v) return nb.w;
  return std::nullopt;
}

GraphConstants WeightedGraph::constants() const {
  GraphConstants c;
  c.mu_max = *std::max_element(mu_.begin(), mu_.end());
  c.mu_min = *std::min_element(mu_.begin(), mu_.end());
  for (int v = 0; v < order(); ++v) c.d_mu = std::max(c.d_mu, m_[v] / mu_[v]);
  if (!edges_.empty()) {
    double wmin = std::numeric_limits<double>::infinity();
    for (const auto& e : edges_) wmin = std::min(wmin, e.w);
    c.omega_min = wmin;
    c.d_omega = c.mu_max / wmin;
  }
  return c;
}

std::vector<int> WeightedGraph::distances_from(int src) const {
  std::vector<int> dist(order(), -1);
  std::deque<int> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (const auto& nb : adj_[x])
      if (dist[nb.v] < 0) {
        dist[nb.v] = dist[x] + 1;
        q.push_back(nb.v);
      }
  }
  return dist;
}

std::vector<int> WeightedGraph::ball(int center, int r) const {
  std::vector<int> out;
  auto dist = distances_from(center);
  for (int v = 0; v < order(); ++v)
    if (dist[v] >= 0 && dist[v] <= r) out.push_back(v);
  return out;
}

int WeightedGraph::eccentricity(int center) const {
  auto dist = distances_from(center);
  return *std::max_element(dist.begin(), dist.end());
}

double WeightedGraph::volume(const std::vector<int>& vertices) const {
  double s = 0.0;
  for (int v : vertices) s += mu_[v];
  return s;
}

std::vector<int> WeightedGraph::truncation_safe_vertices(int margin) const {
  if (!trunc_) {
    std::vector<int> all(order());
    for (int v = 0; v < order(); ++v) all[v] = v;
    return all;
  }
  std::vector<int> out;
  auto dist = distances_from(trunc_->center);
  for (int v = 0; v < order(); ++v)
    if (dist[v] + margin <= trunc_->radius) out.push_back(v);
  return out;
}

VolumeGrowthFit WeightedGraph::volume_growth_fit(int center, int r_max) const {
  if (r_max < 4)
    throw ValidationError("volume growth fit needs r_max >= 4, got " + std::to_string(r_max));
  auto dist = distances_from(center);
  if (trunc_) {
    int off = distances_from(trunc_->center)[center];
    if (off + r_max > trunc_->radius)
      throw TruncationError("r_max " + std::to_string(r_max) + " exceeds usable radius " +
                            std::to_string(trunc_->radius - off) + " at vertex '" +
                            ids_[center] + "' (truncated " + trunc_->family + ")");
  } else if (r_max > eccentricity(center)) {
    throw TruncationError("r_max " + std::to_string(r_max) + " exceeds eccentricity " +
                          std::to_string(eccentricity(center)) + " of vertex '" +
                          ids_[center] + "'");
  }

  VolumeGrowthFit fit;
  std::vector<double> vol(r_max + 1, 0.0);
  for (int v = 0; v < order(); ++v)
    if (dist[v] <= r_max) vol[dist[v]] += mu_[v];
  double acc = 0.0;
  for (int r = 0; r <= r_max; ++r) {
    acc += vol[r];
    if (r >= 1) fit.table.emplace_back(r, acc);
  }

  // OLS on (log r, log V) over r in [2, r_max].
  const int r0 = 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (const auto& [r, V] : fit.table) {
    if (r < r0) continue;
    double x = std::log(double(r)), y = std::log(V);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++k;
  }
  double denom = k * sxx - sx * sx;
  fit.m_hat = (k * sxy - sx * sy) / denom;
  double intercept = (sy - fit.m_hat * sx) / k;
  fit.c0_hat = std::exp(intercept);

  double ybar = sy / k, ss_res = 0, ss_tot = 0;
  for (const auto& [r, V] : fit.table) {
    if (r < r0) continue;
    double x = std::log(double(r)), y = std::log(V);
    double e = y - (intercept + fit.m_hat * x);
    ss_res += e * e;
    ss_tot += (y - ybar) * (y - ybar);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.polynomial_flag = fit.r_squared >= 0.99;
  return fit;
}

int GraphBuilder::add_vertex(const std::string& id, double mu) {
  if (g_.index_.count(id)) throw ValidationError("duplicate vertex id '" + id + "'");
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw ValidationError("vertex '" + id + "' has nonpositive or nonfinite measure");
  int idx = g_.order();
  g_.index_[id] = idx;
  g_.ids_.push_back(id);
  g_.mu_.push_back(mu);
  return idx;
}

void GraphBuilder::add_edge(const std::string& u, const std::string& v, double w) {
  pending_.emplace_back(u, v, w);
}

void GraphBuilder::set_truncation(const std::string& center_id, int radius,
                                  const std::string& family) {
  trunc_ = std::make_tuple(center_id, radius, family);
}

WeightedGraph GraphBuilder::build() {
  if (g_.order() == 0) throw ValidationError("graph has no vertices");
  g_.adj_.assign(g_.order(), {});
  g_.m_.assign(g_.order(), 0.0);
  std::set<std::pair<int, int>> seen;
  for (const auto& [us, vs, w] : pending_) {
    int u = g_.index_.count(us) ? g_.index_[us] : -1;
    int v = g_.index_.count(vs) ? g_.index_[vs] : -1;
    if (u < 0 || v < 0)
      throw ValidationError("edge {" + us + "," + vs + "} references unknown vertex");
    if (u == v) throw ValidationError("self-loop at vertex '" + us + "'");
    if (!(w > 0.0) || !std::isfinite(w))
      throw ValidationError("edge {" + us + "," + vs + "} has nonpositive or nonfinite weight");
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second)
      throw ValidationError("duplicate edge {" + us + "," + vs + "}");
    g_.adj_[u].push_back({v, w});
    g_.adj_[v].push_back({u, w});
    g_.m_[u] += w;
    g_.m_[v] += w;
    g_.edges_.push_back({key.first, key.second, w});
  }
  for (auto& nbs : g_.adj_)
    std::sort(nbs.begin(), nbs.end(), [](const Neighbor& a, const Neighbor& b) { return a.v < b.v; });

  auto dist = g_.distances_from(0);
  for (int v = 0; v < g_.order(); ++v)
    if (dist[v] < 0)
      throw ValidationError("graph is disconnected: vertex '" + g_.ids_[v] +
                            "' unreachable from '" + g_.ids_[0] + "'");

  if (trunc_) {
    const auto& [cid, radius, family] = *trunc_;
    g_.trunc_ = TruncationInfo{g_.index_of(cid), radius, family};
  }
  return std::move(g_);
}

namespace {

std::string lattice_id(const std::vector<int>& coord) {
  std::string s;
  for (size_t i = 0; i < coord.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(coord[i]);
  }
  return s;
}

void enumerate_l1_ball(int dim, int radius, std::vector<int>& coord,
                       std::vector<std::vector<int>>& out) {
  if ((int)coord.size() == dim) {
    out.push_back(coord);
    return;
  }
  int used = 0;
  for (int c : coord) used += std::abs(c);
  for (int c = -(radius - used); c <= radius - used; ++c) {
    coord.push_back(c);
    enumerate_l1_ball(dim, radius, coord, out);
    coord.pop_back();
  }
}

WeightedGraph build_lattice(int dim, int radius, const std::string& text) {
  GraphBuilder b;
  std::vector<std::vector<int>> pts;
  std::vector<int> scratch;
  enumerate_l1_ball(dim, radius, scratch, pts);
  for (const auto& p : pts) b.add_vertex(lattice_id(p), double(dim));
  for (const auto& p : pts) {
    int norm = 0;
    for (int c : p) norm += std::abs(c);
    for (int d = 0; d < dim; ++d) {
      auto q = p;
      q[d] += 1;
      int qnorm = norm - std::abs(p[d]) + std::abs(q[d]);
      if (qnorm <= radius) b.add_edge(lattice_id(p), lattice_id(q), 1.0);
    }
  }
  std::vector<int> origin(dim, 0);
  b.set_truncation(lattice_id(origin), radius, text);
  return b.build();
}

WeightedGraph build_tree(int q, int radius, const std::string& text) {
  // Ball in the (q+1)-regular tree: root has q+1 children, others q.
  GraphBuilder b;
  int counter = 0;
  b.add_vertex("0", double(q + 1));
  std::vector<int> level{counter++};
  std::vector<std::string> level_ids{"0"};
  for (int depth = 1; depth <= radius; ++depth) {
    std::vector<std::string> next;
    for (const auto& parent : level_ids) {
      int children = (depth == 1) ? q + 1 : q;
      for (int c = 0; c < children; ++c) {
        std::string id = std::to_string(counter++);
        b.add_vertex(id, double(q + 1));
        b.add_edge(parent, id, 1.0);
        next.push_back(id);
      }
    }
    level_ids = std::move(next);
  }
  b.set_truncation("0", radius, text);
  return b.build();
}

WeightedGraph build_sequence(GraphSpec::Kind kind, int n) {
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex(std::to_string(i), 1.0);
  if (kind == GraphSpec::Kind::path) {
    for (int i = 0; i + 1 < n; ++i) b.add_edge(std::to_string(i), std::to_string(i + 1), 1.0);
  } else if (kind == GraphSpec::Kind::cycle) {
    for (int i = 0; i < n; ++i) b.add_edge(std::to_string(i), std::to_string((i + 1) % n), 1.0);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) b.add_edge(std::to_string(i), std::to_string(j), 1.0);
  }
  return b.build();
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad " + what + " '" + s + "' in graph descriptor");
  }
}

}  // namespace

GraphSpec GraphSpec::parse(const std::string& descriptor) {
  GraphSpec s;
  s.text = descriptor;
  auto colon = descriptor.find(':');
  std::string head = descriptor.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);

  auto split = [&rest]() {
    std::vector<std::string> parts;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    return parts;
  };

  if (head == "lattice" || head == "tree") {
    auto parts = split();
    if (parts.size() != 2)
      throw ValidationError("descriptor '" + descriptor + "' needs two parameters");
    s.kind = head == "lattice" ? Kind::lattice : Kind::tree;
    s.dim = parse_int(parts[0], head == "lattice" ? "dimension" : "branching");
    s.radius = parse_int(parts[1], "radius");
    if (s.dim < 1) throw ValidationError("descriptor '" + descriptor + "': parameter must be >= 1");
    if (s.radius < 0) throw ValidationError("descriptor '" + descriptor + "': radius must be >= 0");
  } else if (head == "path" || head == "cycle" || head == "complete") {
    auto parts = split();
    if (parts.size() != 1)
      throw ValidationError("descriptor '" + descriptor + "' needs one parameter");
    s.kind = head == "path" ? Kind::path : head == "cycle" ? Kind::cycle : Kind::complete;
    s.n = parse_int(parts[0], "order");
    int min_n = s.kind == Kind::cycle ? 3 : 1;
    if (s.n < min_n)
      throw ValidationError("descriptor '" + descriptor + "': order must be >= " +
                            std::to_string(min_n));
  } else if (head == "file") {
    if (rest.empty()) throw ValidationError("descriptor 'file:' is missing a path");
    s.kind = Kind::file;
    s.path = rest;
  } else {
    throw ValidationError("unknown graph descriptor kind '" + head + "'");
  }
  return s;
}

GraphSpec GraphSpec::with_radius(int r) const {
  if (!is_generator())
    throw ValidationError("descriptor '" + text + "' has no radius to vary");
  GraphSpec s = *this;
  s.radius = r;
  s.text = (kind == Kind::lattice ? "lattice:" : "tree:") + std::to_string(dim) + ":" +
           std::to_string(r);
  return s;
}

WeightedGraph GraphSpec::build() const {
  switch (kind) {
    case Kind::lattice: return build_lattice(dim, radius, text);
    case Kind::tree: return build_tree(dim, radius, text);
    case Kind::path:
    case Kind::cycle:
    case Kind::complete: return build_sequence(kind, n);
    case Kind::file: return load_graph_json(path);
  }
  throw ValidationError("unreachable graph descriptor kind");
}

}  // namespace graphblow
