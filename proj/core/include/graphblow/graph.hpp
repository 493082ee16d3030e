#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphblow/errors.hpp"

namespace graphblow {

/// One adjacency entry: neighbor index and positive symmetric edge weight.
struct Neighbor {
  int v;
  double w;
};

/// Undirected edge record, kept with u < v.
struct Edge {
  int u;
  int v;
  double w;
};

/// Set when a graph was produced as a finite ball of an infinite family.
/// Balls of radius r around x agree with the infinite graph exactly when
/// dist(center, x) + r <= radius.
struct TruncationInfo {
  int center = 0;
  int radius = 0;
  std::string family;  ///< generator descriptor, e.g. "lattice:2:10"
};

/// Scalar summaries used by stability ceilings and kernel truncation bounds.
/// d_mu = sup_x m(x)/mu(x) with m(x) the sum of incident edge weights.
/// omega_min and d_omega are absent on edgeless graphs.
struct GraphConstants {
  double d_mu = 0.0;
  double mu_max = 0.0;
  double mu_min = 0.0;
  std::optional<double> omega_min;
  std::optional<double> d_omega;  ///< mu_max / omega_min
};

struct VolumeGrowthFit {
  double m_hat = 0.0;   ///< fitted exponent (log-log slope)
  double c0_hat = 0.0;  ///< fitted prefactor
  double r_squared = 0.0;
  bool polynomial_flag = false;  ///< r_squared >= 0.99
  std::vector<std::pair<int, double>> table;  ///< (r, V(x,r)) for r = 1..r_max
};

/// Finite weighted graph with positive vertex measure. Connected by
/// construction; vertex ids are strings, internal indices are dense ints.
class WeightedGraph {
 public:
  int order() const { return static_cast<int>(mu_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::string& id_of(int v) const { return ids_[v]; }
  int index_of(const std::string& id) const;
  bool has_vertex(const std::string& id) const { return index_.count(id) != 0; }

  double mu(int v) const { return mu_[v]; }
  /// m(x): sum of weights of edges incident to x.
  double weight_sum(int v) const { return m_[v]; }
  const std::vector<Neighbor>& neighbors(int v) const { return adj_[v]; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Weight of the edge {u,v}; absent when not adjacent.
  std::optional<double> edge_weight(int u, int v) const;

  GraphConstants constants() const;

  /// Hop distances from src to every vertex (graph is connected, so total).
  std::vector<int> distances_from(int src) const;
  /// Closed ball of hop radius r, sorted by index.
  std::vector<int> ball(int center, int r) const;
  int eccentricity(int center) const;
  /// V(A) = sum of mu over A.
  double volume(const std::vector<int>& vertices) const;

  /// Log-log least-squares fit of r -> V(x,r) over r in [r0, r_max], r0 = 2.
  /// Requires r_max >= 4 and the r_max-ball to be unaffected by truncation.
  VolumeGrowthFit volume_growth_fit(int center, int r_max) const;

  const std::optional<TruncationInfo>& truncation() const { return trunc_; }
  /// Vertices x with dist(trunc.center, x) + margin <= trunc.radius,
  /// i.e. whose `margin`-neighborhood is free of truncation artifacts.
  std::vector<int> truncation_safe_vertices(int margin) const;

  friend class GraphBuilder;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<double> mu_;
  std::vector<double> m_;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<Edge> edges_;
  std::optional<TruncationInfo> trunc_;
};

/// Collects vertices and edges, then validates and freezes a WeightedGraph.
/// Rejects nonpositive mu or weights, self-loops, duplicate edges/ids and
/// disconnected results, naming the offending element.
class GraphBuilder {
 public:
  int add_vertex(const std::string& id, double mu);
  void add_edge(const std::string& u, const std::string& v, double w);
  void set_truncation(const std::string& center_id, int radius, const std::string& family);
  WeightedGraph build();

 private:
  WeightedGraph g_;
  std::vector<std::tuple<std::string, std::string, double>> pending_;
  std::optional<std::tuple<std::string, int, std::string>> trunc_;
};

/// Parsed generator descriptor.
///   lattice:N:R   ball of radius R in Z^N (omega = 1, mu = N)
///   tree:q:R      ball of radius R in the (q+1)-regular tree (omega = 1, mu = q+1)
///   path:n  cycle:n  complete:n   unit weights and measure
///   file:PATH     JSON vertex/edge list
struct GraphSpec {
  enum class Kind { lattice, tree, path, cycle, complete, file };
  Kind kind;
  int dim = 0;      ///< lattice N / tree q
  int radius = 0;   ///< lattice/tree truncation radius
  int n = 0;        ///< path/cycle/complete order
  std::string path; ///< file kind
  std::string text; ///< original descriptor

  static GraphSpec parse(const std::string& descriptor);
  /// True for lattice/tree: the descriptor can be rebuilt at other radii.
  bool is_generator() const { return kind == Kind::lattice || kind == Kind::tree; }
  GraphSpec with_radius(int r) const;
  WeightedGraph build() const;
};

}  // namespace graphblow
