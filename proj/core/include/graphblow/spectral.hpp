#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphblow/domain.hpp"
#include "graphblow/graph.hpp"
#include "graphblow/vertex_function.hpp"

namespace graphblow {

/// Principal eigenpair of the absorbing-boundary Laplacian: the smallest
/// lambda with -Delta_Omega phi = lambda phi on the interior. phi is
/// positive on the interior, zero on the boundary, and normalized so that
/// the mu-weighted sum over Omega is 1.
struct GroundState {
  double lambda1 = 0.0;
  VertexFunction phi;      ///< defined on Omega (zero on the boundary)
  double residual = 0.0;   ///< sup_x | -Delta_Omega phi - lambda1 phi | on the interior
  int iterations = 0;
  std::string method;      ///< "dense" (interior <= 64) or "inverse-power"
};

/// Solve on a declared interior set (zero extension outside). The interior
/// must be connected through interior edges, or positivity of the ground
/// state is not guaranteed and the call is rejected.
GroundState ground_state_on_interior(const WeightedGraph& g, const std::vector<int>& interior,
                                     double tol = 1e-10, int max_iter = 10000);

GroundState dirichlet_ground_state(const WeightedGraph& g, const DomainSubset& om,
                                   double tol = 1e-10, int max_iter = 10000);

/// Eigenvalue problem on the graph augmented by one absorbing vertex
/// attached to x_tilde with the given edge weight. The returned phi lives on
/// the original vertex set and is positive everywhere.
GroundState ghost_ground_state(const WeightedGraph& g, int x_tilde, double ghost_weight = 1.0,
                               double tol = 1e-10, int max_iter = 10000);

struct EcWitness {
  bool found = false;
  std::optional<DomainSubset> omega;
  std::optional<GroundState> state;
  int candidates_tried = 0;
  int margin_rejections = 0;  ///< candidates skipped for touching the truncation edge
  std::string note;
};

/// Look for a connected subset, everywhere farther than delta hops from
/// x_tilde, whose ground-state eigenvalue is below eps. Deterministic:
/// geodesic path segments of increasing length first, then balls. Accepts
/// only candidates with lambda1 < 0.9*eps so the witness survives
/// independent re-verification. Failure to find one proves nothing.
EcWitness ec_witness_search(const WeightedGraph& g, int x_tilde, double eps, double delta,
                            int size_cap = 64);

}  // namespace graphblow
