#pragma once

#include <graphblow/graphblow.hpp>

#include <random>
#include <string>
#include <vector>

namespace testutil {

/// Deterministic connected graph: a random spanning tree plus a few extra
/// edges, weights in [wlo, whi], measures in [mlo, mhi], degrees kept small.
inline graphblow::WeightedGraph random_connected_graph(std::mt19937_64& rng, int n,
                                                       double wlo = 0.5, double whi = 2.0,
                                                       double mlo = 1.0, double mhi = 2.0) {
  std::uniform_real_distribution<double> uw(wlo, whi), um(mlo, mhi);
  graphblow::GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex("v" + std::to_string(i), um(rng));
  std::vector<std::pair<int, int>> present;
  for (int i = 1; i < n; ++i) {
    int j = int(rng() % uint64_t(i));
    b.add_edge("v" + std::to_string(i), "v" + std::to_string(j), uw(rng));
    present.emplace_back(j, i);
  }
  int extras = n / 3;
  for (int k = 0; k < extras; ++k) {
    int i = int(rng() % uint64_t(n)), j = int(rng() % uint64_t(n));
    if (i == j) continue;
    auto key = std::minmax(i, j);
    bool dup = false;
    for (auto& e : present)
      if (e.first == key.first && e.second == key.second) dup = true;
    if (dup) continue;
    present.emplace_back(key.first, key.second);
    b.add_edge("v" + std::to_string(key.first), "v" + std::to_string(key.second), uw(rng));
  }
  return b.build();
}

inline Eigen::VectorXd random_positive_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace testutil
