#pragma once

#include <vector>

#include "graphblow/graph.hpp"

namespace graphblow {

/// Finite subset Omega of a host graph, split into interior (all neighbors
/// inside Omega) and boundary (has a neighbor outside). Zero boundary values
/// realize the absorbing condition; the associated operator only reads the
/// interior. Omega is connected and the interior is nonempty.
class DomainSubset {
 public:
  /// Split a vertex set by the membership rule:
  /// boundary = members with an outside neighbor, interior = the rest.
  static DomainSubset from_set(const WeightedGraph& g, std::vector<int> omega);

  /// Declare the interior; Omega = interior plus its outside neighbors.
  /// Rejected when some attached boundary vertex would itself have no
  /// exterior neighbor (the membership rule above would reclassify it).
  static DomainSubset from_interior(const WeightedGraph& g, std::vector<int> interior);

  const std::vector<int>& interior() const { return interior_; }
  const std::vector<int>& boundary() const { return boundary_; }
  const std::vector<int>& all() const { return all_; }

  bool contains(int v) const { return flag_[v] != 0; }
  bool is_interior(int v) const { return flag_[v] == 2; }

 private:
  std::vector<int> interior_, boundary_, all_;
  std::vector<uint8_t> flag_;  // 0 outside, 1 boundary, 2 interior
};

}  // namespace graphblow
