#include "graphblow/domain.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace graphblow {

namespace {

void check_indices(const WeightedGraph& g, const std::vector<int>& verts, const char* what) {
  if (verts.empty()) throw ValidationError(std::string(what) + " set is empty");
  for (int v : verts)
    if (v < 0 || v >= g.order())
      throw ValidationError(std::string(what) + " set contains invalid index " + std::to_string(v));
}

// Connectivity of the subgraph induced on `set` (flag selects membership).
bool induced_connected(const WeightedGraph& g, const std::vector<int>& set,
                       const std::vector<uint8_t>& member) {
  std::vector<uint8_t> seen(g.order(), 0);
  std::deque<int> q{set[0]};
  seen[set[0]] = 1;
  size_t count = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (const auto& nb : g.neighbors(x))
      if (member[nb.v] && !seen[nb.v]) {
        seen[nb.v] = 1;
        ++count;
        q.push_back(nb.v);
      }
  }
  return count == set.size();
}

}  // namespace

DomainSubset DomainSubset::from_set(const WeightedGraph& g, std::vector<int> omega) {
  std::sort(omega.begin(), omega.end());
  omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
  check_indices(g, omega, "domain");

  DomainSubset d;
  d.flag_.assign(g.order(), 0);
  for (int v : omega) d.flag_[v] = 2;
  if (!induced_connected(g, omega, d.flag_))
    throw ValidationError("domain set is not connected in the host graph");

  for (int v : omega) {
    bool outside_neighbor = false;
    for (const auto& nb : g.neighbors(v))
      if (d.flag_[nb.v] == 0) {
        outside_neighbor = true;
        break;
      }
    if (outside_neighbor) d.flag_[v] = 1;
  }
  for (int v : omega) (d.flag_[v] == 2 ? d.interior_ : d.boundary_).push_back(v);
  d.all_ = std::move(omega);
  if (d.interior_.empty())
    throw ValidationError("domain has empty interior: every member touches the outside");
  if (d.boundary_.empty())
    throw ValidationError(
        "domain covers the whole graph, leaving no boundary to absorb at; "
        "use a proper subset");
  return d;
}

DomainSubset DomainSubset::from_interior(const WeightedGraph& g, std::vector<int> interior) {
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
  check_indices(g, interior, "interior");

  std::vector<uint8_t> inner(g.order(), 0);
  for (int v : interior) inner[v] = 1;
  if (!induced_connected(g, interior, inner))
    throw ValidationError("declared interior is not connected through interior edges");

  std::set<int> omega(interior.begin(), interior.end());
  for (int v : interior)
    for (const auto& nb : g.neighbors(v)) omega.insert(nb.v);

  // The membership split of the assembled set must reproduce the declaration,
  // otherwise an attached boundary vertex has no exterior neighbor.
  for (int v : omega) {
    if (inner[v]) continue;
    bool exterior = false;
    for (const auto& nb : g.neighbors(v))
      if (!omega.count(nb.v)) {
        exterior = true;
        break;
      }
    if (!exterior)
      throw ValidationError("vertex '" + g.id_of(v) +
                            "' attached to the declared interior has no exterior neighbor; "
                            "pass the full set instead");
  }
  return from_set(g, std::vector<int>(omega.begin(), omega.end()));
}

}  // namespace graphblow
