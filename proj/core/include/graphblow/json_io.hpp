#pragma once

#include <string>

#include "graphblow/graph.hpp"

namespace graphblow {

/// Reads {"vertices": [{"id": str, "mu": num}...],
///        "edges":    [{"u": str, "v": str, "w": num}...]}.
/// Validation (positivity, loops, duplicates, connectivity) happens in the
/// graph builder and names the offending element.
WeightedGraph load_graph_json(const std::string& path);

void save_graph_json(const WeightedGraph& g, const std::string& path);

}  // namespace graphblow
