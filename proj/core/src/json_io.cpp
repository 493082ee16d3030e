#include "graphblow/json_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace graphblow {

WeightedGraph load_graph_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("graph file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.contains("vertices") || !j["vertices"].is_array())
    throw ValidationError("graph file '" + path + "' lacks a \"vertices\" array");
  if (!j.contains("edges") || !j["edges"].is_array())
    throw ValidationError("graph file '" + path + "' lacks an \"edges\" array");

  GraphBuilder b;
  for (const auto& v : j["vertices"]) {
    if (!v.contains("id") || !v["id"].is_string() || !v.contains("mu") || !v["mu"].is_number())
      throw ValidationError("graph file '" + path +
                            "': each vertex needs a string \"id\" and numeric \"mu\"");
    b.add_vertex(v["id"].get<std::string>(), v["mu"].get<double>());
  }
  for (const auto& e : j["edges"]) {
    if (!e.contains("u") || !e["u"].is_string() || !e.contains("v") || !e["v"].is_string() ||
        !e.contains("w") || !e["w"].is_number())
      throw ValidationError("graph file '" + path +
                            "': each edge needs string \"u\", \"v\" and numeric \"w\"");
    b.add_edge(e["u"].get<std::string>(), e["v"].get<std::string>(), e["w"].get<double>());
  }
  return b.build();
}

void save_graph_json(const WeightedGraph& g, const std::string& path) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < g.order(); ++v)
    j["vertices"].push_back({{"id", g.id_of(v)}, {"mu", g.mu(v)}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges())
    j["edges"].push_back({{"u", g.id_of(e.u)}, {"v", g.id_of(e.v)}, {"w", e.w}});
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write graph file '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace graphblow
