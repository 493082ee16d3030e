// graphblow: simulate u_t = Delta u + u^p on weighted graphs, estimate the
// lifespan, and certify estimates against the analytic bounds in the library.
//
// Exit codes: 0 all checks pass, 1 computation or assertion failure, 2 usage.
// Identical configuration and seed give byte-identical artifacts.

#include <CLI11.hpp>
#include <graphblow/graphblow.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "artifact_io.hpp"

using namespace graphblow;
using tool::ordered_json;

namespace {

// ------------------------------------------------------------------ config

// Allowed configuration keys with their expected JSON types ("num", "str",
// "int", "numlist"). Published copy: docs/config_schema.json.
const std::map<std::string, std::string>& config_schema() {
  static const std::map<std::string, std::string> schema = {
      {"graph", "str"},       {"psi", "str"},          {"p", "num"},
      {"lambda", "num"},      {"lambda_grid", "numlist"}, {"tol", "num"},
      {"t_max", "num"},       {"u_big", "num"},       {"rtol", "num"},
      {"atol", "num"},        {"seed", "int"},        {"out_dir", "str"},
      {"threads", "int"},     {"direction", "str"},   {"psi_inf", "num"},
      {"beta", "num"},        {"r_grid", "numlist"},  {"x_tilde", "str"},
      {"initial_radius", "int"}, {"max_doublings", "int"}, {"samples", "numlist"},
      {"t_grid", "numlist"},  {"method", "str"},      {"n", "num"},
      {"K", "num"},           {"variant", "str"},     {"budget", "int"},
      {"eps", "num"},         {"delta", "num"},       {"size_cap", "int"},
  };
  return schema;
}

void validate_config(const ordered_json& cfg, const std::string& path) {
  if (!cfg.is_object())
    throw ValidationError("config file '" + path + "' must hold a JSON object");
  for (const auto& [key, val] : cfg.items()) {
    auto it = config_schema().find(key);
    if (it == config_schema().end())
      throw ValidationError("config key '" + key + "' is not in the schema (see docs/config_schema.json)");
    const std::string& want = it->second;
    bool ok = (want == "num" && val.is_number()) || (want == "str" && val.is_string()) ||
              (want == "int" && val.is_number_integer()) ||
              (want == "numlist" && val.is_array() && [&] {
                for (const auto& e : val)
                  if (!e.is_number()) return false;
                return true;
              }());
    if (!ok)
      throw ValidationError("config key '" + key + "' must have type " + want);
  }
}

ordered_json load_config(const std::string& path) {
  if (path.empty()) return ordered_json::object();
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  ordered_json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  validate_config(cfg, path);
  return cfg;
}

struct Globals {
  std::string config_path;
  ordered_json cfg = ordered_json::object();
  std::uint64_t seed = 2024;
  std::string out_dir = ".";
  int threads = 0;

  double num(const std::string& key, double fallback) const {
    return cfg.contains(key) ? cfg[key].get<double>() : fallback;
  }
  std::string str(const std::string& key, const std::string& fallback) const {
    return cfg.contains(key) ? cfg[key].get<std::string>() : fallback;
  }
  int integer(const std::string& key, int fallback) const {
    return cfg.contains(key) ? cfg[key].get<int>() : fallback;
  }
  std::vector<double> numlist(const std::string& key) const {
    std::vector<double> v;
    if (cfg.contains(key))
      for (const auto& e : cfg[key]) v.push_back(e.get<double>());
    return v;
  }
};

// ------------------------------------------------------------------ helpers

std::vector<double> parse_num_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad number '" + item + "' in list '" + s + "'");
    }
  }
  return out;
}

std::vector<std::string> parse_id_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

ordered_json phi_to_json(const WeightedGraph& g, const VertexFunction& phi) {
  ordered_json out = ordered_json::object();
  for (int v = 0; v < g.order(); ++v)
    if (phi.defined(v)) out[g.id_of(v)] = phi.at(v);
  return out;
}

ordered_json bracket_json(const BlowupBracket& b) {
  return ordered_json{{"t_lo", b.t_lo}, {"t_hi", b.t_hi}, {"width", b.width()}};
}

std::uint64_t resolved_seed(const Globals& g) { return g.seed; }

// The same low-degree random family the property tests use: a spanning tree
// plus a few extra edges, weights in [0.5, 2], measures in [1, 2].
WeightedGraph seeded_random_graph(std::mt19937_64& rng, int n) {
  GraphBuilder b;
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
  };
  for (int i = 0; i < n; ++i) b.add_vertex("v" + std::to_string(i), uni(1.0, 2.0));
  std::set<std::pair<int, int>> used;
  for (int i = 1; i < n; ++i) {
    int j = int(rng() % std::uint64_t(i));
    b.add_edge("v" + std::to_string(j), "v" + std::to_string(i), uni(0.5, 2.0));
    used.insert({std::min(i, j), std::max(i, j)});
  }
  for (int k = 0; k < n / 3; ++k) {
    int i = int(rng() % std::uint64_t(n)), j = int(rng() % std::uint64_t(n));
    if (i == j) continue;
    auto key = std::make_pair(std::min(i, j), std::max(i, j));
    if (used.count(key)) continue;
    used.insert(key);
    b.add_edge("v" + std::to_string(i), "v" + std::to_string(j), uni(0.5, 2.0));
  }
  return b.build();
}

// ------------------------------------------------------------- scenarios

struct Assertion {
  std::string what;
  bool ok = false;
  std::string detail;
};

struct ScenarioReport {
  std::vector<Assertion> checks;
  ordered_json artifacts = ordered_json::object();

  void check(bool ok, const std::string& what, const std::string& detail = "") {
    checks.push_back({what, ok, detail});
  }
  bool all_ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return !checks.empty();
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

ScenarioReport scenario_single_vertex(const Globals& gl, const std::filesystem::path& dir,
                                      const ordered_json& rc) {
  ScenarioReport rep;
  LifespanEstimate est = estimate_lifespan(GraphSpec::parse("path:1"), PsiSpec::parse("const:1"),
                                           1.0, 2.0, 1e-8);
  rep.check(est.blew_up, "solution blows up");
  rep.check(std::abs(est.T_est - 1.0) <= 1e-6, "|T - 1| <= 1e-6", "T = " + fmt(est.T_est));
  ordered_json result{{"T_est", est.T_est}, {"bracket", bracket_json(est.bracket)}};
  tool::write_json(dir / "single_vertex.json", tool::artifact(rc, result));
  rep.artifacts["single_vertex"] = (dir / "single_vertex.json").string();
  (void)gl;
  return rep;
}

ScenarioReport scenario_large_lambda(const Globals& gl, const std::filesystem::path& dir,
                                     const ordered_json& rc) {
  ScenarioReport rep;
  // smooth nonconstant data with sup = 1 on a 16-cycle, written as an artifact
  WeightedGraph g = GraphSpec::parse("cycle:16").build();
  ordered_json psi_file{{"values", ordered_json::object()}};
  for (int i = 0; i < 16; ++i)
    psi_file["values"][g.id_of(i)] = 0.3 + 0.35 * (1.0 + std::cos(2.0 * M_PI * i / 16.0));
  std::filesystem::path psi_path = dir / "psi_cosine.json";
  tool::write_json(psi_path, psi_file);

  SweepOptions so;
  so.direction = "large";
  so.tol = 1e-8;
  SweepTable table = asymptotic_sweep(GraphSpec::parse("cycle:16"),
                                      PsiSpec::parse("file:" + psi_path.string()), 2.0,
                                      {10.0, 30.0, 100.0, 300.0}, so);
  rep.check(!table.partial, "every row completed");
  bool desc = true, above = true;
  for (size_t i = 0; i < table.rows.size(); ++i) {
    if (i && table.rows[i].scaled >= table.rows[i - 1].scaled) desc = false;
    if (table.rows[i].scaled < 1.0 - 1e-9) above = false;
  }
  rep.check(desc, "scaled lifespan strictly decreasing in lambda");
  rep.check(above, "scaled lifespan never undercuts the limit 1");
  rep.check(table.rows.back().scaled <= 1.15, "largest lambda within 15% of the limit",
            "final scaled = " + fmt(table.rows.back().scaled));
  rep.check(table.monotone_toward_limit, "table flags monotone approach");

  tool::CsvWriter csv(dir / "sweep.csv", tool::config_hash(rc),
                      "lambda,scaled_lifespan,lower_bound,upper_bound");
  ordered_json rows = ordered_json::array();
  for (const auto& r : table.rows) {
    csv.field(r.lambda), csv.field(r.scaled), csv.field(r.lower_scaled);
    if (r.upper_scaled) csv.field(*r.upper_scaled);
    else csv.field(std::string());
    csv.endrow();
    rows.push_back({{"lambda", r.lambda},
                    {"T_est", r.T_est},
                    {"scaled", r.scaled},
                    {"lower_scaled", r.lower_scaled},
                    {"upper_scaled", r.upper_scaled ? ordered_json(*r.upper_scaled)
                                                    : ordered_json(nullptr)},
                    {"ok", r.ok}});
  }
  ordered_json result{{"rows", rows},
                      {"limit_value", table.limit_value ? ordered_json(*table.limit_value)
                                                        : ordered_json(nullptr)},
                      {"monotone_toward_limit", table.monotone_toward_limit},
                      {"direction", table.direction}};
  tool::write_json(dir / "sweep.json", tool::artifact(rc, result));
  rep.artifacts["sweep"] = (dir / "sweep.json").string();
  (void)gl;
  return rep;
}

ScenarioReport scenario_hypothesis_audit(const Globals& gl, const std::filesystem::path& dir,
                                         const ordered_json& rc) {
  ScenarioReport rep;
  WeightedGraph g = GraphSpec::parse("lattice:2:5").build();
  GraphConstants c = g.constants();
  rep.check(std::isfinite(c.d_mu) && c.d_mu > 0, "degree/measure ratio is finite",
            "d_mu = " + fmt(c.d_mu));
  rep.check(c.d_omega.has_value() && std::isfinite(*c.d_omega), "measure/weight ratio is finite",
            "d_omega = " + fmt(c.d_omega.value_or(0)));

  KernelAudit audit = kernel_audit(g, {0.1, 0.5, 2.0});
  rep.check(audit.max_property_violation() <= 1e-10, "kernel properties hold to 1e-10",
            "worst = " + fmt(audit.max_property_violation()));
  rep.check(audit.max_route_mismatch <= 1e-9, "independent kernel routes agree to 1e-9",
            "mismatch = " + fmt(audit.max_route_mismatch));

  // The integer line satisfies the ungated inequality with dimension 4.53
  // (the known lattice constant) but NOT with dimension 2: the falsifier finds
  // a genuine witness there, so n = 0.01 below doubles as a positive control
  // that the search is not blind.
  WeightedGraph line = GraphSpec::parse("lattice:1:4").build();
  CdeSearchResult fal = cde_falsify(line, line.index_of("0"), 4.53, 0.0, CdeVariant::cde_prime,
                                    4000, resolved_seed(gl));
  rep.check(!fal.counterexample(), "no curvature counterexample on the line at dimension 4.53",
            "worst margin = " + fmt(fal.worst.margin()));
  CdeSearchResult ctrl = cde_falsify(line, line.index_of("0"), 0.01, 0.0, CdeVariant::cde_prime,
                                     4000, resolved_seed(gl));
  rep.check(ctrl.counterexample(), "falsifier control finds the dimension-0.01 violation",
            "worst margin = " + fmt(ctrl.worst.margin()));

  ordered_json result{
      {"d_mu", c.d_mu},
      {"d_omega", c.d_omega ? ordered_json(*c.d_omega) : ordered_json(nullptr)},
      {"kernel_property_violation", audit.max_property_violation()},
      {"kernel_route_mismatch", audit.max_route_mismatch},
      {"curvature_dimension", 4.53},
      {"curvature_worst_margin", fal.worst.margin()},
      {"curvature_evaluations", fal.evaluations},
      {"control_dimension", 0.01},
      {"control_worst_margin", ctrl.worst.margin()}};
  tool::write_json(dir / "hypothesis_audit.json", tool::artifact(rc, result));
  rep.artifacts["hypothesis_audit"] = (dir / "hypothesis_audit.json").string();
  return rep;
}

ScenarioReport scenario_witness(const Globals& gl, const std::filesystem::path& dir,
                                const ordered_json& rc) {
  ScenarioReport rep;
  WeightedGraph g = GraphSpec::parse("lattice:1:22").build();
  EcWitness w = ec_witness_search(g, g.index_of("0"), 0.1, 5.0, 12);
  rep.check(w.found, "a distant low-eigenvalue subset exists");
  ordered_json result{{"found", w.found},
                      {"candidates_tried", w.candidates_tried},
                      {"margin_rejections", w.margin_rejections},
                      {"note", w.note}};
  if (w.found) {
    rep.check(w.state->lambda1 < 0.1, "ground-state eigenvalue below eps",
              "lambda1 = " + fmt(w.state->lambda1));
    auto dist = g.distances_from(g.index_of("0"));
    bool far = true;
    for (int v : w.omega->all())
      if (dist[v] <= 5) far = false;
    rep.check(far, "witness stays more than delta hops away");
    ordered_json ids = ordered_json::array();
    for (int v : w.omega->interior()) ids.push_back(g.id_of(v));
    result["lambda1"] = w.state->lambda1;
    result["interior"] = ids;
  }
  tool::write_json(dir / "ec_witness.json", tool::artifact(rc, result));
  rep.artifacts["ec_witness"] = (dir / "ec_witness.json").string();
  (void)gl;
  return rep;
}

ScenarioReport scenario_sandwich(const Globals& gl, const std::filesystem::path& dir,
                                 const ordered_json& rc) {
  ScenarioReport rep;
  std::mt19937_64 rng(resolved_seed(gl));
  WeightedGraph g = seeded_random_graph(rng, 12);
  Eigen::VectorXd pv(g.order());
  for (int i = 0; i < g.order(); ++i)
    pv[i] = 0.5 + std::generate_canonical<double, 53>(rng);
  VertexFunction psi = VertexFunction::from_vector(g, pv);
  SandwichBound sb = sandwich_finite(g, psi, 2.0);

  tool::CsvWriter csv(dir / "sandwich.csv", tool::config_hash(rc), "lambda,t1,T,t2");
  ordered_json rows = ordered_json::array();
  for (double lambda : {3.0, 1.0, 0.3}) {
    SolverOptions o;
    o.U_big = ubig_for_tolerance(1e-6, 2.0);
    o.rtol = 1e-9;
    o.atol = 1e-12;
    o.t_max = sb.t2(lambda) * 1.2 + 1.0;
    EvolutionResult r = integrate(g, lambda * pv, 2.0, o);
    rep.check(r.blew_up(), "lambda = " + fmt(lambda) + ": solution blows up");
    if (!r.blew_up()) continue;
    double T = 0.5 * (r.bracket->t_lo + r.bracket->t_hi);
    rep.check(T >= sb.t1(lambda) - 1e-6 && T <= sb.t2(lambda) + 1e-6,
              "lambda = " + fmt(lambda) + ": t1 <= T <= t2",
              fmt(sb.t1(lambda)) + " <= " + fmt(T) + " <= " + fmt(sb.t2(lambda)));
    csv.field(lambda), csv.field(sb.t1(lambda)), csv.field(T), csv.field(sb.t2(lambda));
    csv.endrow();
    rows.push_back({{"lambda", lambda}, {"t1", sb.t1(lambda)}, {"T", T}, {"t2", sb.t2(lambda)}});
  }
  ordered_json result{{"c_low", sb.c_low}, {"c_high", sb.c_high}, {"rows", rows}};
  tool::write_json(dir / "sandwich.json", tool::artifact(rc, result));
  rep.artifacts["sandwich"] = (dir / "sandwich.json").string();
  return rep;
}

ScenarioReport scenario_halfline_density(const Globals& gl, const std::filesystem::path& dir,
                                         const ordered_json& rc) {
  ScenarioReport rep;
  WeightedGraph g = GraphSpec::parse("lattice:1:30").build();
  VertexFunction psi = PsiSpec::parse("halfline").materialize(g);
  DensityProfile prof = density_profile(g, psi, 1.0, {2, 3, 4, 6, 8, 10});
  auto bound = density_bound(prof, 2.0);
  rep.check(std::abs(prof.d_bar - 1.0) <= 1e-12, "occupation density limit is 1",
            "d_bar = " + fmt(prof.d_bar));
  rep.check(bound && std::abs(*bound - 1.0) <= 1e-12, "density bound T <= 1");

  LifespanOptions lo;
  lo.initial_radius = 8;
  lo.max_doublings = 5;
  LifespanEstimate est = estimate_lifespan(GraphSpec::parse("lattice:1:0"),
                                           PsiSpec::parse("halfline"), 1.0, 2.0, 1e-4, lo);
  rep.check(est.blew_up && est.converged, "truncation estimates converged");
  rep.check(est.T_est >= 1.0 - 1e-4 && bound && est.T_est <= *bound + 5e-3,
            "simulated lifespan satisfies the bound", "T = " + fmt(est.T_est));

  tool::CsvWriter csv(dir / "density.csv", tool::config_hash(rc), "r,density");
  ordered_json rows = ordered_json::array();
  for (const auto& [r, dv] : prof.rows) {
    csv.field(r), csv.field(dv), csv.endrow();
    rows.push_back(ordered_json::array({r, dv}));
  }
  ordered_json result{{"rows", rows},
                      {"d_bar", prof.d_bar},
                      {"bound", bound ? ordered_json(*bound) : ordered_json(nullptr)},
                      {"T_est", est.T_est},
                      {"radius_table", est.radius_table}};
  tool::write_json(dir / "density.json", tool::artifact(rc, result));
  rep.artifacts["density"] = (dir / "density.json").string();
  (void)gl;
  return rep;
}

using ScenarioFn = ScenarioReport (*)(const Globals&, const std::filesystem::path&,
                                      const ordered_json&);

const std::vector<std::pair<std::string, ScenarioFn>>& scenario_table() {
  static const std::vector<std::pair<std::string, ScenarioFn>> table = {
      {"single-vertex-exact", scenario_single_vertex},
      {"large-lambda-scaling", scenario_large_lambda},
      {"hypothesis-audit", scenario_hypothesis_audit},
      {"witness-on-the-line", scenario_witness},
      {"random-sandwich", scenario_sandwich},
      {"halfline-density", scenario_halfline_density},
  };
  return table;
}

// Accepted alternate ids for the presets above.
const std::map<std::string, std::string>& scenario_aliases() {
  static const std::map<std::string, std::string> aliases = {
      {"thm21-largelambda", "large-lambda-scaling"}, {"thm22-hypotheses", "hypothesis-audit"},
      {"thm23-ec", "witness-on-the-line"},           {"thm24-sandwich", "random-sandwich"},
      {"thm16-density", "halfline-density"},
  };
  return aliases;
}

}  // namespace

int main(int argc, char** argv) {
  // the config file shapes defaults, so it is located before anything else
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) config_path = argv[i + 1];
    else if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
  }

  Globals gl;
  try {
    gl.config_path = config_path;
    gl.cfg = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  gl.seed = std::uint64_t(gl.integer("seed", 2024));
  gl.out_dir = gl.str("out_dir", ".");
  gl.threads = gl.integer("threads", 0);

  CLI::App app{"semilinear heat flow on weighted graphs: simulation, lifespan "
               "estimation, and certified blow-up bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_dummy;
  app.add_option("--config", config_dummy, "JSON config supplying option defaults");
  app.add_option("--seed", gl.seed, "seed for every randomized routine")
      ->capture_default_str();
  app.add_option("--out-dir", gl.out_dir, "directory for artifact files")
      ->capture_default_str();
  app.add_option("--threads", gl.threads, "Eigen thread count (0 = library default)");

  int exit_code = 0;
  auto run = [&](auto&& body) {
    try {
      if (gl.threads > 0) Eigen::setNbThreads(gl.threads);
      body();
    } catch (const ValidationError& e) {
      std::cerr << "error: " << e.what() << "\n";
      exit_code = 1;
    } catch (const SolveError& e) {
      std::cerr << "solver error: " << e.what() << "\n";
      exit_code = 1;
    } catch (const TruncationError& e) {
      std::cerr << "truncation error: " << e.what() << "\n";
      exit_code = 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      exit_code = 1;
    }
  };

  // shared option state
  std::string graph_desc = gl.str("graph", "");
  std::string psi_desc = gl.str("psi", "const:1");
  double p = gl.num("p", 2.0);
  double lambda = gl.num("lambda", 1.0);
  double tol = gl.num("tol", 1e-6);
  double t_max = gl.num("t_max", 0.0);  // 0 = subcommand default

  auto resolved = [&](const char* subcommand, std::initializer_list<std::pair<const char*, ordered_json>> kv) {
    ordered_json rc;
    rc["subcommand"] = subcommand;
    for (const auto& [k, v] : kv) rc[k] = v;
    rc["seed"] = gl.seed;
    return rc;
  };

  auto need_graph = [&]() {
    if (graph_desc.empty())
      throw ValidationError("no graph descriptor given (positional argument or config key 'graph')");
    return GraphSpec::parse(graph_desc);
  };

  // ---------------------------------------------------------------- graph
  auto* sc_graph = app.add_subcommand("graph", "inspect a graph: info, ball, vgfit");
  sc_graph->require_subcommand(1);
  sc_graph->fallthrough();

  auto* sc_info = sc_graph->add_subcommand("info", "order, edges, and stability constants");
  sc_info->fallthrough();
  sc_info->add_option("graph", graph_desc, "graph descriptor");
  sc_info->callback([&] {
    run([&] {
      WeightedGraph g = need_graph().build();
      GraphConstants c = g.constants();
      ordered_json result{{"order", g.order()},
                          {"edges", g.edge_count()},
                          {"d_mu", c.d_mu},
                          {"mu_max", c.mu_max},
                          {"mu_min", c.mu_min},
                          {"omega_min", c.omega_min ? ordered_json(*c.omega_min) : ordered_json(nullptr)},
                          {"d_omega", c.d_omega ? ordered_json(*c.d_omega) : ordered_json(nullptr)}};
      if (g.truncation())
        result["truncation"] = {{"center", g.id_of(g.truncation()->center)},
                                {"radius", g.truncation()->radius},
                                {"family", g.truncation()->family}};
      ordered_json rc = resolved("graph info", {{"graph", graph_desc}});
      ordered_json art = tool::artifact(rc, result);
      tool::write_json(tool::ensure_out_dir(gl.out_dir) / "graph_info.json", art);
      std::cout << art.dump(2) << "\n";
    });
  });

  std::string center_id;
  int ball_radius = gl.integer("initial_radius", 2);
  auto* sc_ball = sc_graph->add_subcommand("ball", "closed ball around a vertex");
  sc_ball->fallthrough();
  sc_ball->add_option("graph", graph_desc, "graph descriptor");
  sc_ball->add_option("--center", center_id, "center vertex id")->required();
  sc_ball->add_option("--radius", ball_radius, "hop radius")->required();
  sc_ball->callback([&] {
    run([&] {
      WeightedGraph g = need_graph().build();
      int c = g.index_of(center_id);
      auto verts = g.ball(c, ball_radius);
      auto dist = g.distances_from(c);
      ordered_json list = ordered_json::array();
      for (int v : verts) list.push_back({{"id", g.id_of(v)}, {"dist", dist[v]}});
      ordered_json result{{"center", center_id},
                          {"radius", ball_radius},
                          {"vertices", list},
                          {"volume", g.volume(verts)}};
      ordered_json rc = resolved("graph ball", {{"graph", graph_desc},
                                                {"center", center_id},
                                                {"radius", ball_radius}});
      ordered_json art = tool::artifact(rc, result);
      tool::write_json(tool::ensure_out_dir(gl.out_dir) / "graph_ball.json", art);
      std::cout << art.dump(2) << "\n";
    });
  });

  int rmax = 8;
  auto* sc_vgfit = sc_graph->add_subcommand("vgfit", "log-log volume growth fit");
  sc_vgfit->fallthrough();
  sc_vgfit->add_option("graph", graph_desc, "graph descriptor");
  sc_vgfit->add_option("--center", center_id, "center vertex id")->required();
  sc_vgfit->add_option("--rmax", rmax, "largest radius in the fit")->capture_default_str();
  sc_vgfit->callback([&] {
    run([&] {
      WeightedGraph g = need_graph().build();
      auto fit = g.volume_growth_fit(g.index_of(center_id), rmax);
      ordered_json result{{"m_hat", fit.m_hat},
                          {"c0_hat", fit.c0_hat},
                          {"r_squared", fit.r_squared},
                          {"polynomial_flag", fit.polynomial_flag},
                          {"table", fit.table}};
      ordered_json rc = resolved("graph vgfit", {{"graph", graph_desc},
                                                 {"center", center_id},
                                                 {"rmax", rmax}});
      ordered_json art = tool::artifact(rc, result);
      tool::write_json(tool::ensure_out_dir(gl.out_dir) / "graph_vgfit.json", art);
      std::cout << art.dump(2) << "\n";
    });
  });

  // -------------------------------------------------------------- spectrum
  std::string interior_ids, omega_file, ghost_id;
  bool ec_search = false;
  double ec_eps = gl.num("eps", 0.1), ec_delta = gl.num("delta", 5.0);
  int ec_cap = gl.integer("size_cap", 64);
  std::string x_tilde_id = gl.str("x_tilde", "");
  auto* sc_spec = app.add_subcommand("spectrum", "Dirichlet ground states and witness search");
  sc_spec->fallthrough();
  sc_spec->add_option("graph", graph_desc, "graph descriptor");
  sc_spec->add_option("--interior", interior_ids, "comma-separated interior vertex ids");
  sc_spec->add_option("--omega-file", omega_file, "JSON file with {\"omega\": [ids]}");
  sc_spec->add_option("--ghost", ghost_id, "one-absorber eigenpair attached at this vertex");
  sc_spec->add_flag("--ec-search", ec_search, "search for a distant low-eigenvalue subset");
  sc_spec->add_option("--x-tilde", x_tilde_id, "reference vertex for --ec-search");
  sc_spec->add_option("--eps", ec_eps, "eigenvalue threshold for --ec-search");
  sc_spec->add_option("--delta", ec_delta, "required hop distance for --ec-search");
  sc_spec->add_option("--size-cap", ec_cap, "largest candidate subset for --ec-search");
  sc_spec->callback([&] {
    run([&] {
      int modes = int(!interior_ids.empty()) + int(!omega_file.empty()) + int(!ghost_id.empty()) +
                  int(ec_search);
      if (modes != 1)
        throw ValidationError("pick exactly one of --interior, --omega-file, --ghost, --ec-search");
      WeightedGraph g = need_graph().build();
      ordered_json result;
      ordered_json rc = resolved("spectrum", {{"graph", graph_desc}});
      auto state_json = [&](const GroundState& gs) {
        return ordered_json{{"lambda1", gs.lambda1},
                            {"residual", gs.residual},
                            {"method", gs.method},
                            {"iterations", gs.iterations},
                            {"phi", phi_to_json(g, gs.phi)}};
      };
      if (!interior_ids.empty()) {
        std::vector<int> interior;
        for (const auto& id : parse_id_list(interior_ids)) interior.push_back(g.index_of(id));
        result = state_json(ground_state_on_interior(g, interior));
        rc["interior"] = interior_ids;
      } else if (!omega_file.empty()) {
        std::ifstream in(omega_file);
        if (!in) throw ValidationError("cannot open omega file '" + omega_file + "'");
        nlohmann::json j;
        in >> j;
        if (!j.contains("omega") || !j["omega"].is_array())
          throw ValidationError("omega file '" + omega_file + "' lacks an \"omega\" array");
        std::vector<int> omega;
        for (const auto& id : j["omega"]) omega.push_back(g.index_of(id.get<std::string>()));
        result = state_json(dirichlet_ground_state(g, DomainSubset::from_set(g, omega)));
        rc["omega_file"] = omega_file;
      } else if (!ghost_id.empty()) {
        result = state_json(ghost_ground_state(g, g.index_of(ghost_id)));
        rc["ghost"] = ghost_id;
      } else {
        if (x_tilde_id.empty())
          throw ValidationError("--ec-search needs --x-tilde (or config key 'x_tilde')");
        EcWitness w = ec_witness_search(g, g.index_of(x_tilde_id), ec_eps, ec_delta, ec_cap);
        result = ordered_json{{"found", w.found},
                              {"candidates_tried", w.candidates_tried},
                              {"margin_rejections", w.margin_rejections},
                              {"note", w.note}};
        if (w.found) {
          ordered_json ids = ordered_json::array();
          for (int v : w.omega->interior()) ids.push_back(g.id_of(v));
          result["interior"] = ids;
          result["state"] = state_json(*w.state);
        }
        rc["x_tilde"] = x_tilde_id;
        rc["eps"] = ec_eps;
        rc["delta"] = ec_delta;
        rc["size_cap"] = ec_cap;
      }
      ordered_json art = tool::artifact(rc, result);
      tool::write_json(tool::ensure_out_dir(gl.out_dir) / "spectrum.json", art);
      std::cout << art.dump(2) << "\n";
    });
  });

  // ---------------------------------------------------------------- kernel
  std::string t_list_str, kernel_method = gl.str("method", "expm");
  bool do_audit = false, matrix_csv = false;
  auto* sc_kernel = app.add_subcommand("kernel", "heat kernel values and the property audit");
  sc_kernel->fallthrough();
  sc_kernel->add_option("graph", graph_desc, "graph descriptor");
  sc_kernel->add_option("--t", t_list_str, "comma-separated times");
  sc_kernel->add_option("--method", kernel_method, "expm or series")->capture_default_str();
  sc_kernel->add_flag("--audit", do_audit, "run the full property audit over the times");
  sc_kernel->add_flag("--matrix-csv", matrix_csv, "also export kernel matrices as tidy CSV");
  sc_kernel->callback([&] {
    run([&] {
      std::vector<double> ts = t_list_str.empty() ? gl.numlist("t_grid") : parse_num_list(t_list_str);
      if (ts.empty()) throw ValidationError("no times given (--t or config key 't_grid')");
      WeightedGraph g = need_graph().build();
      ordered_json rc = resolved("kernel", {{"graph", graph_desc},
                                            {"t_grid", ts},
                                            {"method", kernel_method},
                                            {"audit", do_audit}});
      auto dir = tool::ensure_out_dir(gl.out_dir);
      ordered_json result;
      if (do_audit) {
        KernelAudit a = kernel_audit(g, ts);
        ordered_json entries = ordered_json::array();
        for (const auto& e : a.entries)
          entries.push_back({{"t", e.t},
                             {"positivity", e.positivity},
                             {"symmetry", e.symmetry},
                             {"mass", e.mass},
                             {"entry_bound", e.entry_bound},
                             {"route_mismatch", e.route_mismatch}});
        result = ordered_json{{"entries", entries},
                              {"semigroup", a.semigroup},
                              {"heat_equation", a.heat_equation},
                              {"fd_step", a.fd_step},
                              {"max_route_mismatch", a.max_route_mismatch},
                              {"max_property_violation", a.max_property_violation()}};
      } else {
        ordered_json vals = ordered_json::array();
        for (double t : ts) {
          KernelMatrix km = heat_kernel(g, t, kernel_method);
          vals.push_back({{"t", t},
                          {"min_entry", km.P.minCoeff()},
                          {"max_entry", km.P.maxCoeff()},
                          {"method", km.method}});
        }
        result = ordered_json{{"times", vals}};
      }
      if (matrix_csv) {
        tool::CsvWriter csv(dir / "kernel_matrix.csv", tool::config_hash(rc), "t,x,y,p");
        for (double t : ts) {
          KernelMatrix km = heat_kernel(g, t, kernel_method);
          for (int x = 0; x < g.order(); ++x)
            for (int y = 0; y < g.order(); ++y) {
              csv.field(t), csv.field(g.id_of(x)), csv.field(g.id_of(y)), csv.field(km.P(x, y));
              csv.endrow();
            }
        }
        result["matrix_csv"] = (dir / "kernel_matrix.csv").string();
      }
      ordered_json art = tool::artifact(rc, result);
      tool::write_json(dir / "kernel.json", art);
      std::cout << art.dump(2) << "\n";
    });
  });

  // ------------------------------------------------------------------- cde
  std::string cde_vertex, cde_variant = gl.str("variant", "cde"), cde_mode = "falsify", f_file;
  double cde_n = gl.num("n", 2.0), cde_K = gl.num("K", 0.0);
  int budget = gl.integer("budget", 2000);
  auto* sc_cde = app.add_subcommand("cde", "pointwise curvature inequality: check or falsify");
  sc_cde->fallthrough();
  sc_cde->add_option("graph", graph_desc, "graph descriptor");
  sc_cde->add_option("--vertex", cde_vertex, "base vertex id")->required();
  sc_cde->add_option("--n", cde_n, "dimension parameter")->capture_default_str();
  sc_cde->add_option("--K", cde_K, "curvature lower bound")->capture_default_str();
  sc_cde->add_option("--variant", cde_variant, "cde or cde-prime")->capture_default_str();
  sc_cde->add_option("--mode", cde_mode, "check (needs --f-file) or falsify")
      ->capture_default_str();
  sc_cde->add_option("--f-file", f_file, "JSON {\"values\": {id: value}} for --mode check");
  sc_cde->add_option("--budget", budget, "sample budget for --mode falsify")
      ->capture_default_str();
  sc_cde->callback([&] {
    run([&] {
      WeightedGraph g = need_graph().build();
      CdeVariant variant;
      if (cde_variant == "cde") variant = CdeVariant::cde;
      else if (cde_variant == "cde-prime") variant = CdeVariant::cde_prime;
      else throw ValidationError("unknown variant '" + cde_variant + "' (cde or cde-prime)");
      int x = g.index_of(cde_vertex);
      ordered_json rc = resolved("cde", {{"graph", graph_desc},
                                         {"vertex", cde_vertex},
                                         {"n", cde_n},
                                         {"K", cde_K},
                                         {"variant", cde_variant},
                                         {"mode", cde_mode}});
      auto check_json = [](const CdeCheck& c) {
        return ordered_json{{"lhs", c.lhs},         {"rhs", c.rhs},
                            {"slack", c.slack},     {"margin", c.margin()},
                            {"satisfied", c.satisfied}, {"vacuous", c.vacuous}};
      };
      ordered_json result;
      if (cde_mode == "check") {
        if (f_file.empty()) throw ValidationError("--mode check needs --f-file");
        VertexFunction f = PsiSpec::parse("file:" + f_file).materialize(g);
        result = check_json(cde_verify(g, x, f, cde_n, cde_K, variant));
      } else if (cde_mode == "falsify") {
        CdeSearchResult s = cde_falsify(g, x, cde_n, cde_K, variant, budget, resolved_seed(gl));
        result = ordered_json{{"counterexample", s.counterexample()},
                              {"worst", check_json(s.worst)},
                              {"evaluations", s.evaluations},
                              {"witness", phi_to_json(g, s.witness_f)}};
        rc["budget"] = budget;
      } else {
        throw ValidationError("unknown mode '" + cde_mode + "' (check or falsify)");
      }
      ordered_json art = tool::artifact(rc, result);
      tool::write_json(tool::ensure_out_dir(gl.out_dir) / "cde.json", art);
      std::cout << art.dump(2) << "\n";
    });
  });

  // -------------------------------------------------------------- simulate
  std::string samples_str;
  double u_big = gl.num("u_big", 0.0), rtol = gl.num("rtol", 1e-8), atol = gl.num("atol", 1e-11);
  auto* sc_sim = app.add_subcommand("simulate", "integrate the flow, writing a trajectory CSV");
  sc_sim->fallthrough();
  sc_sim->add_option("graph", graph_desc, "graph descriptor");
  sc_sim->add_option("--psi", psi_desc, "initial-data descriptor")->capture_default_str();
  sc_sim->add_option("--lambda", lambda, "data amplitude")->capture_default_str();
  sc_sim->add_option("--p", p, "reaction exponent")->capture_default_str();
  sc_sim->add_option("--t-max", t_max, "time horizon (default 10)");
  sc_sim->add_option("--u-big", u_big, "blow-up declaration level (default from tolerance)");
  sc_sim->add_option("--rtol", rtol, "relative tolerance")->capture_default_str();
  sc_sim->add_option("--atol", atol, "absolute tolerance")->capture_default_str();
  sc_sim->add_option("--samples", samples_str, "comma-separated sample times for the CSV");
  sc_sim->callback([&] {
    run([&] {
      WeightedGraph g = need_graph().build();
      VertexFunction psi = PsiSpec::parse(psi_desc).materialize(g);
      SolverOptions o;
      o.t_max = t_max > 0 ? t_max : 10.0;
      o.U_big = u_big > 0 ? u_big : ubig_for_tolerance(1e-6, p);
      o.rtol = rtol;
      o.atol = atol;
      std::vector<double> samples =
          samples_str.empty() ? gl.numlist("samples") : parse_num_list(samples_str);
      if (samples.empty())
        for (int j = 0; j <= 32; ++j) samples.push_back(o.t_max * j / 32.0);
      o.sample_times = samples;
      EvolutionResult r = integrate(g, lambda * psi.to_vector(), p, o);

      ordered_json rc = resolved("simulate", {{"graph", graph_desc},
                                              {"psi", psi_desc},
                                              {"lambda", lambda},
                                              {"p", p},
                                              {"t_max", o.t_max},
                                              {"u_big", o.U_big},
                                              {"rtol", rtol},
                                              {"atol", atol}});
      auto dir = tool::ensure_out_dir(gl.out_dir);
      tool::CsvWriter csv(dir / "trajectory.csv", tool::config_hash(rc), "t,vertex_id,u");
      for (size_t k = 0; k < r.sample_times.size(); ++k)
        for (int v = 0; v < g.order(); ++v) {
          csv.field(r.sample_times[k]), csv.field(g.id_of(v)), csv.field(r.samples[k][v]);
          csv.endrow();
        }
      ordered_json result{{"status", r.blew_up() ? "blowup" : "completed"},
                          {"t_end", r.t_end},
                          {"sup_end", r.sup_end},
                          {"steps_accepted", r.steps_accepted},
                          {"steps_rejected", r.steps_rejected},
                          {"samples_written", r.sample_times.size()},
                          {"trajectory_csv", (dir / "trajectory.csv").string()}};
      if (r.bracket) result["bracket"] = bracket_json(*r.bracket);
      ordered_json art = tool::artifact(rc, result);
      tool::write_json(dir / "simulate.json", art);
      std::cout << art.dump(2) << "\n";
    });
  });

  // -------------------------------------------------------------- lifespan
  int initial_radius = gl.integer("initial_radius", 8);
  int max_doublings = gl.integer("max_doublings", 6);
  auto* sc_life = app.add_subcommand("lifespan", "estimate the blow-up time with a certificate");
  sc_life->fallthrough();
  sc_life->add_option("graph", graph_desc, "graph descriptor");
  sc_life->add_option("--psi", psi_desc, "initial-data descriptor")->capture_default_str();
  sc_life->add_option("--lambda", lambda, "data amplitude")->capture_default_str();
  sc_life->add_option("--p", p, "reaction exponent")->capture_default_str();
  sc_life->add_option("--tol", tol, "target bracket width")->capture_default_str();
  sc_life->add_option("--t-max", t_max, "no-blow-up horizon (default 1e6)");
  sc_life->add_option("--initial-radius", initial_radius, "first truncation radius (generators)")
      ->capture_default_str();
  sc_life->add_option("--max-doublings", max_doublings, "radius doublings before giving up")
      ->capture_default_str();
  sc_life->callback([&] {
    run([&] {
      LifespanOptions lo;
      lo.initial_radius = initial_radius;
      lo.max_doublings = max_doublings;
      if (t_max > 0) lo.t_max = t_max;
      GraphSpec target = need_graph();
      LifespanEstimate est = estimate_lifespan(target, PsiSpec::parse(psi_desc), lambda, p, tol, lo);
      ordered_json rc = resolved("lifespan", {{"graph", graph_desc},
                                              {"psi", psi_desc},
                                              {"lambda", lambda},
                                              {"p", p},
                                              {"tol", tol},
                                              {"t_max", lo.t_max},
                                              {"initial_radius", initial_radius},
                                              {"max_doublings", max_doublings}});
      ordered_json result{{"blew_up", est.blew_up},
                          {"T_est", est.blew_up ? ordered_json(est.T_est) : ordered_json(nullptr)},
                          {"bracket", bracket_json(est.bracket)},
                          {"converged", est.converged},
                          {"tolerance", est.tolerance},
                          {"radius_table", est.radius_table}};
      auto dir = tool::ensure_out_dir(gl.out_dir);
      tool::CsvWriter csv(dir / "lifespan.csv", tool::config_hash(rc), "radius,T_estimate");
      for (const auto& [r, T] : est.radius_table) {
        csv.field(r), csv.field(T), csv.endrow();
      }
      ordered_json art = tool::artifact(rc, result);
      tool::write_json(dir / "lifespan.json", art);
      std::cout << art.dump(2) << "\n";
    });
  });

  // ---------------------------------------------------------------- bounds
  bool b_all = false, b_kaplan = false, b_hk = false, b_density = false, b_sandwich = false;
  double beta = gl.num("beta", 1.0), t_max_root = 1e3;
  std::string r_grid_str;
  auto* sc_bounds = app.add_subcommand("bounds", "analytic lifespan bounds for one instance");
  sc_bounds->fallthrough();
  sc_bounds->add_option("graph", graph_desc, "graph descriptor");
  sc_bounds->add_option("--psi", psi_desc, "initial-data descriptor")->capture_default_str();
  sc_bounds->add_option("--lambda", lambda, "data amplitude")->capture_default_str();
  sc_bounds->add_option("--p", p, "reaction exponent")->capture_default_str();
  sc_bounds->add_option("--x-tilde", x_tilde_id, "reference vertex (default: max of psi)");
  sc_bounds->add_option("--t-max-root", t_max_root, "search horizon for the kernel root")
      ->capture_default_str();
  sc_bounds->add_flag("--all", b_all, "every applicable bound (default)");
  sc_bounds->add_flag("--kaplan", b_kaplan, "eigenfunction-pairing upper bound only");
  sc_bounds->add_flag("--hk", b_hk, "kernel-root upper bound only");
  sc_bounds->add_flag("--density", b_density, "occupation-density bound only");
  sc_bounds->add_flag("--sandwich", b_sandwich, "positive-data sandwich only");
  sc_bounds->add_option("--beta", beta, "superlevel threshold for --density")
      ->capture_default_str();
  sc_bounds->add_option("--r-grid", r_grid_str, "radii for --density, e.g. 2,4,8");
  sc_bounds->callback([&] {
    run([&] {
      WeightedGraph g = need_graph().build();
      VertexFunction psi = PsiSpec::parse(psi_desc).materialize(g);
      if (!(b_kaplan || b_hk || b_density || b_sandwich)) b_all = true;
      int x_tilde = x_tilde_id.empty() ? -1 : g.index_of(x_tilde_id);
      ordered_json rc = resolved("bounds", {{"graph", graph_desc},
                                            {"psi", psi_desc},
                                            {"lambda", lambda},
                                            {"p", p},
                                            {"x_tilde", x_tilde_id},
                                            {"t_max_root", t_max_root}});
      ordered_json result;
      auto dir = tool::ensure_out_dir(gl.out_dir);
      if (b_all) {
        BoundsReport rep = assemble_bounds_report(g, lambda, psi, p, x_tilde, t_max_root);
        ordered_json entries = ordered_json::array();
        for (const auto& e : rep.entries)
          entries.push_back({{"tag", e.tag}, {"kind", e.kind}, {"value", e.value}, {"note", e.note}});
        result["entries"] = entries;
        result["lower_basic"] = rep.lower_basic;
        if (rep.kaplan)
          result["kaplan"] = {{"lambda1", rep.kaplan->lambda1},
                              {"eta0", rep.kaplan->eta0},
                              {"threshold_met", rep.kaplan->threshold_met},
                              {"T_up", rep.kaplan->T_up ? ordered_json(*rep.kaplan->T_up)
                                                        : ordered_json(nullptr)}};
        if (rep.kernel_root)
          result["kernel_root"] = {{"T_up", rep.kernel_root->T_up
                                                ? ordered_json(*rep.kernel_root->T_up)
                                                : ordered_json(nullptr)},
                                   {"g_at_t_max", rep.kernel_root->g_at_t_max}};
        if (rep.finite_threshold)
          result["finite_threshold"] = {{"Lambda1", rep.finite_threshold->Lambda1},
                                        {"lambda1_ghost", rep.finite_threshold->lambda1_ghost},
                                        {"pairing", rep.finite_threshold->pairing}};
        if (rep.sandwich)
          result["sandwich"] = {{"c_low", rep.sandwich->c_low},
                                {"c_high", rep.sandwich->c_high},
                                {"t1", rep.sandwich->t1(lambda)},
                                {"t2", rep.sandwich->t2(lambda)}};
      }
      if (b_kaplan) {
        auto kb = kaplan_bound_auto(g, lambda, psi, p);
        result["kaplan"] =
            kb ? ordered_json{{"lambda1", kb->lambda1},
                              {"eta0", kb->eta0},
                              {"threshold_met", kb->threshold_met},
                              {"T_up", kb->T_up ? ordered_json(*kb->T_up) : ordered_json(nullptr)}}
               : ordered_json(nullptr);
      }
      if (b_hk) {
        int xb = x_tilde >= 0 ? x_tilde : [&] {
          int best = 0;
          for (int v = 1; v < g.order(); ++v)
            if (psi.at(v) > psi.at(best)) best = v;
          return best;
        }();
        HeatKernelBound hb = heat_kernel_upper_bound(g, xb, lambda, psi, p, t_max_root);
        result["kernel_root"] = {{"T_up", hb.T_up ? ordered_json(*hb.T_up) : ordered_json(nullptr)},
                                 {"g_at_t_max", hb.g_at_t_max}};
      }
      if (b_sandwich) {
        SandwichBound sb = sandwich_finite(g, psi, p);
        result["sandwich"] = {{"c_low", sb.c_low},
                              {"c_high", sb.c_high},
                              {"t1", sb.t1(lambda)},
                              {"t2", sb.t2(lambda)}};
      }
      if (b_density) {
        std::vector<int> r_grid;
        for (double r : r_grid_str.empty() ? gl.numlist("r_grid") : parse_num_list(r_grid_str))
          r_grid.push_back(int(r));
        if (r_grid.empty()) r_grid = {2, 3, 4, 6, 8};
        DensityProfile prof = density_profile(g, psi, beta, r_grid);
        auto dbound = density_bound(prof, p);
        ordered_json rows = ordered_json::array();
        for (const auto& [r, dv] : prof.rows) rows.push_back(ordered_json::array({r, dv}));
        result["density"] = {{"beta", prof.beta},
                             {"rows", rows},
                             {"d_bar", prof.d_bar},
                             {"tail_monotone", prof.tail_monotone},
                             {"estimator_note", prof.estimator_note},
                             {"bound", dbound ? ordered_json(*dbound) : ordered_json(nullptr)}};
        tool::CsvWriter csv(dir / "density.csv", tool::config_hash(rc), "r,density");
        for (const auto& [r, dv] : prof.rows) {
          csv.field(r), csv.field(dv), csv.endrow();
        }
      }
      ordered_json art = tool::artifact(rc, result);
      tool::write_json(dir / "bounds.json", art);
      std::cout << art.dump(2) << "\n";
    });
  });

  // ----------------------------------------------------------------- sweep
  std::string lambdas_str, direction = gl.str("direction", "large");
  double psi_inf = gl.num("psi_inf", std::nan(""));
  auto* sc_sweep = app.add_subcommand("sweep", "scaled lifespan across a lambda grid");
  sc_sweep->fallthrough();
  sc_sweep->add_option("graph", graph_desc, "graph descriptor");
  sc_sweep->add_option("--psi", psi_desc, "initial-data descriptor")->capture_default_str();
  sc_sweep->add_option("--p", p, "reaction exponent")->capture_default_str();
  sc_sweep->add_option("--lambdas", lambdas_str, "comma-separated amplitude grid");
  sc_sweep->add_option("--direction", direction, "large or small")->capture_default_str();
  sc_sweep->add_option("--psi-inf", psi_inf, "assumed value of psi at infinity (small direction)");
  sc_sweep->add_option("--tol", tol, "lifespan tolerance per row")->capture_default_str();
  sc_sweep->add_option("--t-max", t_max, "no-blow-up horizon per row");
  sc_sweep->callback([&] {
    run([&] {
      std::vector<double> grid =
          lambdas_str.empty() ? gl.numlist("lambda_grid") : parse_num_list(lambdas_str);
      if (grid.empty()) throw ValidationError("no grid given (--lambdas or config key 'lambda_grid')");
      SweepOptions so;
      so.direction = direction;
      so.tol = tol;
      if (t_max > 0) so.t_max = t_max;
      if (!std::isnan(psi_inf)) so.psi_inf = psi_inf;
      SweepTable table = asymptotic_sweep(need_graph(), PsiSpec::parse(psi_desc), p, grid, so);
      ordered_json rc = resolved("sweep", {{"graph", graph_desc},
                                           {"psi", psi_desc},
                                           {"p", p},
                                           {"lambda_grid", grid},
                                           {"direction", direction},
                                           {"tol", tol}});
      auto dir = tool::ensure_out_dir(gl.out_dir);
      tool::CsvWriter csv(dir / "sweep.csv", tool::config_hash(rc),
                          "lambda,scaled_lifespan,lower_bound,upper_bound");
      ordered_json rows = ordered_json::array();
      for (const auto& r : table.rows) {
        csv.field(r.lambda), csv.field(r.scaled), csv.field(r.lower_scaled);
        if (r.upper_scaled) csv.field(*r.upper_scaled);
        else csv.field(std::string());
        csv.endrow();
        rows.push_back({{"lambda", r.lambda},
                        {"T_est", r.T_est},
                        {"scaled", r.scaled},
                        {"lower_scaled", r.lower_scaled},
                        {"upper_scaled", r.upper_scaled ? ordered_json(*r.upper_scaled)
                                                        : ordered_json(nullptr)},
                        {"ok", r.ok},
                        {"note", r.note}});
      }
      ordered_json result{{"rows", rows},
                          {"limit_value", table.limit_value ? ordered_json(*table.limit_value)
                                                            : ordered_json(nullptr)},
                          {"monotone_toward_limit", table.monotone_toward_limit},
                          {"partial", table.partial},
                          {"direction", table.direction},
                          {"sweep_csv", (dir / "sweep.csv").string()}};
      ordered_json art = tool::artifact(rc, result);
      tool::write_json(dir / "sweep.json", art);
      std::cout << art.dump(2) << "\n";
      if (table.partial) exit_code = 1;
    });
  });

  // -------------------------------------------------------------- scenario
  std::string preset;
  bool list_presets = false;
  auto* sc_scen = app.add_subcommand("scenario", "run a named preset with built-in assertions");
  sc_scen->fallthrough();
  sc_scen->add_option("name", preset, "preset id (see --list)");
  sc_scen->add_flag("--list", list_presets, "list preset ids and exit");
  sc_scen->callback([&] {
    if (list_presets) {
      for (const auto& [name, fn] : scenario_table()) std::cout << name << "\n";
      return;
    }
    std::string canonical = preset;
    if (auto it = scenario_aliases().find(preset); it != scenario_aliases().end())
      canonical = it->second;
    ScenarioFn fn = nullptr;
    for (const auto& [name, f] : scenario_table())
      if (name == canonical) fn = f;
    if (!fn) {
      std::cerr << "unknown preset '" << preset << "'; available:\n";
      for (const auto& [name, f] : scenario_table()) std::cerr << "  " << name << "\n";
      exit_code = 2;
      return;
    }
    run([&] {
      ordered_json rc = resolved("scenario", {{"name", canonical}});
      auto dir = tool::ensure_out_dir(gl.out_dir);
      ScenarioReport rep = fn(gl, dir, rc);
      int failed = 0;
      for (const auto& c : rep.checks) {
        std::cout << (c.ok ? "[ok]   " : "[FAIL] ") << c.what;
        if (!c.detail.empty()) std::cout << " -- " << c.detail;
        std::cout << "\n";
        if (!c.ok) ++failed;
      }
      ordered_json checks = ordered_json::array();
      for (const auto& c : rep.checks)
        checks.push_back({{"what", c.what}, {"ok", c.ok}, {"detail", c.detail}});
      tool::write_json(dir / "scenario_report.json",
                       tool::artifact(rc, ordered_json{{"preset", canonical},
                                                       {"checks", checks},
                                                       {"artifacts", rep.artifacts},
                                                       {"passed", rep.all_ok()}}));
      std::cout << (rep.all_ok() ? "scenario passed" : "scenario FAILED") << " (" << canonical
                << ")\n";
      if (!rep.all_ok()) exit_code = 1;
    });
  });

  // -------------------------------------------------------------- plotdata
  std::string pd_kind, pd_in, pd_out;
  auto* sc_plot = app.add_subcommand("plotdata", "tidy CSV series from a run artifact");
  sc_plot->fallthrough();
  sc_plot->add_option("kind", pd_kind, "sweep, lifespan, or density")->required();
  sc_plot->add_option("--in", pd_in, "artifact JSON produced by a previous run")->required();
  sc_plot->add_option("--out", pd_out, "output CSV (default <kind>_plot.csv)");
  sc_plot->callback([&] {
    run([&] {
      std::ifstream in(pd_in);
      if (!in) throw ValidationError("missing artifact '" + pd_in + "'");
      ordered_json art;
      try {
        in >> art;
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("artifact '" + pd_in + "' is not valid JSON: " + e.what());
      }
      if (!art.contains("result") || !art.contains("config_hash"))
        throw ValidationError("'" + pd_in + "' is not a run artifact (missing result/config_hash)");
      const auto& res = art["result"];
      std::string hash = art["config_hash"].get<std::string>();
      auto dir = tool::ensure_out_dir(gl.out_dir);
      std::filesystem::path out =
          pd_out.empty() ? dir / (pd_kind + "_plot.csv") : std::filesystem::path(pd_out);

      if (pd_kind == "sweep") {
        if (!res.contains("rows"))
          throw ValidationError("artifact lacks sweep rows; run `graphblow sweep` first");
        tool::CsvWriter csv(out, hash, "lambda,scaled_lifespan,lower_bound,upper_bound");
        for (const auto& r : res["rows"]) {
          csv.field(r["lambda"].get<double>());
          csv.field(r["scaled"].get<double>());
          csv.field(r["lower_scaled"].get<double>());
          if (r.contains("upper_scaled") && !r["upper_scaled"].is_null())
            csv.field(r["upper_scaled"].get<double>());
          else csv.field(std::string());
          csv.endrow();
        }
      } else if (pd_kind == "lifespan") {
        if (!res.contains("radius_table"))
          throw ValidationError("artifact lacks a radius table; run `graphblow lifespan` first");
        tool::CsvWriter csv(out, hash, "radius,T_estimate");
        for (const auto& row : res["radius_table"]) {
          csv.field(row[0].get<int>()), csv.field(row[1].get<double>()), csv.endrow();
        }
      } else if (pd_kind == "density") {
        const auto& sec = res.contains("density") ? res["density"] : res;
        if (!sec.contains("rows"))
          throw ValidationError("artifact lacks density rows; run `graphblow bounds --density` first");
        tool::CsvWriter csv(out, hash, "r,density");
        for (const auto& row : sec["rows"]) {
          csv.field(row[0].get<int>()), csv.field(row[1].get<double>()), csv.endrow();
        }
      } else {
        throw ValidationError("unknown plotdata kind '" + pd_kind + "' (sweep, lifespan, density)");
      }
      std::cout << out.string() << "\n";
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, returns 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors map to 2 regardless of CLI11's own code
  }
  return exit_code;
}
