#include "graphblow/vertex_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace graphblow {

VertexFunction VertexFunction::undefined(const WeightedGraph& g) {
  VertexFunction f;
  f.vals_.assign(g.order(), 0.0);
  f.def_.assign(g.order(), 0);
  return f;
}

VertexFunction VertexFunction::constant(const WeightedGraph& g, double c) {
  VertexFunction f;
  f.vals_.assign(g.order(), c);
  f.def_.assign(g.order(), 1);
  return f;
}

VertexFunction VertexFunction::from_vector(const WeightedGraph& g, const Eigen::VectorXd& v) {
  if (v.size() != g.order())
    throw ValidationError("vector length " + std::to_string(v.size()) +
                          " does not match graph order " + std::to_string(g.order()));
  VertexFunction f = constant(g, 0.0);
  for (int i = 0; i < g.order(); ++i) f.vals_[i] = v[i];
  return f;
}

VertexFunction VertexFunction::indicator(const WeightedGraph& g, const std::vector<int>& support) {
  VertexFunction f = constant(g, 0.0);
  for (int v : support) {
    if (v < 0 || v >= g.order())
      throw ValidationError("indicator support contains invalid index " + std::to_string(v));
    f.vals_[v] = 1.0;
  }
  return f;
}

VertexFunction VertexFunction::on_set(const WeightedGraph& g, const std::vector<int>& domain,
                                      const std::vector<double>& values) {
  if (domain.size() != values.size())
    throw ValidationError("domain and value lists differ in length");
  VertexFunction f = undefined(g);
  for (size_t i = 0; i < domain.size(); ++i) {
    int v = domain[i];
    if (v < 0 || v >= g.order())
      throw ValidationError("function domain contains invalid index " + std::to_string(v));
    f.vals_[v] = values[i];
    f.def_[v] = 1;
  }
  return f;
}

bool VertexFunction::total() const {
  return std::all_of(def_.begin(), def_.end(), [](uint8_t d) { return d != 0; });
}

double VertexFunction::at(int v) const {
  if (v < 0 || v >= size() || !def_[v])
    throw ValidationError("function evaluated outside its domain at index " + std::to_string(v));
  return vals_[v];
}

void VertexFunction::set(int v, double value) {
  if (v < 0 || v >= size())
    throw ValidationError("function assignment at invalid index " + std::to_string(v));
  vals_[v] = value;
  def_[v] = 1;
}

int VertexFunction::domain_size() const {
  int n = 0;
  for (uint8_t d : def_) n += d != 0;
  return n;
}

double VertexFunction::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (int v = 0; v < size(); ++v)
    if (def_[v]) m = std::max(m, vals_[v]);
  if (!std::isfinite(m) && m < 0) throw ValidationError("max of a function with empty domain");
  return m;
}

double VertexFunction::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (int v = 0; v < size(); ++v)
    if (def_[v]) m = std::min(m, vals_[v]);
  if (!std::isfinite(m) && m > 0) throw ValidationError("min of a function with empty domain");
  return m;
}

double VertexFunction::sup_norm() const {
  double m = 0.0;
  bool any = false;
  for (int v = 0; v < size(); ++v)
    if (def_[v]) {
      m = std::max(m, std::abs(vals_[v]));
      any = true;
    }
  if (!any) throw ValidationError("sup norm of a function with empty domain");
  return m;
}

Eigen::VectorXd VertexFunction::to_vector() const {
  if (!total()) throw ValidationError("function is not defined on every vertex");
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) v[i] = vals_[i];
  return v;
}

double integral(const WeightedGraph& g, const VertexFunction& f) {
  double s = 0.0;
  for (int v = 0; v < g.order(); ++v) s += f.at(v) * g.mu(v);
  return s;
}

double integral(const WeightedGraph& g, const VertexFunction& f, const std::vector<int>& over) {
  double s = 0.0;
  for (int v : over) s += f.at(v) * g.mu(v);
  return s;
}

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_num(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad " + what + " '" + s + "' in initial-data descriptor");
  }
}

}  // namespace

PsiSpec PsiSpec::parse(const std::string& descriptor) {
  PsiSpec s;
  s.text = descriptor;
  auto colon = descriptor.find(':');
  std::string head = descriptor.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);

  if (head == "const") {
    s.kind = Kind::constant;
    s.value = parse_num(rest, "constant");
  } else if (head == "indicator") {
    s.kind = Kind::indicator;
    s.ids = split_on(rest, ';');
    if (s.ids.empty()) throw ValidationError("indicator descriptor lists no vertices");
  } else if (head == "halfline") {
    s.kind = Kind::halfline;
  } else if (head == "shell") {
    auto parts = split_on(rest, ':');
    if (parts.size() != 3)
      throw ValidationError("shell descriptor needs radius:inner:outer, got '" + descriptor + "'");
    s.kind = Kind::shell;
    s.shell_r0 = static_cast<int>(parse_num(parts[0], "shell radius"));
    s.shell_inner = parse_num(parts[1], "shell inner value");
    s.shell_outer = parse_num(parts[2], "shell outer value");
  } else if (head == "file") {
    if (rest.empty()) throw ValidationError("descriptor 'file:' is missing a path");
    s.kind = Kind::file;
    s.path = rest;
  } else {
    throw ValidationError("unknown initial-data descriptor kind '" + head + "'");
  }
  return s;
}

namespace {

// initial data must be nonnegative and not identically zero
VertexFunction checked_data(VertexFunction f, const std::string& text) {
  if (f.min_value() < 0.0)
    throw ValidationError("initial data '" + text + "' takes a negative value");
  if (!(f.max_value() > 0.0))
    throw ValidationError("initial data '" + text + "' is identically zero");
  return f;
}

}  // namespace

VertexFunction PsiSpec::materialize(const WeightedGraph& g) const {
  return checked_data(materialize_raw(g), text);
}

VertexFunction PsiSpec::materialize_raw(const WeightedGraph& g) const {
  switch (kind) {
    case Kind::constant:
      return VertexFunction::constant(g, value);
    case Kind::indicator: {
      std::vector<int> support;
      for (const auto& id : ids) support.push_back(g.index_of(id));
      return VertexFunction::indicator(g, support);
    }
    case Kind::halfline: {
      VertexFunction f = VertexFunction::constant(g, 0.0);
      for (int v = 0; v < g.order(); ++v) {
        const std::string& id = g.id_of(v);
        try {
          size_t pos = 0;
          long c = std::stol(id, &pos);
          if (pos != id.size()) throw std::invalid_argument(id);
          if (c >= 0) f.set(v, 1.0);
        } catch (const std::exception&) {
          throw ValidationError("halfline data needs integer vertex ids, found '" + id + "'");
        }
      }
      return f;
    }
    case Kind::shell: {
      int center = g.truncation() ? g.truncation()->center
                  : g.has_vertex("0") ? g.index_of("0")
                                      : 0;
      auto dist = g.distances_from(center);
      VertexFunction f = VertexFunction::constant(g, shell_outer);
      for (int v = 0; v < g.order(); ++v)
        if (dist[v] <= shell_r0) f.set(v, shell_inner);
      return f;
    }
    case Kind::file: {
      std::ifstream in(path);
      if (!in) throw ValidationError("cannot open initial-data file '" + path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("initial-data file '" + path + "' is not valid JSON: " + e.what());
      }
      if (!j.contains("values") || !j["values"].is_object())
        throw ValidationError("initial-data file '" + path + "' lacks a \"values\" object");
      VertexFunction f = VertexFunction::constant(g, 0.0);
      for (const auto& [id, val] : j["values"].items()) {
        if (!val.is_number())
          throw ValidationError("initial-data value for '" + id + "' is not a number");
        f.set(g.index_of(id), val.get<double>());
      }
      return f;
    }
  }
  throw ValidationError("unreachable initial-data descriptor kind");
}

}  // namespace graphblow
