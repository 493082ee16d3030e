#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "graphblow/graph.hpp"

namespace graphblow {

/// Real-valued function on a subset of a graph's vertices. Total on its
/// declared domain; reading an undefined vertex throws. Plain container:
/// the owning graph is passed to the operations that need structure.
class VertexFunction {
 public:
  VertexFunction() = default;

  static VertexFunction undefined(const WeightedGraph& g);
  static VertexFunction constant(const WeightedGraph& g, double c);
  static VertexFunction zero(const WeightedGraph& g) { return constant(g, 0.0); }
  static VertexFunction from_vector(const WeightedGraph& g, const Eigen::VectorXd& v);
  /// 1 on `support`, 0 elsewhere (total).
  static VertexFunction indicator(const WeightedGraph& g, const std::vector<int>& support);
  /// Defined only on `domain`, with matching values.
  static VertexFunction on_set(const WeightedGraph& g, const std::vector<int>& domain,
                               const std::vector<double>& values);

  int size() const { return static_cast<int>(vals_.size()); }
  bool defined(int v) const { return def_[v] != 0; }
  bool total() const;
  double at(int v) const;
  void set(int v, double value);

  /// Number of vertices in the domain.
  int domain_size() const;
  double max_value() const;  ///< over the domain; domain must be nonempty
  double min_value() const;
  double sup_norm() const;   ///< max |value| over the domain

  /// Dense copy; requires totality.
  Eigen::VectorXd to_vector() const;

 private:
  std::vector<double> vals_;
  std::vector<uint8_t> def_;
};

/// sum over the domain of f of f(x) * mu(x); `over` restricts the sum.
double integral(const WeightedGraph& g, const VertexFunction& f);
double integral(const WeightedGraph& g, const VertexFunction& f, const std::vector<int>& over);

/// Parsed initial-data descriptor, evaluable on any compatible graph
/// (in particular on every truncation radius of a generator family):
///   const:C                 constant C
///   indicator:id1;id2;...   1 on the listed vertex ids, 0 elsewhere
///   halfline                1 where the integer vertex id is >= 0 (1-d lattice ids)
///   shell:R0:INNER:OUTER    INNER within hop distance R0 of the truncation
///                           center (vertex "0"/origin when untruncated), OUTER beyond
///   file:PATH               JSON {"values": {"id": number, ...}}, 0 when omitted
struct PsiSpec {
  enum class Kind { constant, indicator, halfline, shell, file };
  Kind kind = Kind::constant;
  double value = 1.0;                 ///< constant
  std::vector<std::string> ids;       ///< indicator support
  int shell_r0 = 0;
  double shell_inner = 0.0, shell_outer = 0.0;
  std::string path;
  std::string text;

  static PsiSpec parse(const std::string& descriptor);

  /// Builds the data on `g`, rejecting negative or identically-zero results.
  VertexFunction materialize(const WeightedGraph& g) const;

 private:
  VertexFunction materialize_raw(const WeightedGraph& g) const;
};

}  // namespace graphblow
