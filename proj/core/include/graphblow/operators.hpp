#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "graphblow/domain.hpp"
#include "graphblow/graph.hpp"
#include "graphblow/vertex_function.hpp"

namespace graphblow {

/// Delta f(x) = (1/mu(x)) * sum_{y~x} w_xy (f(y) - f(x)).
/// f must cover the closed 1-neighborhood of x.
double laplacian_at(const WeightedGraph& g, const VertexFunction& f, int x);
VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& f,
                         const std::vector<int>& at);

/// Delta as a matrix acting on total functions (row x as above).
Eigen::SparseMatrix<double> laplacian_matrix(const WeightedGraph& g);

/// Absorbing-boundary restriction: f lives on the interior of om, is
/// extended by zero elsewhere, and the result is read on the interior
/// (ordered like om.interior()).
Eigen::VectorXd dirichlet_laplacian(const WeightedGraph& g, const DomainSubset& om,
                                    const Eigen::VectorXd& f_interior);
VertexFunction dirichlet_laplacian(const WeightedGraph& g, const DomainSubset& om,
                                   const VertexFunction& f);

/// Gamma(f,h)(x) = (1/(2 mu(x))) sum_{y~x} w_xy (f(y)-f(x))(h(y)-h(x)).
double gamma_at(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h, int x);
double gamma_at(const WeightedGraph& g, const VertexFunction& f, int x);
VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f, const std::vector<int>& at);

/// Gamma2(f)(x) = (1/2) [ Delta Gamma(f) - 2 Gamma(f, Delta f) ](x).
/// f must cover the closed 2-neighborhood of x.
double gamma2_at(const WeightedGraph& g, const VertexFunction& f, int x);

/// CDE(n,K) tests the inequality only where Delta f(x) < 0, with quadratic
/// term ((Delta f)(x))^2 / n; CDE'(n,K) is ungated with quadratic term
/// (f(x) (Delta log f)(x))^2 / n.
enum class CdeVariant : std::uint8_t { cde, cde_prime };

struct CdeCheck {
  CdeVariant variant;
  double n = 0.0, K = 0.0;
  double lhs = 0.0;   ///< Gamma2(f)(x) - Gamma(f, Gamma(f)/f)(x)
  double rhs = 0.0;   ///< quadratic term / n + K * Gamma(f)(x)
  double slack = 0.0; ///< 1e-9 * (1 + |lhs| + |rhs|)
  bool satisfied = false;
  bool vacuous = false;  ///< CDE variant with Delta f(x) >= 0
  double margin() const { return lhs - rhs; }
};

/// Evaluate the pointwise inequality at x for a given f, positive on the
/// closed 2-ball (offending vertices are named in errors).
CdeCheck cde_verify(const WeightedGraph& g, int x, const VertexFunction& f, double n,
                    double K, CdeVariant variant);

struct CdeSearchResult {
  CdeCheck worst;              ///< minimum-margin witness found
  VertexFunction witness_f;    ///< the function achieving it (on the closed 2-ball)
  int evaluations = 0;
  bool counterexample() const { return !worst.satisfied && !worst.vacuous; }
};

/// Randomized falsifier: samples log f ~ N(0,1) on the closed 2-ball of x
/// (80% of the budget), then coordinate descent from the worst sample (20%).
/// Deterministic for a fixed seed. Finding no counterexample proves nothing;
/// the worst witness is always reported.
CdeSearchResult cde_falsify(const WeightedGraph& g, int x, double n, double K,
                            CdeVariant variant, int budget, std::uint64_t seed);

}  // namespace graphblow
