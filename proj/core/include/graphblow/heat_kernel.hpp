#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "graphblow/graph.hpp"
#include "graphblow/vertex_function.hpp"

namespace graphblow {

/// P(t,x,y): positive, symmetric, total mass sum_y P(t,x,y) mu(y) = 1,
/// semigroup under the mu-weighted composition. P(0,x,y) = delta_xy / mu(x).
struct KernelMatrix {
  double t = 0.0;
  Eigen::MatrixXd P;
  std::string method;  ///< "expm" or "series"
};

/// method "expm": scaling-and-squaring matrix exponential of t*Delta.
/// method "series": Taylor series of e^{t Delta} applied to coordinate
/// indicators, evaluated over substeps tau with 2*D_mu*tau <= 1; each
/// substep is truncated at the first N with (2*D_mu*tau)^N / N! below
/// 1e-14 times the data scale (the a-priori bound |Delta^n J| <=
/// (2 D_mu)^n sup|J| controls the tail).
KernelMatrix heat_kernel(const WeightedGraph& g, double t, const std::string& method);

/// e^{t Delta} as a dense matrix via the series route (columns = semigroup
/// action on coordinate indicators; kernel = this times diag(1/mu)).
Eigen::MatrixXd series_propagator(const WeightedGraph& g, double t);

struct KernelAuditEntry {
  double t = 0.0;
  double positivity = 0.0;   ///< max(0, -min entry), t > 0 only
  double symmetry = 0.0;     ///< max |P - P^T|
  double mass = 0.0;         ///< max_x |sum_y P(t,x,y) mu(y) - 1|
  double entry_bound = 0.0;  ///< max(0, max entry - 1/mu_min)
  double route_mismatch = 0.0;  ///< max |P_expm - P_series|
};

struct KernelAudit {
  std::vector<KernelAuditEntry> entries;
  double semigroup = 0.0;      ///< max over grid pairs of |P(t) o P(s) - P(t+s)|
  double heat_equation = 0.0;  ///< central-difference |dP/dt - Delta P|; O(h^2) check
  double fd_step = 0.0;        ///< h used by the check above
  double max_route_mismatch = 0.0;
  /// Largest violation among the exactly-checkable properties
  /// (positivity, symmetry, mass, entry bound, semigroup).
  double max_property_violation() const;
};

KernelAudit kernel_audit(const WeightedGraph& g, const std::vector<double>& t_grid);

/// Exact finite-graph semigroup e^{t Delta} through the symmetric
/// eigendecomposition of the mu-weighted Laplacian. Factorizes once;
/// actions are O(n^2). Independent of both kernel routes above and of the
/// time stepper.
class SemigroupEvaluator {
 public:
  explicit SemigroupEvaluator(const WeightedGraph& g);
  int size() const { return static_cast<int>(mu_sqrt_.size()); }
  Eigen::VectorXd apply(double t, const Eigen::VectorXd& v) const;  ///< e^{t Delta} v
  Eigen::MatrixXd propagator(double t) const;                       ///< e^{t Delta}
  Eigen::MatrixXd kernel(double t) const;                           ///< P(t)

 private:
  Eigen::VectorXd mu_sqrt_, mu_isqrt_;
  Eigen::VectorXd evals_;  ///< eigenvalues of -Delta (nonnegative)
  Eigen::MatrixXd Q_;      ///< orthonormal eigenvectors in symmetrized coordinates
};

struct SmoothedInfimum {
  double tau = 0.0;
  double value = 0.0;  ///< min over the probe set of (e^{tau Delta} psi)(x)
  int argmin = -1;
  std::vector<int> probe;
};

/// sigma_0(tau) = inf_x sum_y P(tau,x,y) psi(y) mu(y) over the probe set.
/// Empty probe: every vertex on untruncated graphs; on truncations, the
/// vertices a margin of ceil(2 + 2 sqrt(D_mu tau)) hops clear of the edge.
SmoothedInfimum smoothed_infimum(const WeightedGraph& g, double tau, const VertexFunction& psi,
                                 std::vector<int> probe = {});

}  // namespace graphblow
