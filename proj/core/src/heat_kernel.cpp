#include "graphblow/heat_kernel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "graphblow/operators.hpp"

namespace graphblow {

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw ValidationError("kernel time must be finite and nonnegative");
}

}  // namespace

Eigen::MatrixXd series_propagator(const WeightedGraph& g, double t) {
  check_time(t);
  const int n = g.order();
  Eigen::SparseMatrix<double> Dl = laplacian_matrix(g);
  const double dmu = g.constants().d_mu;

  Eigen::MatrixXd X = Eigen::MatrixXd::Identity(n, n);
  if (t == 0.0 || dmu == 0.0) return X;

  // Substeps keep 2*D_mu*tau <= 1 so partial sums never exceed e in scale
  // and the alternating tail cancels without precision loss.
  int k = std::max(1, static_cast<int>(std::ceil(2.0 * dmu * t)));
  double tau = t / k;
  double theta = 2.0 * dmu * tau;

  for (int step = 0; step < k; ++step) {
    double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
    Eigen::MatrixXd term = X, sum = X;
    double bound = scale;
    int cap_hit = 1;
    for (int j = 1; j <= 10000; ++j) {
      term = (tau / j) * (Dl * term).eval();
      sum += term;
      bound *= theta / j;  // (2 D_mu tau)^j / j! * scale dominates |Delta^j X| tau^j / j!
      if (bound < 1e-14 * scale) {
        cap_hit = 0;
        break;
      }
    }
    if (cap_hit)
      throw SolveError("series propagator failed to meet its truncation bound within 10000 terms");
    X = std::move(sum);
  }
  return X;
}

KernelMatrix heat_kernel(const WeightedGraph& g, double t, const std::string& method) {
  check_time(t);
  KernelMatrix K;
  K.t = t;
  K.method = method;

  Eigen::MatrixXd E;
  if (method == "expm") {
    Eigen::MatrixXd tD = t * Eigen::MatrixXd(laplacian_matrix(g));
    E = tD.exp();
  } else if (method == "series") {
    E = series_propagator(g, t);
  } else {
    throw ValidationError("unknown kernel method '" + method + "' (want expm or series)");
  }
  // P(t,x,y) = [e^{t Delta}]_{xy} / mu(y)
  K.P = E;
  for (int y = 0; y < g.order(); ++y) K.P.col(y) /= g.mu(y);
  return K;
}

double KernelAudit::max_property_violation() const {
  double m = semigroup;
  for (const auto& e : entries)
    m = std::max({m, e.positivity, e.symmetry, e.mass, e.entry_bound});
  return m;
}

KernelAudit kernel_audit(const WeightedGraph& g, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw ValidationError("kernel audit needs a nonempty time grid");
  for (double t : t_grid) check_time(t);

  KernelAudit audit;
  const int n = g.order();
  const double mu_min = g.constants().mu_min;

  Eigen::VectorXd mu(n);
  for (int v = 0; v < n; ++v) mu[v] = g.mu(v);

  std::vector<Eigen::MatrixXd> kernels;
  for (double t : t_grid) {
    KernelMatrix expm = heat_kernel(g, t, "expm");
    KernelMatrix series = heat_kernel(g, t, "series");
    KernelAuditEntry e;
    e.t = t;
    if (t > 0.0) e.positivity = std::max(0.0, -expm.P.minCoeff());
    e.symmetry = (expm.P - expm.P.transpose()).cwiseAbs().maxCoeff();
    e.mass = ((expm.P * mu).array() - 1.0).abs().maxCoeff();
    e.entry_bound = std::max(0.0, expm.P.maxCoeff() - 1.0 / mu_min);
    e.route_mismatch = (expm.P - series.P).cwiseAbs().maxCoeff();
    audit.max_route_mismatch = std::max(audit.max_route_mismatch, e.route_mismatch);
    audit.entries.push_back(e);
    kernels.push_back(expm.P);
  }

  // Composition in the weighted sense: sum_z P(t,x,z) P(s,z,y) mu(z).
  for (size_t i = 0; i < t_grid.size(); ++i)
    for (size_t j = i; j < t_grid.size(); ++j) {
      Eigen::MatrixXd lhs = kernels[i] * mu.asDiagonal() * kernels[j];
      Eigen::MatrixXd rhs = heat_kernel(g, t_grid[i] + t_grid[j], "expm").P;
      audit.semigroup =
          std::max(audit.semigroup, (lhs - rhs).cwiseAbs().maxCoeff());
    }

  // Central-difference check of the evolution identity; resolution-limited,
  // reported as data rather than gated at machine precision.
  Eigen::MatrixXd Dl(laplacian_matrix(g));
  for (size_t i = 0; i < t_grid.size(); ++i) {
    double t = t_grid[i];
    double h = 1e-5 * std::max(t, 1.0);
    if (t - h < 0.0) continue;
    audit.fd_step = h;
    Eigen::MatrixXd dP =
        (heat_kernel(g, t + h, "expm").P - heat_kernel(g, t - h, "expm").P) / (2.0 * h);
    audit.heat_equation =
        std::max(audit.heat_equation, (dP - Dl * kernels[i]).cwiseAbs().maxCoeff());
  }
  return audit;
}

SemigroupEvaluator::SemigroupEvaluator(const WeightedGraph& g) {
  const int n = g.order();
  Eigen::VectorXd mu(n);
  for (int v = 0; v < n; ++v) mu[v] = g.mu(v);
  mu_sqrt_ = mu.cwiseSqrt();
  mu_isqrt_ = mu_sqrt_.cwiseInverse();

  // Symmetrized nonnegative operator: B = D^{-1/2} (D_m - W) D^{-1/2}.
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    B(x, x) = g.weight_sum(x) / mu[x];
    for (const auto& nb : g.neighbors(x)) B(x, nb.v) -= nb.w * mu_isqrt_[x] * mu_isqrt_[nb.v];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  evals_ = es.eigenvalues().cwiseMax(0.0);
  Q_ = es.eigenvectors();
}

Eigen::VectorXd SemigroupEvaluator::apply(double t, const Eigen::VectorXd& v) const {
  check_time(t);
  Eigen::VectorXd y = Q_.transpose() * (mu_sqrt_.cwiseProduct(v));
  y = (-t * evals_.array()).exp().matrix().cwiseProduct(y);
  return mu_isqrt_.cwiseProduct(Q_ * y);
}

Eigen::MatrixXd SemigroupEvaluator::propagator(double t) const {
  check_time(t);
  Eigen::MatrixXd mid = (-t * evals_.array()).exp().matrix().asDiagonal();
  return mu_isqrt_.asDiagonal() * Q_ * mid * Q_.transpose() * mu_sqrt_.asDiagonal();
}

Eigen::MatrixXd SemigroupEvaluator::kernel(double t) const {
  Eigen::MatrixXd P = propagator(t);
  for (int y = 0; y < P.cols(); ++y) P.col(y) *= mu_isqrt_[y] * mu_isqrt_[y];
  return P;
}

SmoothedInfimum smoothed_infimum(const WeightedGraph& g, double tau, const VertexFunction& psi,
                                 std::vector<int> probe) {
  check_time(tau);
  if (probe.empty()) {
    int margin = g.truncation()
                     ? static_cast<int>(std::ceil(2.0 + 2.0 * std::sqrt(g.constants().d_mu * tau)))
                     : 0;
    probe = g.truncation_safe_vertices(margin);
    if (probe.empty())
      throw TruncationError("no probe vertices stay clear of the truncation edge at tau = " +
                            std::to_string(tau) + "; enlarge the radius");
  }
  SemigroupEvaluator ev(g);
  Eigen::VectorXd smoothed = ev.apply(tau, psi.to_vector());

  SmoothedInfimum out;
  out.tau = tau;
  out.value = std::numeric_limits<double>::infinity();
  for (int v : probe)
    if (smoothed[v] < out.value) {
      out.value = smoothed[v];
      out.argmin = v;
    }
  out.probe = std::move(probe);
  return out;
}

}  // namespace graphblow
