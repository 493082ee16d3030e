// Microbenchmarks for the hot paths: operator application, the two kernel
// routes, ground states at both solver scales, integration, and the
// automatic pairing bound.

#include <benchmark/benchmark.h>
#include <graphblow/graphblow.hpp>

#include <random>

using namespace graphblow;

namespace {

WeightedGraph lattice2(int radius) {
  return GraphSpec::parse("lattice:2:" + std::to_string(radius)).build();
}

void BM_laplacian_matrix_apply(benchmark::State& state) {
  WeightedGraph g = lattice2(int(state.range(0)));
  Eigen::SparseMatrix<double> L = laplacian_matrix(g);
  Eigen::VectorXd v = Eigen::VectorXd::Random(g.order()).cwiseAbs();
  for (auto _ : state) {
    Eigen::VectorXd w = L * v;
    benchmark::DoNotOptimize(w.data());
  }
  state.SetItemsProcessed(state.iterations() * g.order());
}
BENCHMARK(BM_laplacian_matrix_apply)->Arg(10)->Arg(20)->Arg(40);

void BM_heat_kernel_expm(benchmark::State& state) {
  WeightedGraph g = lattice2(int(state.range(0)));
  for (auto _ : state) {
    KernelMatrix k = heat_kernel(g, 1.0, "expm");
    benchmark::DoNotOptimize(k.P.data());
  }
}
BENCHMARK(BM_heat_kernel_expm)->Arg(4)->Arg(8);

void BM_heat_kernel_series(benchmark::State& state) {
  WeightedGraph g = lattice2(int(state.range(0)));
  for (auto _ : state) {
    KernelMatrix k = heat_kernel(g, 1.0, "series");
    benchmark::DoNotOptimize(k.P.data());
  }
}
BENCHMARK(BM_heat_kernel_series)->Arg(4)->Arg(8);

void BM_semigroup_factorize(benchmark::State& state) {
  WeightedGraph g = lattice2(int(state.range(0)));
  for (auto _ : state) {
    SemigroupEvaluator ev(g);
    benchmark::DoNotOptimize(&ev);
  }
}
BENCHMARK(BM_semigroup_factorize)->Arg(4)->Arg(8);

void BM_ground_state_dense(benchmark::State& state) {
  int n = int(state.range(0));
  WeightedGraph g = GraphSpec::parse("path:" + std::to_string(n + 2)).build();
  std::vector<int> interior;
  for (int i = 1; i <= n; ++i) interior.push_back(g.index_of(std::to_string(i)));
  for (auto _ : state) {
    GroundState gs = ground_state_on_interior(g, interior);
    benchmark::DoNotOptimize(gs.lambda1);
  }
}
BENCHMARK(BM_ground_state_dense)->Arg(16)->Arg(60);

void BM_ground_state_inverse_power(benchmark::State& state) {
  int n = int(state.range(0));  // > 64 forces the iterative route
  WeightedGraph g = GraphSpec::parse("path:" + std::to_string(n + 2)).build();
  std::vector<int> interior;
  for (int i = 1; i <= n; ++i) interior.push_back(g.index_of(std::to_string(i)));
  for (auto _ : state) {
    GroundState gs = ground_state_on_interior(g, interior);
    benchmark::DoNotOptimize(gs.lambda1);
  }
}
BENCHMARK(BM_ground_state_inverse_power)->Arg(100)->Arg(400);

void BM_integrate_blowup(benchmark::State& state) {
  WeightedGraph g = GraphSpec::parse("cycle:" + std::to_string(state.range(0))).build();
  Eigen::VectorXd u0 = Eigen::VectorXd::Constant(g.order(), 2.0);
  SolverOptions o;
  o.U_big = 1e8;
  o.rtol = 1e-8;
  o.atol = 1e-11;
  for (auto _ : state) {
    EvolutionResult r = integrate(g, u0, 2.0, o);
    benchmark::DoNotOptimize(r.t_end);
  }
}
BENCHMARK(BM_integrate_blowup)->Arg(16)->Arg(64)->Arg(256);

void BM_kaplan_auto(benchmark::State& state) {
  WeightedGraph g = lattice2(int(state.range(0)));
  VertexFunction psi = VertexFunction::constant(g, 1.0);
  for (auto _ : state) {
    auto kb = kaplan_bound_auto(g, 2.0, psi, 2.0);
    benchmark::DoNotOptimize(kb->eta0);
  }
}
BENCHMARK(BM_kaplan_auto)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
