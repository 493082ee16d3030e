#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <graphblow/graphblow.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace graphblow;

TEST_CASE("interval interiors match the closed form 2(1 - cos(pi/(n+1)))") {
  for (int n = 1; n <= 30; ++n) {
    WeightedGraph g = GraphSpec::parse("path:" + std::to_string(n + 2)).build();
    std::vector<int> interior;
    for (int i = 1; i <= n; ++i) interior.push_back(g.index_of(std::to_string(i)));
    GroundState gs = ground_state_on_interior(g, interior);
    double want = 2.0 * (1.0 - std::cos(M_PI / (n + 1)));
    CHECK(gs.lambda1 == doctest::Approx(want).epsilon(1e-10));
    CHECK(gs.residual <= 1e-10 * std::max(1.0, gs.lambda1));
    for (int v : interior) CHECK(gs.phi.at(v) > 0.0);
  }
}

TEST_CASE("four-path interior {b,c}: eigenvalue 1, flat normalized state") {
  GraphBuilder b;
  for (const char* id : {"a", "b", "c", "d"}) b.add_vertex(id, 1.0);
  b.add_edge("a", "b", 1.0);
  b.add_edge("b", "c", 1.0);
  b.add_edge("c", "d", 1.0);
  WeightedGraph g = b.build();
  GroundState gs = ground_state_on_interior(g, {g.index_of("b"), g.index_of("c")});
  CHECK(gs.lambda1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gs.phi.at(g.index_of("b")) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(gs.phi.at(g.index_of("c")) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("normalization, positivity and residual hold on random instances") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    WeightedGraph g = testutil::random_connected_graph(rng, 18);
    // interior: a ball around a random center, clipped to a proper subset
    int c = int(rng() % uint64_t(g.order()));
    auto ball = g.ball(c, 1 + int(rng() % 2));
    if (int(ball.size()) >= g.order()) continue;
    GroundState gs;
    try {
      gs = ground_state_on_interior(g, ball);
    } catch (const ValidationError&) {
      continue;  // interior not connected through interior edges
    }
    double mass = 0.0;
    for (int v : ball) {
      CHECK(gs.phi.at(v) > 0.0);
      mass += gs.phi.at(v) * g.mu(v);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(gs.lambda1 > 0.0);
    CHECK(gs.residual <= 1e-10 * std::max(1.0, gs.lambda1));
  }
}

TEST_CASE("iterative path agrees with a dense solve above the size cutoff") {
  // interval with 90 interior vertices: forced onto the inverse-power path
  const int n = 90;
  WeightedGraph g = GraphSpec::parse("path:" + std::to_string(n + 2)).build();
  std::vector<int> interior;
  for (int i = 1; i <= n; ++i) interior.push_back(g.index_of(std::to_string(i)));
  GroundState gs = ground_state_on_interior(g, interior);
  CHECK(gs.method == "inverse-power");
  double want = 2.0 * (1.0 - std::cos(M_PI / (n + 1)));
  CHECK(gs.lambda1 == doctest::Approx(want).epsilon(1e-10));

  // independent dense cross-check of the same restriction
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    L(i, i) = 2.0;
    if (i + 1 < n) L(i, i + 1) = L(i + 1, i) = -1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  CHECK(gs.lambda1 == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-10));
}

TEST_CASE("whole-graph interior is rejected toward the ghost formulation") {
  WeightedGraph g = GraphSpec::parse("cycle:6").build();
  std::vector<int> all(g.order());
  for (int i = 0; i < g.order(); ++i) all[i] = i;
  CHECK_THROWS_WITH_AS(ground_state_on_interior(g, all), doctest::Contains("ghost"),
                       ValidationError);
}

TEST_CASE("interior disconnected through interior edges is rejected") {
  WeightedGraph g = GraphSpec::parse("cycle:8").build();
  // two opposite vertices: connected in the host only through the boundary
  CHECK_THROWS_AS(ground_state_on_interior(g, {g.index_of("0"), g.index_of("4")}),
                  ValidationError);
}

TEST_CASE("complete-graph interiors have eigenvalue (order - size)") {
  WeightedGraph g = GraphSpec::parse("complete:5").build();
  for (int k = 1; k <= 4; ++k) {
    std::vector<int> interior;
    for (int i = 0; i < k; ++i) interior.push_back(i);
    GroundState gs = ground_state_on_interior(g, interior);
    CHECK(gs.lambda1 == doctest::Approx(5.0 - k).epsilon(1e-12));
  }
}

TEST_CASE("ghost eigenvalue on the two-path is (3 - sqrt 5)/2") {
  WeightedGraph g = GraphSpec::parse("path:2").build();
  GroundState gs = ghost_ground_state(g, g.index_of("0"), 1.0);
  CHECK(gs.lambda1 == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(gs.phi.at(0) > 0.0);
  CHECK(gs.phi.at(1) > 0.0);
  double mass = gs.phi.at(0) * g.mu(0) + gs.phi.at(1) * g.mu(1);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ghost eigenvalue grows with the attachment weight and stays positive") {
  WeightedGraph g = GraphSpec::parse("cycle:7").build();
  double prev = 0.0;
  for (double w : {0.25, 1.0, 4.0}) {
    GroundState gs = ghost_ground_state(g, 0, w);
    CHECK(gs.lambda1 > prev);
    prev = gs.lambda1;
    for (int v = 0; v < g.order(); ++v) CHECK(gs.phi.at(v) > 0.0);
  }
}

TEST_CASE("witness search on the integer line pins the ten-vertex interval") {
  WeightedGraph g = GraphSpec::parse("lattice:1:22").build();
  EcWitness w = ec_witness_search(g, g.index_of("0"), 0.1, 5.0, 12);
  REQUIRE(w.found);
  CHECK(w.omega->interior().size() == 10);
  CHECK(w.state->lambda1 == doctest::Approx(0.081014052771005263).epsilon(1e-10));
  CHECK(w.state->lambda1 < 0.9 * 0.1);
  // every vertex of the witness is farther than five hops from the center
  auto dist = g.distances_from(g.index_of("0"));
  for (int v : w.omega->all()) CHECK(dist[v] > 5);
}

TEST_CASE("witness search fails honestly on the complete graph") {
  WeightedGraph g = GraphSpec::parse("complete:5").build();
  EcWitness w = ec_witness_search(g, 0, 0.01, 1.0, 8);
  CHECK_FALSE(w.found);
  CHECK(w.note.find("distance") != std::string::npos);
}

TEST_CASE("witness search respects the truncation margin") {
  // radius too small to hold a margin-safe low-eigenvalue set beyond delta
  WeightedGraph g = GraphSpec::parse("lattice:1:8").build();
  EcWitness w = ec_witness_search(g, g.index_of("0"), 0.1, 5.0, 12);
  CHECK_FALSE(w.found);
  CHECK(w.margin_rejections > 0);
}
