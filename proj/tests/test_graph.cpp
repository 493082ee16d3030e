#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <graphblow/graphblow.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace graphblow;

TEST_CASE("builder rejects malformed input, naming the offender") {
  GraphBuilder b;
  b.add_vertex("a", 1.0);
  CHECK_THROWS_WITH_AS(b.add_vertex("a", 2.0), doctest::Contains("a"), ValidationError);
  CHECK_THROWS_AS(b.add_vertex("b", 0.0), ValidationError);
  CHECK_THROWS_AS(b.add_vertex("c", -1.0), ValidationError);
  b.add_vertex("b", 1.0);

  // edge problems surface at build(), once endpoints are final
  auto bad_edge = [](auto&& stage) {
    GraphBuilder bb;
    bb.add_vertex("a", 1.0);
    bb.add_vertex("b", 1.0);
    stage(bb);
    return bb.build();
  };
  CHECK_THROWS_AS(bad_edge([](GraphBuilder& bb) { bb.add_edge("a", "a", 1.0); }),
                  ValidationError);
  CHECK_THROWS_AS(bad_edge([](GraphBuilder& bb) { bb.add_edge("a", "zz", 1.0); }),
                  ValidationError);
  CHECK_THROWS_AS(bad_edge([](GraphBuilder& bb) { bb.add_edge("a", "b", 0.0); }),
                  ValidationError);
  CHECK_THROWS_AS(bad_edge([](GraphBuilder& bb) {
                    bb.add_edge("a", "b", 1.5);
                    bb.add_edge("b", "a", 2.0);  // duplicate either way
                  }),
                  ValidationError);
}

TEST_CASE("builder rejects disconnected graphs") {
  GraphBuilder b;
  b.add_vertex("a", 1.0);
  b.add_vertex("b", 1.0);
  b.add_vertex("c", 1.0);
  b.add_edge("a", "b", 1.0);
  CHECK_THROWS_WITH_AS(b.build(), doctest::Contains("connected"), ValidationError);
}

TEST_CASE("two-vertex constants") {
  GraphBuilder b;
  b.add_vertex("x", 2.0);
  b.add_vertex("y", 0.5);
  b.add_edge("x", "y", 3.0);
  WeightedGraph g = b.build();
  auto c = g.constants();
  CHECK(g.weight_sum(g.index_of("x")) == doctest::Approx(3.0));
  CHECK(c.d_mu == doctest::Approx(3.0 / 0.5));  // sup m/mu at y
  REQUIRE(c.d_omega.has_value());
  CHECK(*c.d_omega == doctest::Approx(2.0 / 3.0));  // mu_max / omega_min
  CHECK(c.mu_min == doctest::Approx(0.5));
}

TEST_CASE("single vertex has no edge constant") {
  GraphBuilder b;
  b.add_vertex("o", 1.0);
  WeightedGraph g = b.build();
  CHECK(g.constants().d_mu == 0.0);
  CHECK_FALSE(g.constants().d_omega.has_value());
}

TEST_CASE("integer lattice balls: counts, measure, constants") {
  WeightedGraph g2 = GraphSpec::parse("lattice:2:6").build();
  // |B(0,r)| = 2r^2 + 2r + 1 in two dimensions
  for (int r = 0; r <= 4; ++r)
    CHECK(int(g2.ball(g2.index_of("0,0"), r).size()) == 2 * r * r + 2 * r + 1);
  CHECK(g2.mu(g2.index_of("0,0")) == doctest::Approx(2.0));
  CHECK(g2.constants().d_mu == doctest::Approx(2.0));  // interior degree 4, mu = 2
  REQUIRE(g2.truncation().has_value());
  CHECK(g2.truncation()->radius == 6);

  WeightedGraph g1 = GraphSpec::parse("lattice:1:5").build();
  CHECK(g1.order() == 11);
  CHECK(g1.mu(g1.index_of("0")) == doctest::Approx(1.0));
  CHECK(g1.constants().d_mu == doctest::Approx(2.0));
}

TEST_CASE("regular tree balls: 1, q+1 children of the root, then q each") {
  WeightedGraph t2 = GraphSpec::parse("tree:2:5").build();
  int root = t2.index_of("0");
  CHECK(int(t2.ball(root, 0).size()) == 1);
  CHECK(int(t2.ball(root, 1).size()) == 4);    // 1 + 3
  CHECK(int(t2.ball(root, 2).size()) == 10);   // 1 + 3 + 6
  CHECK(int(t2.ball(root, 3).size()) == 22);   // + 12
  CHECK(t2.mu(root) == doctest::Approx(3.0));
  CHECK(t2.constants().d_mu == doctest::Approx(1.0));
}

TEST_CASE("distances and eccentricity on a cycle") {
  WeightedGraph g = GraphSpec::parse("cycle:8").build();
  auto d = g.distances_from(g.index_of("0"));
  CHECK(d[g.index_of("4")] == 4);
  CHECK(d[g.index_of("7")] == 1);
  CHECK(g.eccentricity(g.index_of("0")) == 4);
}

TEST_CASE("volume growth fit reproduces the two-dimensional lattice numbers") {
  WeightedGraph g = GraphSpec::parse("lattice:2:9").build();
  auto fit = g.volume_growth_fit(g.index_of("0,0"), 8);
  // frozen ordinary-least-squares values for V(r) = 2 (2r^2 + 2r + 1), r = 2..8
  CHECK(fit.m_hat == doctest::Approx(1.7449606660977024).epsilon(1e-12));
  CHECK(fit.c0_hat == doctest::Approx(7.4980053789366465).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(0.99921620379291531).epsilon(1e-12));
  CHECK(fit.polynomial_flag);
  CHECK(fit.table.size() == 8);  // rows r = 1..8; the regression uses r >= 2
  CHECK(fit.table.front().first == 1);
  CHECK(fit.table.front().second == doctest::Approx(10.0));  // mu = 2 on 5 vertices
}

TEST_CASE("volume growth fit flags the regular tree as non-polynomial") {
  WeightedGraph g = GraphSpec::parse("tree:2:9").build();
  auto fit = g.volume_growth_fit(g.index_of("0"), 8);
  // frozen values for V(r) = 3 (3 * 2^r - 2), r = 2..8
  CHECK(fit.m_hat == doctest::Approx(3.1070361349345901).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(0.96901978943865863).epsilon(1e-12));
  CHECK_FALSE(fit.polynomial_flag);
}

TEST_CASE("volume growth fit refuses radii beyond the trusted window") {
  WeightedGraph g = GraphSpec::parse("lattice:2:6").build();
  CHECK_THROWS_AS(g.volume_growth_fit(g.index_of("0,0"), 7), TruncationError);
  // off-center: the usable window shrinks by the offset
  CHECK_THROWS_AS(g.volume_growth_fit(g.index_of("2,0"), 5), TruncationError);
  CHECK_NOTHROW(g.volume_growth_fit(g.index_of("2,0"), 4));
}

TEST_CASE("truncation-safe vertices honour the margin") {
  WeightedGraph g = GraphSpec::parse("lattice:1:5").build();
  auto safe = g.truncation_safe_vertices(2);
  CHECK(int(safe.size()) == 7);  // |x| <= 3
  for (int v : safe) CHECK(std::abs(std::stoi(g.id_of(v))) <= 3);
}

TEST_CASE("graph descriptors parse and reject precisely") {
  CHECK(GraphSpec::parse("lattice:2:4").is_generator());
  CHECK(GraphSpec::parse("tree:3:4").is_generator());
  CHECK_FALSE(GraphSpec::parse("cycle:12").is_generator());
  CHECK_THROWS_AS(GraphSpec::parse("lattice:0:4"), ValidationError);
  CHECK_THROWS_AS(GraphSpec::parse("lattice:2"), ValidationError);
  CHECK_THROWS_AS(GraphSpec::parse("cycle:2"), ValidationError);
  CHECK_THROWS_AS(GraphSpec::parse("path:0"), ValidationError);
  CHECK_THROWS_AS(GraphSpec::parse("blob:3"), ValidationError);
  CHECK_THROWS_AS(GraphSpec::parse("path:x"), ValidationError);
}

TEST_CASE("json round trip preserves the graph exactly") {
  WeightedGraph g = GraphSpec::parse("lattice:2:3").build();
  std::string path = "roundtrip_graph.json";
  save_graph_json(g, path);
  WeightedGraph h = load_graph_json(path);
  REQUIRE(h.order() == g.order());
  REQUIRE(h.edge_count() == g.edge_count());
  for (int v = 0; v < g.order(); ++v) {
    CHECK(h.index_of(g.id_of(v)) >= 0);
    CHECK(h.mu(h.index_of(g.id_of(v))) == doctest::Approx(g.mu(v)).epsilon(1e-15));
  }
  for (const auto& e : g.edges()) {
    auto w = h.edge_weight(h.index_of(g.id_of(e.u)), h.index_of(g.id_of(e.v)));
    REQUIRE(w.has_value());
    CHECK(*w == doctest::Approx(e.w).epsilon(1e-15));
  }
  // byte-determinism of the writer
  save_graph_json(h, "roundtrip_graph2.json");
  std::ifstream f1(path), f2("roundtrip_graph2.json");
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
  std::remove(path.c_str());
  std::remove("roundtrip_graph2.json");
}

TEST_CASE("json loader validates shape") {
  std::ofstream("bad_graph.json") << "{\"vertices\": [{\"id\": \"a\"}], \"edges\": []}";
  CHECK_THROWS_AS(load_graph_json("bad_graph.json"), ValidationError);
  std::remove("bad_graph.json");
  CHECK_THROWS_AS(load_graph_json("no_such_file.json"), ValidationError);
}

TEST_CASE("data descriptors materialize") {
  WeightedGraph g = GraphSpec::parse("lattice:1:4").build();

  VertexFunction c = PsiSpec::parse("const:2.5").materialize(g);
  for (int v = 0; v < g.order(); ++v) CHECK(c.at(v) == doctest::Approx(2.5));

  VertexFunction h = PsiSpec::parse("halfline").materialize(g);
  CHECK(h.at(g.index_of("0")) == 1.0);
  CHECK(h.at(g.index_of("3")) == 1.0);
  CHECK(h.at(g.index_of("-1")) == 0.0);

  VertexFunction ind = PsiSpec::parse("indicator:0;2").materialize(g);
  CHECK(ind.at(g.index_of("0")) == 1.0);
  CHECK(ind.at(g.index_of("2")) == 1.0);
  CHECK(ind.at(g.index_of("1")) == 0.0);

  VertexFunction sh = PsiSpec::parse("shell:2:1:0.25").materialize(g);
  CHECK(sh.at(g.index_of("0")) == 1.0);   // inside radius 2
  CHECK(sh.at(g.index_of("2")) == 1.0);
  CHECK(sh.at(g.index_of("3")) == 0.25);  // outside

  CHECK_THROWS_AS(PsiSpec::parse("const:-1").materialize(g), ValidationError);
  CHECK_THROWS_AS(PsiSpec::parse("nonsense:1"), ValidationError);
}

TEST_CASE("vertex function integral uses the measure") {
  WeightedGraph g = GraphSpec::parse("lattice:2:2").build();  // mu = 2 everywhere
  VertexFunction one = VertexFunction::constant(g, 1.0);
  CHECK(integral(g, one) == doctest::Approx(2.0 * g.order()));
}
