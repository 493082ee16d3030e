#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <graphblow/graphblow.hpp>

#include <cmath>
#include <fstream>
#include <random>

#include "helpers.hpp"

using namespace graphblow;

TEST_CASE("reaction-only lower bound formula and validation") {
  CHECK(lower_bound_basic(2.0, 1.0, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(lower_bound_basic(1.0, 2.0, 3.0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK_THROWS_AS(lower_bound_basic(0.0, 1.0, 2.0), ValidationError);
  CHECK_THROWS_AS(lower_bound_basic(1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("pairing bound at the line singleton reproduces log(2)/2") {
  WeightedGraph g = GraphSpec::parse("lattice:1:6").build();
  auto om = DomainSubset::from_interior(g, {g.index_of("0")});
  VertexFunction psi = VertexFunction::constant(g, 1.0);
  KaplanBound kb = kaplan_bound(g, om, 4.0, psi, 2.0);
  CHECK(kb.lambda1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(kb.eta0 == doctest::Approx(4.0).epsilon(1e-12));
  REQUIRE(kb.threshold_met);
  CHECK(*kb.T_up == doctest::Approx(0.34657359027997264).epsilon(1e-12));
}

TEST_CASE("pairing bound declines honestly below the threshold") {
  WeightedGraph g = GraphSpec::parse("lattice:1:6").build();
  auto om = DomainSubset::from_interior(g, {g.index_of("0")});
  VertexFunction psi = VertexFunction::constant(g, 1.0);
  KaplanBound kb = kaplan_bound(g, om, 1.0, psi, 2.0);  // eta0 = 1 < lambda1 = 2
  CHECK_FALSE(kb.threshold_met);
  CHECK_FALSE(kb.T_up.has_value());
}

TEST_CASE("automatic pairing bound is at least as sharp as the singleton") {
  WeightedGraph g = GraphSpec::parse("lattice:1:8").build();
  VertexFunction psi = VertexFunction::constant(g, 1.0);
  auto om = DomainSubset::from_interior(g, {g.index_of("0")});
  KaplanBound single = kaplan_bound(g, om, 4.0, psi, 2.0);
  auto best = kaplan_bound_auto(g, 4.0, psi, 2.0);
  REQUIRE(best.has_value());
  REQUIRE(best->T_up.has_value());
  CHECK(*best->T_up <= *single.T_up + 1e-12);
}

TEST_CASE("automatic pairing bound returns nothing when no candidate certifies") {
  WeightedGraph g = GraphSpec::parse("lattice:1:8").build();
  VertexFunction psi = VertexFunction::constant(g, 1.0);
  CHECK_FALSE(kaplan_bound_auto(g, 0.05, psi, 2.0).has_value());
}

TEST_CASE("kernel-root bound is exact for constant data") {
  // F(t) = lambda for all t, so the root is lambda^{1-p}/(p-1)
  for (double lambda : {0.5, 2.0}) {
    for (double p : {2.0, 3.0}) {
      WeightedGraph g = GraphSpec::parse("cycle:9").build();
      VertexFunction psi = VertexFunction::constant(g, 1.0);
      HeatKernelBound hb = heat_kernel_upper_bound(g, 0, lambda, psi, p, 50.0);
      REQUIRE(hb.T_up.has_value());
      CHECK(*hb.T_up ==
            doctest::Approx(std::pow(lambda, 1.0 - p) / (p - 1.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("kernel-root bound reports the sign when no root exists in range") {
  WeightedGraph g = GraphSpec::parse("cycle:9").build();
  VertexFunction psi = VertexFunction::constant(g, 1.0);
  HeatKernelBound hb = heat_kernel_upper_bound(g, 0, 0.1, psi, 2.0, 5.0);  // root at 10
  CHECK_FALSE(hb.T_up.has_value());
  CHECK(hb.g_at_t_max < 0.0);
}

TEST_CASE("kernel-root bound on the line stabilizes across margins") {
  HeatKernelBound hb = heat_kernel_upper_bound(GraphSpec::parse("lattice:1:0"), "0", 1.0,
                                               PsiSpec::parse("halfline"), 2.0, 3.0);
  REQUIRE(hb.T_up.has_value());
  CHECK(hb.agreement <= 1e-9);
  CHECK(hb.truncation_radius > 0);
  // data is below the constant 1, so the root cannot undercut T = 1
  CHECK(*hb.T_up >= 1.0 - 1e-9);
}

TEST_CASE("density profile on the half-line data equals one in the tail") {
  WeightedGraph g = GraphSpec::parse("lattice:1:24").build();
  VertexFunction psi = PsiSpec::parse("halfline").materialize(g);
  DensityProfile prof = density_profile(g, psi, 1.0, {2, 3, 4, 6, 8, 10});
  CHECK(prof.d_bar == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(prof.tail_monotone);
  REQUIRE(prof.rows.size() == 6);
  for (auto& [r, d] : prof.rows) CHECK(d == doctest::Approx(1.0).epsilon(1e-15));
  auto bound = density_bound(prof, 2.0);
  REQUIRE(bound.has_value());
  CHECK(*bound == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("density profile rejects non-unit measures and empty levels") {
  WeightedGraph g2 = GraphSpec::parse("lattice:2:4").build();  // mu = 2
  VertexFunction psi2 = VertexFunction::constant(g2, 1.0);
  CHECK_THROWS_WITH_AS(density_profile(g2, psi2, 1.0, {1, 2}),
                       doctest::Contains("unit-measure"), ValidationError);

  WeightedGraph g = GraphSpec::parse("lattice:1:12").build();
  VertexFunction psi = VertexFunction::constant(g, 0.5);
  DensityProfile empty = density_profile(g, psi, 1.0, {1, 2, 3});  // level set empty
  CHECK(empty.d_bar == 0.0);
  CHECK_FALSE(density_bound(empty, 2.0).has_value());
}

TEST_CASE("half-line density at a lower level sees the zero side") {
  WeightedGraph g = GraphSpec::parse("lattice:1:30").build();
  VertexFunction psi = PsiSpec::parse("halfline").materialize(g);
  DensityProfile prof = density_profile(g, psi, 0.5, {2, 4, 8});
  // the best ball still sits fully inside the half-line
  CHECK(prof.d_bar == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("ghost threshold on the two-path") {
  WeightedGraph g = GraphSpec::parse("path:2").build();
  VertexFunction psi = VertexFunction::constant(g, 1.0);
  FiniteThreshold ft = finite_graph_threshold(g, 0, psi, 2.0);
  CHECK(ft.lambda1_ghost == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(ft.pairing == doctest::Approx(1.0).epsilon(1e-12));  // normalized state vs psi = 1
  CHECK(ft.Lambda1 == doctest::Approx(ft.lambda1_ghost).epsilon(1e-12));
}

TEST_CASE("sandwich for positive data and its equality case") {
  WeightedGraph g = GraphSpec::parse("cycle:6").build();
  VertexFunction flat = VertexFunction::constant(g, 2.0);
  SandwichBound s = sandwich_finite(g, flat, 3.0);
  CHECK(s.c_low == doctest::Approx(s.c_high).epsilon(1e-15));  // constant data: equality
  CHECK(s.t1(2.0) == doctest::Approx(s.t2(2.0)).epsilon(1e-15));
  CHECK(s.t1(2.0) == doctest::Approx(std::pow(4.0, -2.0) / 2.0).epsilon(1e-13));

  VertexFunction mixed = VertexFunction::constant(g, 1.0);
  mixed.set(0, 2.0);
  SandwichBound m = sandwich_finite(g, mixed, 2.0);
  CHECK(m.c_low == doctest::Approx(0.5));
  CHECK(m.c_high == doctest::Approx(1.0));
  CHECK(m.t1(3.0) < m.t2(3.0));

  VertexFunction zero = VertexFunction::constant(g, 1.0);
  zero.set(1, 0.0);
  CHECK_THROWS_AS(sandwich_finite(g, zero, 2.0), ValidationError);
}

TEST_CASE("scaled sweep on constant data sits on the limit") {
  SweepOptions so;
  so.tol = 1e-7;
  SweepTable t = asymptotic_sweep(GraphSpec::parse("cycle:8"), PsiSpec::parse("const:1"), 2.0,
                                  {0.5, 1.0, 2.0, 4.0}, so);
  REQUIRE(t.rows.size() == 4);
  REQUIRE(t.limit_value.has_value());
  CHECK(*t.limit_value == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& row : t.rows) {
    REQUIRE(row.ok);
    CHECK(row.scaled == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(row.lower_scaled == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(row.upper_scaled.has_value());
    CHECK(*row.upper_scaled == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row.bracket.t_lo <= row.T_est);
    CHECK(row.bracket.t_hi >= row.T_est);
  }
  CHECK(t.monotone_toward_limit);
  CHECK_FALSE(t.partial);
}

TEST_CASE("sweep marks rows that exhaust their budget instead of faking them") {
  SweepOptions so;
  so.t_max = 0.05;  // far below every lifespan in the grid
  SweepTable t = asymptotic_sweep(GraphSpec::parse("cycle:8"), PsiSpec::parse("const:1"), 2.0,
                                  {0.5, 1.0}, so);
  CHECK(t.partial);
  for (const auto& row : t.rows) {
    CHECK_FALSE(row.ok);
    CHECK(row.note.find("no blow-up") != std::string::npos);
  }
}

TEST_CASE("small-direction sweep needs the assumed infimum for a limit") {
  SweepOptions so;
  so.direction = "small";
  SweepTable no_inf = asymptotic_sweep(GraphSpec::parse("cycle:6"), PsiSpec::parse("const:1"),
                                       2.0, {1.0, 2.0}, so);
  CHECK_FALSE(no_inf.limit_value.has_value());
  so.psi_inf = 1.0;
  SweepTable with_inf = asymptotic_sweep(GraphSpec::parse("cycle:6"), PsiSpec::parse("const:1"),
                                         2.0, {1.0, 2.0}, so);
  REQUIRE(with_inf.limit_value.has_value());
  CHECK(*with_inf.limit_value == doctest::Approx(1.0));
  CHECK_THROWS_AS(asymptotic_sweep(GraphSpec::parse("cycle:6"), PsiSpec::parse("const:1"), 2.0,
                                   {1.0}, [] {
                                     SweepOptions bad;
                                     bad.direction = "sideways";
                                     return bad;
                                   }()),
                  ValidationError);
}

TEST_CASE("bounds report aggregates consistent entries") {
  WeightedGraph g = GraphSpec::parse("cycle:8").build();
  VertexFunction psi = VertexFunction::constant(g, 1.0);
  BoundsReport rep = assemble_bounds_report(g, 2.0, psi, 2.0);
  CHECK(rep.lower_basic == doctest::Approx(0.5));
  REQUIRE(rep.kernel_root.has_value());
  REQUIRE(rep.kernel_root->T_up.has_value());
  CHECK(*rep.kernel_root->T_up == doctest::Approx(0.5).epsilon(1e-9));
  REQUIRE(rep.sandwich.has_value());
  CHECK(rep.sandwich->t2(2.0) == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(rep.finite_threshold.has_value());
  CHECK(rep.finite_threshold->Lambda1 > 0.0);
  bool has_lower = false, has_upper = false;
  for (const auto& e : rep.entries) {
    if (e.kind == "lower") has_lower = true;
    if (e.kind == "upper") {
      has_upper = true;
      CHECK(e.value >= rep.lower_basic - 1e-9);  // no upper bound undercuts the lower one
    }
  }
  CHECK(has_lower);
  CHECK(has_upper);
}
