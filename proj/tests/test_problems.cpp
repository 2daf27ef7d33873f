#include <algorithm>
#include <set>

#include "doctest.h"
#include "scenred/dominance.hpp"
#include "scenred/problems.hpp"
#include "scenred/rng.hpp"
#include "support.hpp"

using namespace scenred;

TEST_SUITE("problems") {
  TEST_CASE("selection description") {
    const auto x = selection_lp_description({3, 2});
    CHECK(x.dim() == 3);
    CHECK(x.aux_dim() == 0);
    CHECK(x.integral());
    const auto sols = enumerate_solutions(x);
    const std::set<Vector> got(sols.begin(), sols.end());
    CHECK(got == std::set<Vector>{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    for (const auto& s : sols) CHECK(x.contains(s));
    CHECK(x.contains(Vector{2.0 / 3, 2.0 / 3, 2.0 / 3}));

    const auto one = enumerate_solutions(selection_lp_description({1, 1}));
    CHECK(one == std::vector<Vector>{{1}});
    CHECK_THROWS_AS(selection_lp_description({3, 0}), std::invalid_argument);
    CHECK_THROWS_AS(selection_lp_description({3, 4}), std::invalid_argument);
  }

  TEST_CASE("layered graph shape") {
    const auto p22 = layered_graph({2, 2});
    CHECK(p22.graph.node_count == 6);
    CHECK(p22.graph.arcs.size() == 8);
    CHECK(p22.description.integral());
    CHECK(layered_graph({3, 3}).description.dim() == 24);
    const auto p11 = layered_graph({1, 1});
    CHECK(p11.graph.arcs.size() == 2);
    CHECK(enumerate_paths(p11.graph).size() == 1);
    CHECK_THROWS_AS(layered_graph({0, 2}), std::invalid_argument);
  }

  TEST_CASE("arc order: source arcs, layer blocks, sink arcs") {
    const auto g = layered_graph({3, 2}).graph;
    REQUIRE(g.arcs.size() == 12);
    CHECK(g.arcs[g.source_arc(1)] == std::pair<std::size_t, std::size_t>{0, g.node(0, 1)});
    CHECK(g.arcs[2] == std::pair<std::size_t, std::size_t>{g.node(0, 0), g.node(1, 0)});
    CHECK(g.arcs[3] == std::pair<std::size_t, std::size_t>{g.node(0, 0), g.node(1, 1)});
    CHECK(g.arcs[g.sink_arc(0)] == std::pair<std::size_t, std::size_t>{g.node(2, 0), g.sink()});
  }

  TEST_CASE("every path uses L+1 arcs and is a flow") {
    for (std::size_t l = 1; l <= 4; ++l) {
      for (std::size_t w = 1; w <= 3; ++w) {
        const auto p = layered_graph({l, w});
        CHECK(p.graph.arcs.size() == (l - 1) * w * w + 2 * w);
        const auto paths = enumerate_solutions(p.description);
        std::size_t expect = 1;
        for (std::size_t i = 0; i < l; ++i) expect *= w;
        CHECK(paths.size() == expect);
        for (const auto& x : paths) {
          double arcs = 0;
          for (double v : x) arcs += v;
          CHECK(arcs == doctest::Approx(static_cast<double>(l + 1)));
          CHECK(p.description.contains(x));
        }
      }
    }
  }

  TEST_CASE("enumeration counts and cap") {
    CHECK(enumerate_solutions(selection_lp_description({5, 2})).size() == 10);
    CHECK(enumerate_solutions(layered_graph({2, 2}).description).size() == 4);
    CHECK_THROWS_AS(enumerate_solutions(selection_lp_description({20, 10}), 1000), EnumerationCapExceeded);
    CHECK_THROWS_AS(enumerate_paths(layered_graph({6, 6}).graph, 1000), EnumerationCapExceeded);
  }

  TEST_CASE("brute force enumeration of a custom description") {
    // x1 + x2 >= 1 over {0,1}^2, no enumerator.
    Matrix a(1, 2, 1.0);
    FeasibleSetDescription x(a, Matrix(1, 0), {1.0}, false);
    CHECK_FALSE(x.has_enumerator());
    CHECK(enumerate_solutions(x).size() == 3);
  }

  TEST_CASE("pair sub-instances") {
    const auto p = layered_graph({3, 2});
    const auto subs = layered_pair_instances(p);
    REQUIRE(subs.size() == 4);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      const auto paths = enumerate_solutions(subs[i]);
      CHECK(paths.size() == 2);
      for (const auto& x : paths) {
        CHECK(x[p.graph.source_arc(i / 2)] == 1.0);
        CHECK(x[p.graph.sink_arc(i % 2)] == 1.0);
      }
    }
  }

  TEST_CASE("robust examples") {
    const auto x21 = selection_lp_description({2, 1});
    const auto r = solve_robust(x21, testing::set_of({{3, 1}, {1, 2}}));
    CHECK(r.value == doctest::Approx(2));
    CHECK(r.x == Vector{0, 1});

    const auto single = solve_robust(selection_lp_description({3, 2}), testing::set_of({{4, 1, 2}}));
    CHECK(single.value == doctest::Approx(3));
    CHECK(single.value == doctest::Approx(nominal_value(selection_lp_description({3, 2}), Vector{4, 1, 2}, true)));

    const auto x22 = solve_robust(selection_lp_description({2, 2}), testing::set_of({{1, 0}, {0, 1}}));
    CHECK(x22.value == doctest::Approx(1));
    CHECK(x22.x == Vector{1, 1});
  }

  TEST_CASE("shifted robust examples") {
    const auto x21 = selection_lp_description({2, 1});
    const auto u = testing::set_of({{3, 1}, {1, 2}});
    const Vector c{5, 7};
    CHECK(solve_robust_shifted(x21, u, 0.0, c).value == doctest::Approx(solve_robust(x21, u).value));

    const auto a = solve_robust_shifted(x21, testing::set_of({{0.5, 0.5}}), 0.5, Vector{1, 0});
    CHECK(a.value == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(a.x == Vector{1, 0});
    const auto b = solve_robust_shifted(x21, testing::set_of({{0.4, 0.4}}), 0.5, Vector{1, 0});
    CHECK(b.value == doctest::Approx(-0.1));
    CHECK(b.x == Vector{1, 0});
  }

  TEST_CASE("epigraph milp agrees with enumeration") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const FeasibleSetDescription x =
          seed % 2 == 0 ? selection_lp_description({6, 1 + seed % 5}) : layered_graph({2 + seed % 2, 3}).description;
      const auto u = testing::random_set(x.dim(), 6, seed);
      const auto sols = enumerate_solutions(x);
      const auto milp = solve_robust(x, u);
      const auto scan = solve_robust_enumerated(sols, u);
      CHECK(milp.value == doctest::Approx(scan.value).epsilon(1e-7));
      CHECK(testing::worst(milp.x, u) == doctest::Approx(milp.value).epsilon(1e-9));
      Rng rng(seed);
      Vector c(x.dim());
      for (auto& v : c) v = rng.uniform01() - 0.5;
      const auto shifted = solve_robust_shifted(x, u, 0.7, c);
      double best = 1e300;
      for (const auto& s : sols) {
        double w = -1e300;
        for (std::size_t k = 0; k < u.size(); ++k) {
          double v = 0;
          for (std::size_t i = 0; i < s.size(); ++i) v += (u[k][i] - 0.7 * c[i]) * s[i];
          w = std::max(w, v);
        }
        best = std::min(best, w);
      }
      CHECK(shifted.value == doctest::Approx(best).epsilon(1e-7));
    }
  }

  TEST_CASE("flow polytope nominal relaxation is integral") {
    const auto x = layered_graph({3, 3}).description;
    Rng rng(42);
    for (int i = 0; i < 100; ++i) {
      Vector c(x.dim());
      for (auto& v : c) v = rng.uniform01();
      CHECK(nominal_value(x, c, false) == doctest::Approx(nominal_value(x, c, true)).epsilon(1e-6));
    }
  }

  TEST_CASE("worst case value") {
    auto [v0, k0] = worst_case_value(Vector{1, 1}, testing::set_of({{1, 0}, {0, 1}}));
    CHECK(v0 == doctest::Approx(1));
    CHECK(k0 == 0);
    auto [v1, k1] = worst_case_value(Vector{0, 1}, testing::set_of({{3, 1}, {1, 3}}));
    CHECK(v1 == doctest::Approx(3));
    CHECK(k1 == 1);
    auto [v2, k2] = worst_case_value(Vector{0, 0}, testing::set_of({{3, 1}, {1, 3}}));
    CHECK(v2 == 0.0);
    CHECK(k2 == 0);
    CHECK_THROWS_AS(worst_case_value(Vector{1}, testing::set_of({{3, 1}})), DimensionMismatch);
  }

  TEST_CASE("selection relaxation") {
    CHECK(selection_relaxation_for(layered_graph({2, 3}).description) == SelectionSpec{15, 3});
    CHECK(selection_relaxation_for(layered_graph({2, 2}).description) == SelectionSpec{8, 3});
    CHECK(selection_relaxation_for(selection_lp_description({7, 4})) == SelectionSpec{7, 4});
    CHECK(selection_relaxation_for(layered_graph({4, 2}).description) == SelectionSpec{16, 5});
  }

  TEST_CASE("conic hulls shrink as p grows") {
    // 1000 random conic combinations of X_{n,p+1} lie in conic(X_{n,p}).
    Rng rng(11);
    int checked = 0;
    for (std::size_t n = 3; n <= 6 && checked < 1000; ++n) {
      for (std::size_t p = 1; p + 1 <= n && checked < 1000; ++p) {
        const auto upper = enumerate_selection({n, p + 1});
        const auto cone = ConeDescription::from_generators(enumerate_selection({n, p}));
        const auto lp_cone = ConeDescription::from_lp(selection_lp_description({n, p}));
        for (int trial = 0; trial < 100 && checked < 1000; ++trial, ++checked) {
          Vector y(n, 0.0);
          for (const auto& g : upper) {
            const double w = rng.uniform01() < 0.5 ? 0.0 : 3 * rng.uniform01();
            for (std::size_t i = 0; i < n; ++i) y[i] += w * g[i];
          }
          CHECK(cone_membership(y, cone));
          if (trial % 10 == 0) CHECK(cone_membership(y, lp_cone));
        }
      }
    }
    CHECK(checked == 1000);
  }

  TEST_CASE("set cover encoding") {
    const auto sc = set_cover_instance(3, {{0, 1}, {1, 2}, {2}});
    CHECK(sc.scenarios.size() == 3);
    CHECK(sc.scenarios.scenario(0) == Vector{1, 1, 0});
    CHECK(enumerate_solutions(sc.feasible).size() == 3);
    CHECK_THROWS_AS(set_cover_instance(3, {{0, 1}}), std::invalid_argument);
  }

  TEST_CASE("family descriptions") {
    CHECK(family_description(SelectionSpec{4, 2}).dim() == 4);
    CHECK(family_description(LayeredGraphSpec{2, 3}).dim() == 15);
    CHECK_THROWS_AS(family_description(std::monostate{}), MissingLpDescription);
  }
}
