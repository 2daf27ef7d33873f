#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "scenred/dominance.hpp"
#include "scenred/problems.hpp"
#include "scenred/rng.hpp"
#include "support.hpp"

using namespace scenred;

namespace {

// Best min-slack of mu c^1 + (1 - mu) c^2 - c over a grid on mu.
double grid_convex_slack(const Vector& c, const Vector& a, const Vector& b) {
  double best = -1e300;
  for (int s = 0; s <= 10000; ++s) {
    const double mu = s / 10000.0;
    double slack = 1e300;
    for (std::size_t i = 0; i < c.size(); ++i) slack = std::min(slack, mu * a[i] + (1 - mu) * b[i] - c[i]);
    best = std::max(best, slack);
  }
  return best;
}

}  // namespace

TEST_SUITE("dominance") {
  TEST_CASE("componentwise") {
    CHECK(dominates_componentwise(Vector{1, 1}, Vector{1, 0}));
    CHECK_FALSE(dominates_componentwise(Vector{1, 0}, Vector{0.4, 0.4}));
    CHECK(dominates_componentwise(Vector{0.3, 0.7}, Vector{0.3, 0.7}));
    CHECK_THROWS_AS(dominates_componentwise(Vector{1}, Vector{1, 2}), DimensionMismatch);
  }

  TEST_CASE("convex dominance against a grid search") {
    const auto s = testing::set_of({{1, 0}, {0, 1}});
    CHECK(grid_convex_slack({0.4, 0.4}, {1, 0}, {0, 1}) >= 0);
    CHECK(dominates_convex(Vector{0.4, 0.4}, s));
    CHECK(grid_convex_slack({0.6, 0.6}, {1, 0}, {0, 1}) < 0);
    CHECK_FALSE(dominates_convex(Vector{0.6, 0.6}, s));
    CHECK(dominates_convex(Vector{0.2, 0.9}, testing::set_of({{0.2, 0.9}})));

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      const Vector a{rng.uniform01(), rng.uniform01()}, b{rng.uniform01(), rng.uniform01()};
      const Vector c{rng.uniform01(), rng.uniform01()};
      const double slack = grid_convex_slack(c, a, b);
      if (std::abs(slack) < 1e-3) continue;  // too close for the grid
      CHECK(dominates_convex(c, testing::set_of({a, b})) == (slack > 0));
    }
  }

  TEST_CASE("cone membership") {
    const auto cone = ConeDescription::from_generators(enumerate_selection({3, 2}));
    CHECK(cone_membership(Vector{1, 2, 3}, cone));
    CHECK_FALSE(cone_membership(Vector{1, 2, 4}, cone));
    CHECK(cone_membership(Vector{0, 0, 0}, cone));
    const auto lp = ConeDescription::from_lp(selection_lp_description({3, 2}));
    CHECK(cone_membership(Vector{1, 2, 3}, lp));
    CHECK_FALSE(cone_membership(Vector{1, 2, 4}, lp));
    CHECK(cone_membership(Vector{0, 0, 0}, lp));
    CHECK_THROWS_AS(cone_membership(Vector{1, 2}, ConeDescription{}), NoRepresentation);
  }

  TEST_CASE("dual cone dominance") {
    const auto orth = ConeDescription::nonnegative_orthant(2);
    CHECK(dominates_dual_cone(Vector{1, 1}, Vector{1, 0}, orth));
    const auto diag = ConeDescription::from_generators({{1, 1}});
    CHECK(dominates_dual_cone(Vector{1, 0}, Vector{0.4, 0.4}, diag));
    CHECK_FALSE(dominates_dual_cone(Vector{0.4, 0.4}, Vector{1, 0}, diag));

    // The same relation through the LP form of X_{2,2} = {(1,1)}.
    const auto lp = ConeDescription::from_lp(selection_lp_description({2, 2}));
    CHECK(dominates_dual_cone(Vector{1, 0}, Vector{0.4, 0.4}, lp));
    CHECK_FALSE(dominates_dual_cone(Vector{0.4, 0.4}, Vector{1, 0}, lp));
  }

  TEST_CASE("orthant dual cone matches componentwise on random pairs") {
    Rng rng(17);
    const auto orth = ConeDescription::nonnegative_orthant(3);
    const auto orth_lp = ConeDescription::from_lp(FeasibleSetDescription(Matrix(0, 3), Matrix(0, 0), {}, true));
    for (int i = 0; i < 1000; ++i) {
      Vector a(3), b(3);
      for (std::size_t k = 0; k < 3; ++k) {
        a[k] = static_cast<double>(rng.uniform_int(0, 3));
        b[k] = static_cast<double>(rng.uniform_int(0, 3));
      }
      CHECK(dominates_dual_cone(a, b, orth) == dominates_componentwise(a, b));
      if (i % 20 == 0) CHECK(dominates_dual_cone(a, b, orth_lp) == dominates_componentwise(a, b));
    }
  }

  TEST_CASE("componentwise implies dual cone for nonnegative generators") {
    Rng rng(8);
    const auto cone = ConeDescription::from_generators(enumerate_selection({4, 2}));
    for (int i = 0; i < 200; ++i) {
      Vector c(4), d(4);
      for (std::size_t k = 0; k < 4; ++k) {
        c[k] = rng.uniform01();
        d[k] = c[k] + rng.uniform01();
      }
      CHECK(dominates_dual_cone(d, c, cone));
    }
  }

  TEST_CASE("certificate search") {
    const auto u = testing::set_of({{1, 0}, {0, 1}, {0.4, 0.4}});
    const auto x = selection_lp_description({2, 1});
    const auto cert = convex_dual_cone_dominance(u[2], u, {0, 1}, &x);
    REQUIRE(cert.has_value());
    CHECK(certificate_violation(*cert, u[2], u, &x) <= 1e-6);
    CHECK_FALSE(convex_dual_cone_dominance(Vector{0.6, 0.6}, u, {0, 1}, nullptr).has_value());
    const auto orth = convex_dual_cone_dominance(u[2], u, {0, 1}, nullptr);
    REQUIRE(orth.has_value());
    CHECK(orth->dual.empty());
    double sum = 0;
    for (double w : orth->weights) sum += w;
    CHECK(sum == doctest::Approx(1));
  }

  TEST_CASE("pareto filter") {
    CHECK(pareto_filter(testing::set_of({{1, 0}, {0, 1}, {1, 1}})) == IndexSet{2});
    CHECK(pareto_filter(testing::set_of({{1, 0}, {0, 1}, {0.4, 0.4}})) == IndexSet{0, 1, 2});
    CHECK(pareto_filter(testing::set_of({{0.3, 0.3}})) == IndexSet{0});
    CHECK(pareto_filter(testing::set_of({{1, 1}, {1, 1}, {0, 2}})) == IndexSet{0, 2});
  }

  TEST_CASE("supported filter") {
    CHECK(supported_filter(testing::set_of({{1, 0}, {0, 1}, {0.4, 0.4}})) == IndexSet{0, 1});
    CHECK(supported_filter(testing::set_of({{1, 0}, {0, 1}, {0.6, 0.6}})) == IndexSet{0, 1, 2});
    CHECK(supported_filter(testing::set_of({{1, 1}})) == IndexSet{0});
  }

  TEST_CASE("supported points are pareto points") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto u = testing::random_set(3, 20, seed);
      const auto p = pareto_filter(u);
      const auto s = supported_filter(u);
      CHECK(std::includes(p.begin(), p.end(), s.begin(), s.end()));
    }
  }

  TEST_CASE("sufficiency oracle examples") {
    const auto u = testing::set_of({{1, 0}, {0, 1}, {1, 1}});
    const auto x = selection_lp_description({2, 1});
    CHECK(sufficiency_oracle(testing::set_of({{1, 1}}), u, x));
    CHECK_FALSE(sufficiency_oracle(testing::set_of({{1, 0}}), u, x));
    CHECK(sufficiency_oracle(u, u, x));
    CHECK_THROWS_AS(sufficiency_oracle(u, u, selection_lp_description({24, 12}), 100), EnumerationCapExceeded);
  }

  TEST_CASE("oracle accepts any pareto set") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const auto u = testing::random_set(5, 15, seed);
      const auto p = u.subset(pareto_filter(u));
      for (std::size_t q = 1; q <= 4; ++q) CHECK(sufficiency_oracle(p, u, selection_lp_description({5, q})));
      CHECK(sufficiency_oracle(p, u, FeasibleSetDescription(Matrix(1, 5, 1.0), Matrix(1, 0), {2.0}, false)));
    }
  }

  TEST_CASE("sufficiency types") {
    const auto x = enumerate_selection({2, 1});
    const auto u = testing::set_of({{3, 1}, {1, 3}, {2, 2}});
    const auto ab = testing::set_of({{3, 1}, {1, 3}});
    CHECK_FALSE(satisfies_sufficiency_type(ab, u, SufficiencyType::I, x));
    CHECK(satisfies_sufficiency_type(ab, u, SufficiencyType::II, x));
    CHECK(satisfies_sufficiency_type(ab, u, SufficiencyType::IV, x));
    CHECK_FALSE(satisfies_sufficiency_type(ab, u, SufficiencyType::III, x));
    CHECK(satisfies_sufficiency_type(u, u, SufficiencyType::I, x));

    // Concave, increasing f: the generalized type (iv) still implies the
    // worst-case values match.
    const ObjectiveFn sqrt_f = [](std::span<const double> xs, std::span<const double> c) {
      return std::sqrt(dot(xs, c));
    };
    CHECK(satisfies_sufficiency_type(ab, u, SufficiencyType::IV, x, sqrt_f));
    CHECK(sufficiency_oracle(ab, u, x, sqrt_f));
  }

  TEST_CASE("shrinking cones keep type (iii) sufficiency") {
    // conic(X_{4,3}) is inside conic(X_{4,2}); a set built from dual-cone
    // dominance for X_{4,2} passes the oracle on X_{4,3}.
    const auto big = ConeDescription::from_generators(enumerate_selection({4, 2}));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto u = testing::random_set(4, 12, seed);
      IndexSet keep;
      for (std::size_t j = 0; j < u.size(); ++j) {
        bool covered = false;
        for (std::size_t k : keep) covered = covered || dominates_dual_cone(u[k], u[j], big);
        if (covered) continue;
        // Replace any kept scenario that j covers, then keep j.
        IndexSet next;
        for (std::size_t k : keep) {
          if (!dominates_dual_cone(u[j], u[k], big)) next.push_back(k);
        }
        next.push_back(j);
        keep = next;
      }
      std::sort(keep.begin(), keep.end());
      CHECK(sufficiency_oracle(u.subset(keep), u, selection_lp_description({4, 2})));
      CHECK(sufficiency_oracle(u.subset(keep), u, selection_lp_description({4, 3})));
    }
  }
}
