#include "doctest.h"
#include "scenred/core.hpp"
#include "scenred/problems.hpp"
#include "support.hpp"

using namespace scenred;

TEST_SUITE("core") {
  TEST_CASE("validate accepts well formed sets") {
    const auto u = validate_scenario_set({{1, 0}, {0, 1}});
    CHECK(u.dim() == 2);
    CHECK(u.size() == 2);
    CHECK(u.scenario(1) == Vector{0, 1});
  }

  TEST_CASE("validate rejects ragged and negative input") {
    CHECK_THROWS_AS(validate_scenario_set({{1, 0}, {0, 1, 2}}), DimensionMismatch);
    CHECK_THROWS_AS(validate_scenario_set({{-1, 0}}), NegativeComponent);
    CHECK_THROWS_AS(validate_scenario_set({}), Error);
  }

  TEST_CASE("labels must match the scenario count") {
    CHECK_NOTHROW(validate_scenario_set({{1}, {2}}, {"a", "b"}));
    CHECK_THROWS(validate_scenario_set({{1}, {2}}, {"a"}));
  }

  TEST_CASE("dedupe examples") {
    CHECK(dedupe_scenarios(testing::set_of({{1, 0}, {1, 0}, {0, 1}}), 0.0) == testing::set_of({{1, 0}, {0, 1}}));
    CHECK(dedupe_scenarios(testing::set_of({{1, 0}, {1, 1e-9}}), 1e-8) == testing::set_of({{1, 0}}));
    const auto u = testing::set_of({{1, 0}, {0, 1}});
    CHECK(dedupe_scenarios(u, 0.0) == u);
  }

  TEST_CASE("dedupe map points at the kept representative") {
    const auto d = dedupe_indices(testing::set_of({{1, 0}, {0, 1}, {1, 0}, {0, 1}}), 0.0);
    CHECK(d.kept == IndexSet{0, 1});
    CHECK(d.representative == IndexSet{0, 1, 0, 1});
  }

  TEST_CASE("dedupe is idempotent") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto u = testing::random_int_set(3, 30, seed, 2);
      const auto once = dedupe_scenarios(u, 0.0);
      CHECK(dedupe_scenarios(once, 0.0) == once);
      CHECK(once.size() <= 27);
    }
  }

  TEST_CASE("subset keeps the requested order") {
    const auto u = testing::set_of({{1}, {2}, {3}});
    CHECK(u.subset({2, 0}).rows() == std::vector<Vector>{{3}, {1}});
  }

  TEST_CASE("description checks its shapes") {
    CHECK_THROWS_AS(FeasibleSetDescription(Matrix(2, 2), Matrix(3, 0), Vector(2), true), DimensionMismatch);
    CHECK_THROWS_AS(FeasibleSetDescription(Matrix(2, 2), Matrix(2, 0), Vector(3), true), DimensionMismatch);
  }

  TEST_CASE("contains and with_fixed") {
    const auto x = selection_lp_description({3, 2});
    CHECK(x.contains(Vector{1, 1, 0}));
    CHECK(x.contains(Vector{0.5, 0.5, 1}));
    CHECK_FALSE(x.contains(Vector{1, 1, 1}));
    const auto fixed = x.with_fixed({{0, 1.0}});
    CHECK(fixed.contains(Vector{1, 0, 1}));
    CHECK_FALSE(fixed.contains(Vector{0, 1, 1}));
    CHECK(enumerate_solutions(fixed).size() == 2);
  }

  TEST_CASE("robust instance requires matching dimensions") {
    CHECK_THROWS_AS(RobustInstance(selection_lp_description({3, 1}), testing::set_of({{1, 2}})), DimensionMismatch);
    CHECK_NOTHROW(RobustInstance(selection_lp_description({2, 1}), testing::set_of({{1, 2}})));
  }

  TEST_CASE("cone descriptions") {
    const auto orth = ConeDescription::nonnegative_orthant(3);
    CHECK(orth.dim() == 3);
    CHECK_THROWS_AS(ConeDescription::from_generators({{1, -1}}), NegativeComponent);
    CHECK(ConeDescription::from_lp(selection_lp_description({4, 2})).dim() == 4);
  }

  TEST_CASE("dot and max norm distance") {
    CHECK(dot(Vector{1, 2}, Vector{3, 4}) == doctest::Approx(11));
    CHECK(max_norm_distance(Vector{1, 2}, Vector{3, 1}) == doctest::Approx(2));
    CHECK_THROWS_AS(dot(Vector{1}, Vector{1, 2}), DimensionMismatch);
  }
}
