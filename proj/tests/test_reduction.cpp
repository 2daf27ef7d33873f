#include <algorithm>
#include <set>

#include "doctest.h"
#include "scenred/dominance.hpp"
#include "scenred/problems.hpp"
#include "scenred/reduction.hpp"
#include "support.hpp"

using namespace scenred;

namespace {

void check_certificates(const ReductionResult& r, const ScenarioSet& u, const FeasibleSetDescription& x) {
  REQUIRE(r.dual_certificates.size() == u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const auto& a = r.assignment[j];
    DominanceCertificate cert{a.sources, a.weights.empty() ? Vector(a.sources.size(), 1.0) : a.weights,
                              r.dual_certificates[j]};
    CHECK(certificate_violation(cert, u[j], u, &x) <= 1e-6);
  }
}

}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("method names") {
    CHECK(to_string(ReductionMethod::Red4S) == "Red-4S");
    CHECK(parse_reduction_method("red4s") == ReductionMethod::Red4S);
    CHECK(parse_reduction_method("Red-1") == ReductionMethod::Red1);
    CHECK_THROWS_AS(parse_reduction_method("Red-9"), std::invalid_argument);
  }

  TEST_CASE("type 1 examples") {
    const auto u = testing::set_of({{1, 0}, {0, 1}, {1, 1}});
    for (bool milp : {false, true}) {
      const auto r = reduce_type1(u, milp);
      CHECK(r.selected == IndexSet{2});
      CHECK(r.fraction() == doctest::Approx(2.0 / 3));
      CHECK(check_reduction_result(r).empty());
      CHECK(r.has_flag(milp ? "milp" : "filter"));
    }
    const auto one = reduce_type1(testing::set_of({{0.5, 0.5}}), true);
    CHECK(one.selected == IndexSet{0});
    CHECK(one.fraction() == 0.0);
  }

  TEST_CASE("type 2 examples") {
    const auto u = testing::set_of({{1, 0}, {0, 1}, {0.4, 0.4}});
    for (bool milp : {false, true}) {
      const auto r = reduce_type2(u, milp);
      CHECK(r.selected == IndexSet{0, 1});
      CHECK(check_reduction_result(r).empty());
      REQUIRE(r.assignment[2].weights.size() == 2);
    }
    CHECK(reduce_type2(testing::set_of({{1, 1}}), true).selected == IndexSet{0});
  }

  TEST_CASE("type 3 examples") {
    const auto u = testing::set_of({{1, 0}, {0, 1}, {0.4, 0.4}});
    const auto x = selection_lp_description({2, 2});
    const auto r = reduce_type3(u, x);
    CHECK(r.selected == IndexSet{0});
    CHECK(sufficiency_oracle(u.subset(r.selected), u, x));
    CHECK(check_reduction_result(r).empty());
    check_certificates(r, u, x);
    const auto lit = reduce_type3_literal(u, x);
    CHECK(lit.selected.size() == 1);
    CHECK(reduce_type3(testing::set_of({{0.2, 0.3}}), x).selected == IndexSet{0});
  }

  TEST_CASE("type 4 examples") {
    const auto u = testing::set_of({{3, 1}, {1, 3}, {2, 2}});
    const auto x = selection_lp_description({2, 1});
    const auto sols = enumerate_solutions(x);
    // Independent check: the smallest sufficient subset has two scenarios.
    CHECK(testing::brute_force_min_sufficient(u, sols) == 2);
    const auto exact = reduce_type4_exact(u, sols);
    CHECK(exact.selected == IndexSet{0, 1});
    CHECK(check_reduction_result(exact).empty());
    CHECK(reduce_type4_literal(u, sols).selected.size() == 2);
    const auto approx = reduce_type4_approx(u, x);
    CHECK(approx.selected == IndexSet{0, 1});
    check_certificates(approx, u, x);
    CHECK(reduce_type4_approx(testing::set_of({{1, 2}}), x).selected == IndexSet{0});

    // One solution: a single max-objective scenario, lowest index on ties.
    const auto tie = testing::set_of({{1, 3}, {3, 1}, {2, 2}, {3, 0}});
    CHECK(reduce_type4_exact(tie, {Vector{1, 0}}).selected == IndexSet{1});
  }

  TEST_CASE("zero-padded type 4 instance") {
    const auto u = testing::set_of({{3, 1, 0}, {1, 3, 0}, {2, 2, 0}});
    const auto r = reduce_type4_exact(u, enumerate_solutions(selection_lp_description({3, 1})));
    CHECK(r.fraction() == doctest::Approx(1.0 / 3));
  }

  TEST_CASE("errors") {
    const auto u = testing::set_of({{1, 0}, {0, 1}});
    CHECK_THROWS_AS(reduce_type3(u, FeasibleSetDescription{}), MissingLpDescription);
    CHECK_THROWS_AS(reduce_type4_approx(u, FeasibleSetDescription{}), MissingLpDescription);
    CHECK_THROWS_AS(reduce_type3(u, selection_lp_description({3, 1})), DimensionMismatch);
    ReductionOptions small;
    small.enumeration_cap = 5;
    CHECK_THROWS_AS(reduce(ReductionMethod::Red4, testing::random_set(10, 4, 1), selection_lp_description({10, 5}),
                           small),
                    EnumerationCapExceeded);
  }

  TEST_CASE("structural check catches bad results") {
    ReductionResult r;
    r.original_size = 2;
    CHECK_FALSE(check_reduction_result(r).empty());
    r.selected = {0};
    r.assignment = {{{0}, {1.0}, {}}, {{1}, {1.0}, {}}};
    CHECK_FALSE(check_reduction_result(r).empty());
    r.assignment[1] = {{0}, {0.5}, {}};
    CHECK_FALSE(check_reduction_result(r).empty());
    r.assignment[1] = {{0}, {1.0}, {}};
    CHECK(check_reduction_result(r).empty());
  }

  TEST_CASE("non-integral descriptions are flagged") {
    const auto u = testing::random_set(5, 10, 4);
    Matrix a(1, 5, 1.0);
    const FeasibleSetDescription x(a, Matrix(1, 0), {2.0}, false);
    const auto r = reduce_type3(u, x);
    CHECK(r.has_flag("relaxation"));
    CHECK(sufficiency_oracle(u.subset(r.selected), u, x));
  }

  TEST_CASE("literal and set cover models agree") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const auto u = dedupe_scenarios(testing::random_int_set(4, 7, seed, 4), 0.0);
      const auto x = selection_lp_description({4, 1 + seed % 3});
      const auto sols = enumerate_solutions(x);
      const auto cover3 = reduce_type3(u, x);
      const auto lit3 = reduce_type3_literal(u, x);
      CHECK(cover3.selected.size() == lit3.selected.size());
      CHECK(sufficiency_oracle(u.subset(lit3.selected), u, sols));
      const auto cover4 = reduce_type4_exact(u, sols);
      const auto lit4 = reduce_type4_literal(u, sols);
      CHECK(cover4.selected.size() == lit4.selected.size());
      CHECK(cover4.selected.size() == testing::brute_force_min_sufficient(u, sols));
    }
  }

  TEST_CASE("set cover instances reduce to minimum covers") {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t items = 5;
      std::vector<std::vector<std::size_t>> sets;
      std::set<std::vector<std::size_t>> seen;
      while (sets.size() < 6) {
        std::vector<std::size_t> s;
        for (std::size_t e = 0; e < items; ++e) {
          if (rng.uniform01() < 0.4) s.push_back(e);
        }
        if (!s.empty() && seen.insert(s).second) sets.push_back(s);
      }
      // Make sure every item is coverable.
      for (std::size_t e = 0; e < items; ++e) {
        bool any = false;
        for (const auto& s : sets) any = any || std::find(s.begin(), s.end(), e) != s.end();
        if (!any) sets.push_back({e});
      }
      std::size_t best = sets.size();
      for (std::uint32_t mask = 1; mask < (1u << sets.size()); ++mask) {
        std::vector<bool> hit(items, false);
        for (std::size_t q = 0; q < sets.size(); ++q) {
          if (mask & (1u << q)) {
            for (auto e : sets[q]) hit[e] = true;
          }
        }
        if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) {
          best = std::min<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
        }
      }
      const auto sc = set_cover_instance(items, sets);
      const auto r = reduce_type4_exact(sc.scenarios, enumerate_solutions(sc.feasible));
      CHECK(r.selected.size() == best);
    }
  }

  TEST_CASE("shortcut and full model give the same cardinality") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto u = testing::random_set(5, 15, 100 + seed);
      const auto x = seed % 2 ? selection_lp_description({5, 2}) : selection_lp_description({5, 3});
      ReductionOptions full;
      full.force_milp = true;
      const auto a = reduce_type4_approx(u, x);
      const auto b = reduce_type4_approx(u, x, full);
      CHECK(a.selected.size() == b.selected.size());
      CHECK_FALSE(b.has_flag("core_shortcut"));
      check_certificates(a, u, x);
      check_certificates(b, u, x);
      CHECK(check_reduction_result(b).empty());
    }
  }

  TEST_CASE("hierarchy and oracle on small selection instances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const std::size_t n = 4 + seed % 3;
      const auto u = testing::random_set(n, 12, 200 + seed);
      const auto x = selection_lp_description({n, 1 + seed % (n - 1)});
      const auto sols = enumerate_solutions(x);
      const auto r1 = reduce_type1(u, false), r2 = reduce_type2(u, false), r3 = reduce_type3(u, x);
      const auto r4 = reduce_type4_exact(u, sols), r4s = reduce_type4_approx(u, x);
      CHECK(r1.selected.size() >= r2.selected.size());
      CHECK(r2.selected.size() >= r4s.selected.size());
      CHECK(r1.selected.size() >= r3.selected.size());
      CHECK(r3.selected.size() >= r4s.selected.size());
      CHECK(r4s.selected.size() >= r4.selected.size());
      for (const auto* r : {&r1, &r2, &r3, &r4, &r4s}) {
        CHECK(check_reduction_result(*r).empty());
        CHECK(sufficiency_oracle(u.subset(r->selected), u, sols));
      }
    }
  }

  TEST_CASE("warm starts do not change optima") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const auto u = testing::random_set(4, 15, 300 + seed);
      ReductionOptions warm;
      warm.warm_start = pareto_filter(u);
      CHECK(reduce_type1(u, true, warm).selected.size() == reduce_type1(u, false).selected.size());
      const auto x = layered_graph({2, 2}).description;
      const auto ux = testing::random_set(8, 15, 400 + seed);
      const auto r4s = reduce_type4_approx(ux, x);
      warm.warm_start = r4s.selected;
      const auto sols = enumerate_solutions(x);
      CHECK(reduce_type4_exact(ux, sols, warm).selected.size() == reduce_type4_exact(ux, sols).selected.size());
    }
  }

  TEST_CASE("layered graph flow polytope") {
    const auto x = layered_graph({2, 2}).description;
    const auto u = testing::random_set(8, 30, 7);
    const auto sols = enumerate_solutions(x);
    for (auto m : {ReductionMethod::Red1, ReductionMethod::Red2, ReductionMethod::Red3, ReductionMethod::Red4,
                   ReductionMethod::Red4S}) {
      const auto r = reduce(m, u, x);
      CHECK(r.method == m);
      CHECK(check_reduction_result(r).empty());
      CHECK(sufficiency_oracle(u.subset(r.selected), u, sols));
    }
  }
}
