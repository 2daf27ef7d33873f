#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "scenred/approximation.hpp"
#include "scenred/dominance.hpp"
#include "scenred/problems.hpp"
#include "scenred/rng.hpp"
#include "support.hpp"

using namespace scenred;

namespace {

const ScenarioSet kAxes = testing::set_of({{1, 0}, {0, 1}});

AlternatingOpts quick() {
  AlternatingOpts o;
  o.starts = 4;
  return o;
}

void check_simplex_rows(const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double s = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      CHECK(m(r, c) >= -1e-9);
      s += m(r, c);
    }
    CHECK(s == doctest::Approx(1).epsilon(1e-8));
  }
}

// Best t for K=1, n=2 by scanning lambda in [0,1]: t = min_j min_i c_hat_i / c^j_i
// over the (i') constraints with one representative.
double scan_k1_two(const Vector& a, const Vector& b) {
  double best = 0;
  for (int s = 0; s <= 100000; ++s) {
    const double l = s / 100000.0;
    const Vector c{l * a[0] + (1 - l) * b[0], l * a[1] + (1 - l) * b[1]};
    double t = 1e300;
    for (const auto& v : {a, b}) {
      for (int i = 0; i < 2; ++i) {
        if (v[i] > 0) t = std::min(t, c[i] / v[i]);
      }
    }
    best = std::max(best, t);
  }
  return best;
}

}  // namespace

TEST_SUITE("approximation") {
  TEST_CASE("method names") {
    CHECK(to_string(ApproxMethod::App12) == "App-1/2");
    CHECK(parse_approx_method("App12") == ApproxMethod::App12);
    CHECK(parse_approx_method("app-4") == ApproxMethod::App4);
    CHECK(parse_approx_method("kmeans") == ApproxMethod::KMeans);
    CHECK_THROWS_AS(parse_approx_method("App-9"), std::invalid_argument);
  }

  TEST_CASE("rng streams") {
    Rng a(5489);
    CHECK(a.next() == 14514284786278117030ull);
    Rng b(7), c(7);
    for (int i = 0; i < 100; ++i) {
      const double u = b.uniform01();
      CHECK(u == c.uniform01());
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      const auto k = b.below(7);
      CHECK(k == c.below(7));
      CHECK(k < 7);
      const auto v = b.uniform_int(1, 100);
      CHECK(v == c.uniform_int(1, 100));
      CHECK(v >= 1);
      CHECK(v <= 100);
    }
    CHECK(substream_seed(1, 0) != substream_seed(1, 1));
    CHECK(substream_seed(1, 0) != substream_seed(2, 0));
    CHECK(substream_seed(3, 4) == substream_seed(3, 4));
  }

  TEST_CASE("type 1/2 examples") {
    const auto r = approx_type12(kAxes, 1);
    CHECK(1.0 / r.t == doctest::Approx(2).epsilon(1e-4));
    CHECK(r.beta == doctest::Approx(2).epsilon(1e-4));
    CHECK(r.t == doctest::Approx(scan_k1_two({1, 0}, {0, 1})).epsilon(1e-4));
    CHECK(r.representatives.scenario(0)[0] == doctest::Approx(0.5));
    CHECK(r.representatives.scenario(0)[1] == doctest::Approx(0.5));
    CHECK(hull_identity_error(r, kAxes) <= 1e-8);

    const auto same = approx_type12(testing::set_of({{1, 1}, {1, 1}}), 1);
    CHECK(same.beta == doctest::Approx(1));

    const auto u = testing::random_set(3, 5, 2);
    const auto id = approx_type12(u, 5);
    CHECK(id.t == 1.0);
    CHECK(id.representatives == u);
    for (std::size_t k = 0; k < 5; ++k) CHECK(id.hull_weights(k, k) == 1.0);

    CHECK_THROWS_AS(approx_type12(u, 0), std::invalid_argument);
    CHECK_THROWS_AS(approx_type12(u, 6), std::invalid_argument);
  }

  TEST_CASE("k=1 matches a scan over lambda") {
    Rng rng(21);
    for (int i = 0; i < 10; ++i) {
      const Vector a{0.1 + rng.uniform01(), 0.1 + rng.uniform01()}, b{0.1 + rng.uniform01(), 0.1 + rng.uniform01()};
      const auto r = approx_type12(testing::set_of({a, b}), 1, quick());
      CHECK(r.t == doctest::Approx(scan_k1_two(a, b)).epsilon(1e-4));
    }
  }

  TEST_CASE("type 3 examples") {
    const auto all_ones = selection_lp_description({2, 2});
    const auto r = approx_type3(kAxes, all_ones, 1);
    CHECK(1.0 / r.t == doctest::Approx(1).epsilon(1e-4));
    const auto c = r.representatives.scenario(0);
    CHECK(c[0] + c[1] == doctest::Approx(1));
    CHECK(hull_identity_error(r, kAxes) <= 1e-8);

    const auto hull = selection_lp_description({2, 1});
    CHECK(1.0 / approx_type3(kAxes, hull, 1).t == doctest::Approx(2).epsilon(1e-4));
    const auto u = testing::random_set(4, 4, 1);
    CHECK(approx_type3(u, selection_lp_description({4, 2}), 4).beta == 1.0);
  }

  TEST_CASE("type 4 examples") {
    const auto x21 = selection_lp_description({2, 1});
    const auto r = approx_type4_ccg(kAxes, x21, 1);
    CHECK(1.0 / r.t == doctest::Approx(2).epsilon(1e-4));
    CHECK(r.representatives.scenario(0)[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.candidate_solutions.size() == r.solution_assignment.size());
    std::set<Vector> unique(r.candidate_solutions.begin(), r.candidate_solutions.end());
    CHECK(unique.size() == r.candidate_solutions.size());

    const auto u = testing::random_set(4, 4, 3);
    CHECK(approx_type4_ccg(u, selection_lp_description({4, 2}), 4).beta == 1.0);

    const auto dom = testing::set_of({{2, 2}, {1, 1}});
    for (const auto& x : {x21, selection_lp_description({2, 2})}) {
      const auto d = approx_type4_ccg(dom, x, 1);
      CHECK(d.beta == doctest::Approx(1).epsilon(1e-6));
      CHECK(d.representatives.scenario(0)[0] == doctest::Approx(2).epsilon(1e-6));
      CHECK(d.representatives.scenario(0)[1] == doctest::Approx(2).epsilon(1e-6));
    }
  }

  TEST_CASE("guarantee evaluation examples") {
    const auto x21 = selection_lp_description({2, 1});
    const auto x22 = selection_lp_description({2, 2});
    const auto mid = testing::set_of({{0.5, 0.5}});
    CHECK(evaluate_guarantee_t3(kAxes, kAxes, x21) == doctest::Approx(1));
    CHECK(evaluate_guarantee_t3(mid, kAxes, x22) == doctest::Approx(1).epsilon(1e-6));
    CHECK(evaluate_guarantee_t3(mid, kAxes, x21) == doctest::Approx(2).epsilon(1e-6));
    CHECK(evaluate_guarantee_t4(kAxes, kAxes, x21).beta == doctest::Approx(1));
    CHECK(evaluate_guarantee_t4(mid, kAxes, x21).beta == doctest::Approx(2).epsilon(1e-6));
    const auto u = testing::set_of({{3, 1}, {1, 3}, {2, 2}});
    CHECK(evaluate_guarantee_t4(testing::set_of({{3, 1}, {1, 3}}), u, x21).beta == doctest::Approx(1).epsilon(1e-6));
    CHECK(evaluate_guarantee_t12(mid, kAxes) == doctest::Approx(2).epsilon(1e-6));
  }

  TEST_CASE("ub ratio examples") {
    const auto x21 = selection_lp_description({2, 1});
    CHECK(ub_ratio(kAxes, kAxes, x21) == doctest::Approx(1));
    CHECK(ub_ratio(testing::set_of({{0.5, 0.5}}), kAxes, x21) == doctest::Approx(1));
    CHECK(ub_ratio(testing::set_of({{1, 0}}), kAxes, x21) == doctest::Approx(1));
    // Optimum 0 with a reduced set that picks a costly solution.
    const auto zero = testing::set_of({{0, 1}, {0, 0}});
    CHECK(ub_ratio(zero, zero, x21) == 1.0);
    CHECK(std::isinf(ub_ratio(testing::set_of({{1, 0}}), zero, x21)));
  }

  TEST_CASE("k-means") {
    const auto u = testing::random_set(3, 6, 4);
    const auto all = kmeans(u, 6, 1);
    const std::set<Vector> cents(all.centroids.begin(), all.centroids.end());
    const auto rows = u.rows();
    CHECK(cents == std::set<Vector>(rows.begin(), rows.end()));

    const auto one = kmeans(kAxes, 1, 1);
    CHECK(one.centroids[0] == Vector{0.5, 0.5});

    // Two separated groups of five: compare with the best 2-partition.
    Rng rng(2);
    std::vector<Vector> pts;
    for (int g = 0; g < 2; ++g) {
      for (int i = 0; i < 5; ++i) pts.push_back({10.0 * g + rng.uniform01(), 10.0 * g + rng.uniform01()});
    }
    const ScenarioSet two(pts);
    double best = 1e300;
    std::vector<Vector> best_means;
    for (std::uint32_t mask = 1; mask + 1 < (1u << 10); ++mask) {
      Vector m0(2, 0), m1(2, 0);
      int c0 = 0, c1 = 0;
      for (int i = 0; i < 10; ++i) {
        auto& m = (mask & (1u << i)) ? m1 : m0;
        ((mask & (1u << i)) ? c1 : c0)++;
        m[0] += pts[i][0];
        m[1] += pts[i][1];
      }
      for (auto& v : m0) v /= c0;
      for (auto& v : m1) v /= c1;
      double sse = 0;
      for (int i = 0; i < 10; ++i) {
        const auto& m = (mask & (1u << i)) ? m1 : m0;
        sse += std::pow(pts[i][0] - m[0], 2) + std::pow(pts[i][1] - m[1], 2);
      }
      if (sse < best) {
        best = sse;
        best_means = {m0, m1};
      }
    }
    const auto km = kmeans(two, 2, 9);
    std::sort(best_means.begin(), best_means.end());
    auto got = km.centroids;
    std::sort(got.begin(), got.end());
    for (int c = 0; c < 2; ++c) {
      CHECK(got[c][0] == doctest::Approx(best_means[c][0]));
      CHECK(got[c][1] == doctest::Approx(best_means[c][1]));
    }
    const auto again = kmeans(two, 2, 9);
    CHECK(again.labels == km.labels);
  }

  TEST_CASE("k-means baseline") {
    const auto r = kmeans_baseline(kAxes, 1, 3);
    CHECK(r.representatives.scenario(0) == Vector{0.5, 0.5});
    CHECK(r.beta == doctest::Approx(2).epsilon(1e-6));
    check_simplex_rows(r.hull_weights);
    CHECK(hull_identity_error(r, kAxes) <= 1e-8);
    const auto u = testing::random_set(2, 4, 9);
    CHECK(kmeans_baseline(u, 4, 1).beta == doctest::Approx(1));
  }

  TEST_CASE("cluster then represent") {
    const auto pairs = testing::set_of({{1, 0}, {0, 1}, {10, 0}, {0, 10}});
    const auto r = cluster_then_represent(pairs, IndexSet{0, 0, 1, 1}, 2, ApproxMethod::App12, nullptr);
    REQUIRE(r.representatives.size() == 2);
    CHECK(r.representatives.scenario(0)[0] == doctest::Approx(0.5));
    CHECK(r.representatives.scenario(1)[0] == doctest::Approx(5));
    CHECK(r.representatives.scenario(1)[1] == doctest::Approx(5));
    CHECK(r.beta == doctest::Approx(2).epsilon(1e-4));

    // K-means separates these groups; the second cluster alone has t = 0.95.
    const auto sep = testing::set_of({{1, 0}, {0, 1}, {10, 9}, {9, 10}});
    const auto s = cluster_then_represent(sep, 2, ApproxMethod::App12, nullptr);
    CHECK(s.beta == doctest::Approx(2).epsilon(1e-4));
    CHECK(s.cluster_of[0] == s.cluster_of[1]);
    CHECK(s.cluster_of[2] == s.cluster_of[3]);
    CHECK(s.cluster_of[0] != s.cluster_of[2]);
    const auto inner = cluster_then_represent(testing::set_of({{10, 9}, {9, 10}}), 1, ApproxMethod::App12, nullptr);
    CHECK(inner.t == doctest::Approx(0.95).epsilon(1e-6));
    const auto x = selection_lp_description({2, 1});
    CHECK(evaluate_guarantee_t4(s.representatives, sep, x).beta <= s.beta + 1e-6);

    const auto u = testing::random_set(3, 5, 6);
    CHECK(cluster_then_represent(u, 5, ApproxMethod::App12, nullptr).beta == doctest::Approx(1));
    const auto alone = approx_type12(u, 1);
    CHECK(cluster_then_represent(u, 1, ApproxMethod::App12, nullptr).beta == doctest::Approx(alone.beta).epsilon(1e-6));
    CHECK_THROWS_AS(cluster_then_represent(u, 2, ApproxMethod::App3, nullptr), MissingLpDescription);
  }

  TEST_CASE("guarantees on random instances") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const bool layered = seed % 2 == 1;
      const auto x = layered ? layered_graph({2, 2}).description : selection_lp_description({6, 2 + seed % 3});
      const auto u = testing::random_int_set(x.dim(), 8, 500 + seed, 20);
      if (dedupe_scenarios(u, 0.0).size() < 8) continue;
      const std::size_t k = 2 + seed % 2;
      const auto a12 = approx_type12(u, k, quick());
      auto o3 = quick();
      o3.initial_weights = {a12.hull_weights};
      const auto a3 = approx_type3(u, x, k, o3);
      CcgOpts c4;
      c4.alternating = quick();
      c4.alternating.initial_weights = {a3.hull_weights, a12.hull_weights};
      const auto a4 = approx_type4_ccg(u, x, k, c4);
      CHECK(a3.beta <= a12.beta + 1e-6);
      CHECK(a4.beta <= a3.beta + 1e-6);
      for (const auto* r : {&a12, &a3, &a4}) {
        CHECK(r->beta >= 1.0);
        CHECK(hull_identity_error(*r, u) <= 1e-8);
        check_simplex_rows(r->hull_weights);
        const double ratio = ub_ratio(r->representatives, u, x);
        CHECK(ratio >= 1.0 - 1e-9);
        CHECK(ratio <= r->beta + 1e-6);
        for (std::size_t q = 0; q < r->representatives.size(); ++q) {
          for (std::size_t i = 0; i < u.dim(); ++i) {
            double lo = 1e300, hi = -1e300;
            for (std::size_t j = 0; j < u.size(); ++j) {
              lo = std::min(lo, u[j][i]);
              hi = std::max(hi, u[j][i]);
            }
            CHECK(r->representatives[q][i] >= lo - 1e-8);
            CHECK(r->representatives[q][i] <= hi + 1e-8);
          }
        }
        const double t4 = evaluate_guarantee_t4(r->representatives, u, x).beta;
        const double t3 = evaluate_guarantee_t3(r->representatives, u, x);
        const double t12 = evaluate_guarantee_t12(r->representatives, u);
        CHECK(t4 <= t3 + 1e-6);
        CHECK(t3 <= t12 + 1e-6);
      }
      check_simplex_rows(a12.assignment);
    }
  }

  TEST_CASE("permutation invariance") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto u = testing::random_set(3, 8, 600 + seed);
      IndexSet perm(u.size());
      std::iota(perm.begin(), perm.end(), 0);
      Rng rng(seed);
      for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      auto o = quick();
      o.seed = 3;
      CHECK(approx_type12(u, 2, o).beta == doctest::Approx(approx_type12(u.subset(perm), 2, o).beta).epsilon(1e-6));
    }
  }

  TEST_CASE("enough representatives for the supported points") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto u = testing::random_set(2, 10, 700 + seed);
      const auto s = supported_filter(u);
      const auto r = approx_type12(u, std::min(u.size(), s.size() + seed % 2), quick());
      CHECK(r.beta == doctest::Approx(1).epsilon(1e-6));
    }
  }

  TEST_CASE("robust oracle switches between scan and milp") {
    const auto x = layered_graph({2, 3}).description;
    const RobustOracle scan(x, SolverParams::from_environment(), 100);
    const RobustOracle milp(x, SolverParams::from_environment(), 1);
    CHECK(scan.enumerated());
    CHECK_FALSE(milp.enumerated());
    const auto u = testing::random_set(15, 6, 8);
    CHECK(scan.robust(u).value == doctest::Approx(milp.robust(u).value).epsilon(1e-7));
    const Vector c(15, 0.3);
    CHECK(scan.shifted(u, 0.5, c).value == doctest::Approx(milp.shifted(u, 0.5, c).value).epsilon(1e-7));
  }
}
