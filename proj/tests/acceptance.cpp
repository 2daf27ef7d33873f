// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Details for failing cells go to stderr.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "scenred/approximation.hpp"
#include "scenred/dominance.hpp"
#include "scenred/experiments.hpp"
#include "scenred/problems.hpp"
#include "scenred/reduction.hpp"
#include "scenred/rng.hpp"

using namespace scenred;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Dedupe-aware random instance: uniform [0,1]^n, duplicates removed.
ScenarioSet random_instance(std::size_t n, std::size_t count, std::uint64_t seed) {
  return dedupe_scenarios(sample_scenarios(n, count, CostDistribution::UniformReal01, seed), 0.0);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::size_t oracle_checks = 0;
std::size_t oracle_failures = 0;

void oracle(const ReductionResult& r, const ScenarioSet& u, const std::vector<Vector>& sols, const char* what) {
  ++oracle_checks;
  if (!sufficiency_oracle(u.subset(r.selected), u, sols)) {
    ++oracle_failures;
    std::fprintf(stderr, "  oracle failure: %s (%s)\n", what, to_string(r.method).c_str());
  }
}

// Reference fractions per (L, W): Red-1, Red-2, Red-3, Red-4, Red-4S.
const std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> kTable{
    {{2, 2}, {0.162, 0.452, 0.808, 0.960, 0.892}},
    {{3, 2}, {0.018, 0.200, 0.692, 0.936, 0.850}},
};

Outcome layered_fractions() {
  ReductionConfig c;
  c.families = {LayeredGraphSpec{2, 2}, LayeredGraphSpec{3, 2}};
  c.scenarios = 100;
  c.samples = 10;
  c.seed = 1;
  const auto e = run_reduction_experiment(c);
  Outcome o;
  for (const auto& r : e.records) {
    ++oracle_checks;
    if (r.oracle != "pass") {
      ++oracle_failures;
      std::fprintf(stderr, "  oracle %s: %s %s #%zu\n", r.oracle.c_str(), r.family.c_str(), r.method.c_str(),
                   r.instance);
    }
  }
  for (const auto& row : e.summary) {
    const auto& l = std::get<LayeredGraphSpec>(row.family);
    const auto& ref = kTable.at({l.layers, l.width});
    std::string line = "L=" + std::to_string(l.layers) + ",W=" + std::to_string(l.width) + ":";
    for (std::size_t m = 0; m < row.methods.size(); ++m) {
      const double got = row.mean_fraction[m];
      const bool ok = std::abs(got - ref[m]) <= 0.10;
      o.pass = o.pass && ok;
      line += " " + row.methods[m] + fmt("=%.3f(ref %.3f)", got, ref[m]) + (ok ? "" : "!");
    }
    o.detail += (o.detail.empty() ? "" : "; ") + line;
  }
  if (e.failed_cells > 0) {
    o.pass = false;
    o.detail += "; failed cells";
  }
  return o;
}

Outcome hierarchy_suite() {
  Rng rng(2024);
  std::size_t violations = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 3 + rng.below(6);  // 3..8
    const std::size_t p = 1 + rng.below(n - 1);
    const std::size_t count = 10 + rng.below(31);  // 10..40
    const auto u = random_instance(n, count, substream_seed(77, i));
    const auto x = selection_lp_description({n, p});
    const auto sols = enumerate_solutions(x);
    const auto r1 = reduce_type1(u, false), r2 = reduce_type2(u, false), r3 = reduce_type3(u, x);
    const auto r4s = reduce_type4_approx(u, x);
    const auto r4 = reduce_type4_exact(u, sols);
    const std::size_t a = r1.selected.size(), b = r2.selected.size(), c = r3.selected.size(),
                      d = r4.selected.size(), s = r4s.selected.size();
    const bool ok = a >= b && b >= s && s >= d && a >= c && c >= d && d <= s && s <= c;
    if (!ok) {
      ++violations;
      std::fprintf(stderr, "  hierarchy #%d n=%zu p=%zu: %zu %zu %zu %zu %zu\n", i, n, p, a, b, c, d, s);
    }
    for (const auto* r : {&r1, &r2, &r3, &r4, &r4s}) oracle(*r, u, sols, "hierarchy instance");
  }
  return {violations == 0, std::to_string(violations) + " violations on 50 instances"};
}

Outcome filter_milp_agreement() {
  Rng rng(31);
  std::size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng.below(5);  // 2..6
    const std::size_t count = 5 + rng.below(21);  // 5..25
    const auto u = random_instance(n, count, substream_seed(31, i));
    const auto f1 = reduce_type1(u, false), m1 = reduce_type1(u, true);
    const auto f2 = reduce_type2(u, false), m2 = reduce_type2(u, true);
    if (f1.selected.size() != m1.selected.size() || f2.selected.size() != m2.selected.size()) {
      ++mismatches;
      std::fprintf(stderr, "  mismatch #%d: pareto %zu/%zu supported %zu/%zu\n", i, f1.selected.size(),
                   m1.selected.size(), f2.selected.size(), m2.selected.size());
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches on 100 instances"};
}

Outcome monotonicity() {
  Rng rng(5);
  std::size_t violations = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 3 + rng.below(6);
    const std::size_t p = 1 + rng.below(n - 1);  // p + 1 <= n
    const auto u = random_instance(n, 30, substream_seed(5, i));
    const auto r = reduce_type3(u, selection_lp_description({n, p}));
    const auto next = enumerate_solutions(selection_lp_description({n, p + 1}));
    if (!sufficiency_oracle(u.subset(r.selected), u, next)) {
      ++violations;
      std::fprintf(stderr, "  monotonicity #%d n=%zu p=%zu\n", i, n, p);
    }
    oracle(r, u, enumerate_solutions(selection_lp_description({n, p})), "monotonicity instance");
  }
  return {violations == 0, std::to_string(violations) + " violations on 20 instances"};
}

Outcome guarantee_validity() {
  Rng rng(12);
  std::size_t violations = 0, records = 0;
  const double tol = 1e-6;
  for (int i = 0; i < 100; ++i) {
    FeasibleSetDescription x;
    if (i % 2 == 0) {
      const std::size_t n = 4 + rng.below(9);  // 4..12
      x = selection_lp_description({n, 1 + rng.below(n - 1)});
    } else {
      x = layered_graph({2 + rng.below(2), 2}).description;  // dim 8 or 12
    }
    const std::size_t count = 6 + rng.below(15);  // 6..20
    const std::size_t k = 1 + rng.below(4);
    const auto u = sample_scenarios(x.dim(), count, CostDistribution::UniformInt1to100, substream_seed(12, i));
    AlternatingOpts alt;
    alt.seed = substream_seed(13, i);
    const RobustOracle ro(x, alt.params);
    CcgOpts ccg;
    ccg.alternating = alt;

    std::vector<std::pair<std::string, ApproximationResult>> runs;
    runs.emplace_back("App-1/2", approx_type12(u, k, alt));
    auto o3 = alt;
    o3.initial_weights = {runs[0].second.hull_weights};
    runs.emplace_back("App-3", approx_type3(u, x, k, o3));
    auto o4 = ccg;
    o4.alternating.initial_weights = {runs[1].second.hull_weights, runs[0].second.hull_weights};
    runs.emplace_back("App-4", approx_type4_ccg(u, x, k, o4));
    runs.emplace_back("KMeans", kmeans_baseline(u, k, alt.seed, alt.params));
    runs.emplace_back("ClusterRepresent", cluster_then_represent(u, k, ApproxMethod::App3, &x, alt));

    for (auto& [name, r] : runs) {
      ++records;
      const auto t4 = evaluate_guarantee_t4(r.representatives, u, ro, ccg);
      const double t3 = evaluate_guarantee_t3(r.representatives, u, x, alt.params);
      const double beta = name == "KMeans" ? t4.beta : r.beta;
      const double ratio = ub_ratio(r.representatives, u, ro);
      const bool ok = ratio >= 1.0 - tol && ratio <= beta * (1 + tol) && t4.beta <= t3 * (1 + tol) &&
                      hull_identity_error(r, u) <= 1e-8;
      if (!ok) {
        ++violations;
        std::fprintf(stderr, "  guarantee #%d %s: ub=%.9g beta=%.9g T4=%.9g T3=%.9g\n", i, name.c_str(), ratio, beta,
                     t4.beta, t3);
      }
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(records) + " records"};
}

Outcome micro_instances() {
  const ScenarioSet u({{1, 0}, {0, 1}});
  const auto x21 = selection_lp_description({2, 1});
  const auto ones = selection_lp_description({2, 2});  // X = {(1,1)}
  const double b12 = 1.0 / approx_type12(u, 1).t;
  const double b4 = 1.0 / approx_type4_ccg(u, x21, 1).t;
  const double b3 = 1.0 / approx_type3(u, ones, 1).t;
  const bool ok = std::abs(b12 - 2) <= 1e-4 && std::abs(b4 - 2) <= 1e-4 && std::abs(b3 - 1) <= 1e-4;
  return {ok, fmt("App-1/2 %.6f, App-4 %.6f, App-3 %.6f", b12, b4, b3)};
}

Outcome relaxation_comparison() {
  ReductionConfig c;
  c.families = {LayeredGraphSpec{2, 3}};
  c.scenarios = 50;
  c.samples = 10;
  c.seed = 8;
  c.relaxation = true;
  c.methods = {ReductionMethod::Red3, ReductionMethod::Red4S};
  const auto e = run_reduction_experiment(c);
  std::map<std::pair<std::size_t, std::string>, std::map<std::string, double>> frac;
  for (const auto& r : e.records) {
    frac[{r.instance, r.method}][r.variant] = r.fraction;
    ++oracle_checks;
    if (r.oracle != "pass") {
      ++oracle_failures;
      std::fprintf(stderr, "  oracle %s: relaxation comparison %s/%s #%zu\n", r.oracle.c_str(), r.method.c_str(),
                   r.variant.c_str(), r.instance);
    }
  }
  std::size_t violations = 0;
  double direct3 = 0, relax3 = 0, direct4 = 0, relax4 = 0;
  for (auto& [key, v] : frac) {
    if (v.at("exact") < v.at("relaxation")) {
      ++violations;
      std::fprintf(stderr, "  relaxation #%zu %s: direct %.3f < relaxed %.3f\n", key.first, key.second.c_str(),
                   v.at("exact"), v.at("relaxation"));
    }
    (key.second == "Red-3" ? direct3 : direct4) += v.at("exact") / 10;
    (key.second == "Red-3" ? relax3 : relax4) += v.at("relaxation") / 10;
  }
  return {violations == 0 && e.failed_cells == 0,
          std::to_string(violations) + " violations; Red-3 " + fmt("%.3f vs %.3f", direct3, relax3) + ", Red-4S " +
              fmt("%.3f vs %.3f", direct4, relax4)};
}

Outcome red3_curve() {
  ReductionConfig c;
  for (std::size_t p = 1; p <= 7; ++p) c.families.push_back(SelectionSpec{8, p});
  c.scenarios = 100;
  c.samples = 10;
  c.seed = 9;
  c.methods = {ReductionMethod::Red3};
  const auto e = run_reduction_experiment(c);
  std::vector<double> curve;
  for (const auto& row : e.summary) curve.push_back(row.mean_fraction.at(0));
  bool ok = e.failed_cells == 0 && curve.size() == 7;
  std::string detail = "Red-3 by p:";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (i > 0 && curve[i] < curve[i - 1] - 0.02) ok = false;
    detail += fmt(" %.3f", curve[i]);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 reduction fractions (layered L=2,3 W=2, N=100, 10 seeds, +-0.10)", layered_fractions},
      {"2 cardinality hierarchy (50 selection instances)", hierarchy_suite},
      {"4 filter/MILP agreement (100 instances)", filter_milp_agreement},
      {"5 monotonicity in p (20 instances)", monotonicity},
      {"6 guarantee validity (100 approximation instances)", guarantee_validity},
      {"7 exact micro-instances", micro_instances},
      {"8 relaxation comparison (layered L=2,W=3, N=50)", relaxation_comparison},
      {"9 Red-3 fraction non-decreasing in p (n=8)", red3_curve},
  };
  int failures = 0;
  std::vector<std::string> lines;
  auto report = [&](const char* name, const Outcome& o, double secs) {
    char buf[1024];
    std::snprintf(buf, sizeof buf, "%s [%s] %s (%.1fs)", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::printf("%s\n", buf);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  for (const auto& [name, fn] : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(name, o, std::chrono::duration<double>(Clock::now() - start).count());
  }
  // Criterion 3 collects the oracle checks made by all the others.
  const Outcome three{oracle_failures == 0 && oracle_checks > 0,
                      std::to_string(oracle_failures) + " failures over " + std::to_string(oracle_checks) +
                          " reduced sets"};
  report("3 oracle equivalence (all reduced sets above)", three, 0.0);
  return failures == 0 ? 0 : 1;
}
