#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "scenred/experiments.hpp"
#include "support.hpp"

using namespace scenred;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

ReductionConfig small_reduction() {
  ReductionConfig c;
  c.families = {LayeredGraphSpec{2, 2}, SelectionSpec{5, 2}};
  c.scenarios = 20;
  c.samples = 3;
  c.seed = 4;
  return c;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("scenario sampling") {
    const auto u = sample_scenarios(8, 100, CostDistribution::UniformReal01, 1);
    CHECK(u.size() == 100);
    CHECK(u.dim() == 8);
    for (std::size_t k = 0; k < u.size(); ++k) {
      for (double v : u[k]) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
    const auto ints = sample_scenarios(2, 3, CostDistribution::UniformInt1to100, 7);
    for (std::size_t k = 0; k < ints.size(); ++k) {
      for (double v : ints[k]) {
        CHECK(v == std::floor(v));
        CHECK(v >= 1);
        CHECK(v <= 100);
      }
    }
    CHECK(sample_scenarios(8, 100, CostDistribution::UniformReal01, 1) == u);
    CHECK_FALSE(sample_scenarios(8, 100, CostDistribution::UniformReal01, 2) == u);
  }

  TEST_CASE("distribution and family names") {
    CHECK(parse_distribution("real") == CostDistribution::UniformReal01);
    CHECK(parse_distribution("Int1to100") == CostDistribution::UniformInt1to100);
    CHECK_THROWS_AS(parse_distribution("normal"), std::invalid_argument);
    CHECK(family_label(SelectionSpec{8, 3}) == "selection(n=8,p=3)");
    CHECK(family_label(LayeredGraphSpec{2, 2}) == "layered(L=2,W=2)");
    CHECK(family_dim(LayeredGraphSpec{3, 3}) == 24);
    CHECK(family_dim(SelectionSpec{12, 4}) == 12);
  }

  TEST_CASE("reduction experiment") {
    auto c = small_reduction();
    c.relaxation = true;
    const auto e = run_reduction_experiment(c);
    CHECK(e.failed_cells == 0);
    // 5 exact methods plus 2 relaxation variants, per instance.
    CHECK(e.records.size() == 2 * 3 * 7);
    for (const auto& r : e.records) {
      CHECK(r.status == "ok");
      CHECK(r.oracle == "pass");
      CHECK(r.original == 20);
    }
    REQUIRE(e.summary.size() == 4);
    CHECK(e.summary[0].methods.size() == 5);
    CHECK(e.summary[1].variant == "relaxation");
    CHECK(e.summary[1].methods == std::vector<std::string>{"Red-3", "Red-4S"});

    const auto csv = summary_csv(e.summary);
    CHECK(csv.rfind("L,W,dim,Red-1,Red-2,Red-3,Red-4,Red-4S,variant\n", 0) == 0);
    CHECK(csv.find("n,p,dim,Red-1,Red-2,Red-3,Red-4,Red-4S,variant\n") != std::string::npos);
    CHECK(csv.find("\n2,2,8,") != std::string::npos);
  }

  TEST_CASE("hierarchy holds on every emitted instance") {
    const auto e = run_reduction_experiment(small_reduction());
    std::map<std::pair<std::string, std::size_t>, std::map<std::string, std::size_t>> sizes;
    for (const auto& r : e.records) sizes[{r.family, r.instance}][r.method] = r.selected;
    for (const auto& [key, s] : sizes) {
      CHECK(s.at("Red-1") >= s.at("Red-2"));
      CHECK(s.at("Red-2") >= s.at("Red-4S"));
      CHECK(s.at("Red-4S") >= s.at("Red-4"));
      CHECK(s.at("Red-1") >= s.at("Red-3"));
      CHECK(s.at("Red-3") >= s.at("Red-4S"));
    }
  }

  TEST_CASE("deterministic output across runs and worker counts") {
    auto c = small_reduction();
    const auto a = run_reduction_experiment(c);
    c.jobs = 3;
    const auto b = run_reduction_experiment(c);
    CHECK(records_csv(a.records, false) == records_csv(b.records, false));
    CHECK(summary_csv(a.summary) == summary_csv(b.summary));

    ApproximationConfig ac;
    ac.families = {SelectionSpec{5, 2}};
    ac.scenarios = 8;
    ac.representatives = 2;
    ac.samples = 2;
    ac.alternating.starts = 3;
    const auto x = run_approximation_experiment(ac);
    ac.jobs = 2;
    const auto y = run_approximation_experiment(ac);
    CHECK(records_csv(x.records, false) == records_csv(y.records, false));
  }

  TEST_CASE("approximation experiment") {
    ApproximationConfig c;
    c.families = {SelectionSpec{6, 2}, LayeredGraphSpec{2, 2}};
    c.scenarios = 10;
    c.representatives = 3;
    c.samples = 2;
    c.alternating.starts = 3;
    const auto e = run_approximation_experiment(c);
    CHECK(e.failed_cells == 0);
    CHECK(e.records.size() == 2 * 2 * 4);
    for (const auto& r : e.records) {
      CHECK(r.ub_ratio >= 1.0 - 1e-9);
      CHECK(r.ub_ratio <= r.beta + 1e-6);
      CHECK(r.guarantee_t4 <= r.beta + 1e-6);
      CHECK(r.process_seconds == doctest::Approx(r.aggregation_seconds + r.solution_seconds));
      if (r.family.rfind("layered", 0) == 0) {
        CHECK(r.guarantee_t4 <= r.guarantee_t3 + 1e-6);
      } else {
        CHECK(std::isnan(r.guarantee_t3));
      }
    }
  }

  TEST_CASE("k equal to n gives exact approximations") {
    ApproximationConfig c;
    c.families = {SelectionSpec{4, 2}};
    c.scenarios = 4;
    c.representatives = 4;
    c.samples = 1;
    c.methods = {ApproxMethod::App12, ApproxMethod::App3, ApproxMethod::App4, ApproxMethod::KMeans,
                 ApproxMethod::ClusterRepresent};
    const auto e = run_approximation_experiment(c);
    REQUIRE(e.records.size() == 5);
    for (const auto& r : e.records) {
      CHECK(r.beta == doctest::Approx(1));
      CHECK(r.ub_ratio == doctest::Approx(1));
    }
  }

  TEST_CASE("multi-pair mode amortises aggregation") {
    ApproximationConfig c;
    c.families = {LayeredGraphSpec{2, 2}};
    c.scenarios = 8;
    c.representatives = 2;
    c.samples = 1;
    c.methods = {ApproxMethod::App12};
    c.multi_pair = true;
    const auto e = run_approximation_experiment(c);
    REQUIRE(e.records.size() == 4);
    CHECK(e.records[0].pair == "0-0");
    CHECK(e.records[3].pair == "1-1");
    for (const auto& r : e.records) {
      CHECK(r.aggregation_seconds == e.records[0].aggregation_seconds);
      CHECK(r.ub_ratio <= r.beta + 1e-6);
    }
  }

  TEST_CASE("config validation") {
    ApproximationConfig c;
    c.families = {SelectionSpec{4, 2}};
    c.scenarios = 3;
    c.representatives = 4;
    CHECK_THROWS_AS(run_approximation_experiment(c), std::invalid_argument);
    auto r = small_reduction();
    r.samples = 0;
    CHECK_THROWS_AS(run_reduction_experiment(r), std::invalid_argument);
  }

  TEST_CASE("cell failures are recorded") {
    auto c = small_reduction();
    c.families = {SelectionSpec{20, 10}};
    c.methods = {ReductionMethod::Red1, ReductionMethod::Red4};
    c.enumeration_cap = 100;
    c.samples = 1;
    const auto e = run_reduction_experiment(c);
    CHECK(e.failed_cells == 1);
    CHECK(e.records[0].status == "ok");
    CHECK(e.records[0].oracle == "skipped");
    CHECK(e.records[1].status == "error");
    CHECK(e.records[1].error.find("more than") != std::string::npos);
  }

  TEST_CASE("report files") {
    const auto dir = fs::temp_directory_path() / "scenred_report_test";
    fs::remove_all(dir);
    ReductionExperiment e;
    e.config.families = {LayeredGraphSpec{2, 2}};
    ReductionRecord rec;
    rec.family = "layered(L=2,W=2)";
    rec.dim = 8;
    rec.method = "Red-1";
    rec.original = 100;
    rec.selected = 80;
    rec.fraction = 0.2;
    e.records = {rec};
    e.summary = summarize_reduction(e.records, e.config.families);
    ReportOptions o;
    o.directory = dir;
    o.stem = "t";
    o.plot_script = true;
    const auto paths = emit_report(e, o);
    REQUIRE(paths.size() == 3);
    const auto records = slurp(paths[0]);
    CHECK(line_count(records) == 2);
    CHECK(slurp(paths[1]) == "L,W,dim,Red-1,variant\n2,2,8,0.2,exact\n");
    CHECK(slurp(paths[2]).find("matplotlib") != std::string::npos);

    CHECK_THROWS_AS(emit_report(ReductionExperiment{}, o), IoError);
    CHECK_THROWS_AS(emit_report(ApproximationExperiment{}, o), IoError);

    ApproximationExperiment a;
    ApproximationRecord ar;
    ar.family = "selection(n=12,p=3)";
    ar.method = "App-1/2";
    ar.beta = 2;
    ar.guarantee_t3 = std::nan("");
    a.records = {ar};
    o.plot_script = false;
    const auto ap = emit_report(a, o);
    REQUIRE(ap.size() == 1);
    const auto text = slurp(ap[0]);
    CHECK(line_count(text) == 2);
    CHECK(text.find(",2,,") != std::string::npos);
    fs::remove_all(dir);
  }
}
