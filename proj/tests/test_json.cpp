#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "scenred/json_io.hpp"
#include "scenred/problems.hpp"
#include "support.hpp"

using namespace scenred;

TEST_SUITE("json") {
  TEST_CASE("scenario sets round-trip bit-exactly") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto u = testing::random_set(5, 7, seed);
      const auto text = to_json(u).dump();
      const auto back = scenario_set_from_json(Json::parse(text));
      CHECK(back == u);
      CHECK(validate_scenario_set(back.rows()) == u);
    }
    const ScenarioSet labelled({{1, 2}, {3, 4}}, {"a", "b"});
    const auto j = to_json(labelled);
    CHECK(j.at("dim") == 2);
    CHECK(scenario_set_from_json(j) == labelled);
  }

  TEST_CASE("malformed scenario sets") {
    CHECK_THROWS_AS(scenario_set_from_json(Json::parse(R"({"scenarios": [[1, 0], [0, 1, 2]]})")), DimensionMismatch);
    CHECK_THROWS_AS(scenario_set_from_json(Json::parse(R"({"scenarios": [[-1, 0]]})")), NegativeComponent);
    CHECK_THROWS_AS(scenario_set_from_json(Json::parse(R"({"scenarios": "x"})")), IoError);
    CHECK_THROWS_AS(scenario_set_from_json(Json::parse(R"({"dim": 3, "scenarios": [[1, 0]]})")), DimensionMismatch);
  }

  TEST_CASE("family specs") {
    const auto sel = Json::parse(R"({"family": "selection", "n": 8, "p": 3})");
    CHECK(family_from_json(sel) == FamilySpec{SelectionSpec{8, 3}});
    const auto lay = Json::parse(R"({"family": "layered_sp", "L": 2, "W": 3})");
    CHECK(family_from_json(lay) == FamilySpec{LayeredGraphSpec{2, 3}});
    CHECK(to_json(FamilySpec{LayeredGraphSpec{2, 3}}) == lay);
    CHECK(description_from_json(lay).dim() == 15);
    CHECK_THROWS_AS(family_from_json(Json::parse(R"({"family": "tree"})")), IoError);
  }

  TEST_CASE("custom descriptions") {
    Matrix a(1, 3, 1.0);
    const FeasibleSetDescription x(a, Matrix(1, 0), {2.0}, false);
    const auto j = to_json(x);
    CHECK(j.at("family") == "custom");
    const auto back = description_from_json(j);
    CHECK(back.a() == x.a());
    CHECK(back.rhs() == x.rhs());
    CHECK(back.integral() == x.integral());
    CHECK(enumerate_solutions(back).size() == 4);
  }

  TEST_CASE("records round-trip with non-finite values") {
    ApproximationRecord r;
    r.family = "layered(L=2,W=2)";
    r.method = "KMeans";
    r.beta = 1.5;
    r.guarantee_t3 = std::nan("");
    r.guarantee_t4 = 1.25;
    r.ub_ratio = kInfinity;
    const auto j = to_json(r);
    CHECK(j.at("guarantee_t3").is_null());
    CHECK(j.at("ub_ratio") == "inf");
    const auto back = approximation_record_from_json(Json::parse(j.dump()));
    CHECK(std::isnan(back.guarantee_t3));
    CHECK(std::isinf(back.ub_ratio));
    CHECK(back.beta == 1.5);

    ReductionRecord rr;
    rr.family = "selection(n=8,p=3)";
    rr.method = "Red-3";
    rr.fraction = 0.75;
    rr.oracle = "pass";
    const auto rb = reduction_record_from_json(to_json(rr));
    CHECK(rb.fraction == 0.75);
    CHECK(rb.oracle == "pass");
  }

  TEST_CASE("results serialize") {
    ReductionResult r;
    r.method = ReductionMethod::Red3;
    r.original_size = 4;
    r.selected = {1};
    r.assignment.assign(4, {{1}, {1.0}, {}});
    const auto j = to_json(r);
    CHECK(j.at("method") == "Red-3");
    CHECK(j.at("fraction") == 0.75);
    CHECK(j.at("selected") == Json::array({1}));
  }

  TEST_CASE("files") {
    const auto p = std::filesystem::temp_directory_path() / "scenred_json_test.json";
    write_json_file(p, to_json(testing::set_of({{1, 2}})));
    CHECK(scenario_set_from_json(read_json_file(p)) == testing::set_of({{1, 2}}));
    {
      std::ofstream f(p);
      f << "{oops";
    }
    CHECK_THROWS_AS(read_json_file(p), IoError);
    std::filesystem::remove(p);
    CHECK_THROWS_AS(read_json_file(p), IoError);
  }
}
