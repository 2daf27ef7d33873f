#include <cmath>

#include "doctest.h"
#include "scenred/core.hpp"
#include "scenred/rng.hpp"
#include "scenred/solver.hpp"

using namespace scenred;

TEST_SUITE("solver") {
  TEST_CASE("lp examples") {
    SUBCASE("bounded maximum") {
      Model m;
      const int x = m.add_variable(0, kInfinity, 1.0);
      m.add_constraint({{x, 1.0}}, Relation::LessEqual, 3);
      m.set_sense(ObjSense::Maximize);
      const auto r = solve_lp(m);
      REQUIRE(r.optimal());
      CHECK(r.objective == doctest::Approx(3));
      CHECK(r.primal[0] == doctest::Approx(3));
    }
    SUBCASE("unbounded") {
      Model m;
      m.add_variable(0, kInfinity, 1.0);
      m.set_sense(ObjSense::Maximize);
      CHECK(solve_lp(m).status == SolveStatus::Unbounded);
    }
    SUBCASE("infeasible") {
      Model m;
      const int x = m.add_variable(0, kInfinity, 0.0);
      m.add_constraint({{x, 1.0}}, Relation::LessEqual, -1);
      const auto r = solve_lp(m);
      CHECK(r.status == SolveStatus::Infeasible);
      CHECK_FALSE(r.has_primal());
    }
  }

  TEST_CASE("milp examples") {
    SUBCASE("cover with two binaries") {
      Model m;
      const int a = m.add_variable(0, 1, 1.0, VarType::Binary);
      const int b = m.add_variable(0, 1, 1.0, VarType::Binary);
      m.add_constraint({{a, 1}, {b, 1}}, Relation::GreaterEqual, 1);
      const auto r = solve_milp(m);
      REQUIRE(r.optimal());
      CHECK(r.objective == doctest::Approx(1));
    }
    SUBCASE("infeasible cover") {
      Model m;
      const int a = m.add_variable(0, 1, 1.0, VarType::Binary);
      m.add_constraint({{a, 1}}, Relation::GreaterEqual, 2);
      CHECK(solve_milp(m).status == SolveStatus::Infeasible);
    }
    SUBCASE("an lp passed to the milp path") {
      Model m;
      const int x = m.add_variable(0, kInfinity, 2.0);
      const int y = m.add_variable(0, kInfinity, 3.0);
      m.add_constraint({{x, 1}, {y, 1}}, Relation::GreaterEqual, 1.5);
      m.add_constraint({{x, 1}}, Relation::LessEqual, 1);
      const auto lp = solve_lp(m);
      const auto mip = solve_milp(m);
      REQUIRE(lp.optimal());
      REQUIRE(mip.optimal());
      CHECK(lp.objective == doctest::Approx(mip.objective).epsilon(1e-6));
      CHECK(lp.objective == doctest::Approx(3.5));
    }
  }

  TEST_CASE("binary models are rejected by solve_lp") {
    Model m;
    m.add_variable(0, 1, 1.0, VarType::Binary);
    CHECK_THROWS_AS(solve_lp(m), std::invalid_argument);
  }

  TEST_CASE("unknown backend") {
    Model m;
    m.add_variable(0, 1, 1.0);
    SolverParams p;
    p.backend = "nonesuch";
    CHECK_THROWS_AS(solve_lp(m, p), BackendUnavailable);
    CHECK(available_backends() == std::vector<std::string>{"highs"});
  }

  TEST_CASE("constraints must reference declared variables") {
    Model m;
    m.add_variable(0, 1);
    CHECK_THROWS_AS(m.add_constraint({{3, 1.0}}, Relation::Equal, 0), std::out_of_range);
  }

  TEST_CASE("duals follow the documented sign convention") {
    // min x + 2y, x + y >= 2, x <= 1: the >= row binds with dual 2.
    Model m;
    const int x = m.add_variable(0, kInfinity, 1.0);
    const int y = m.add_variable(0, kInfinity, 2.0);
    m.add_constraint({{x, 1}, {y, 1}}, Relation::GreaterEqual, 2);
    m.add_constraint({{x, 1}}, Relation::LessEqual, 1);
    const auto r = solve_lp(m);
    REQUIRE(r.optimal());
    REQUIRE(r.row_duals.size() == 2);
    CHECK(r.objective == doctest::Approx(3));
    CHECK(r.row_duals[0] == doctest::Approx(2));
    CHECK(r.row_duals[1] == doctest::Approx(-1));

    Model mx = m;
    mx.set_sense(ObjSense::Maximize);
    mx.set_objective(x, -1.0);
    mx.set_objective(y, -2.0);
    const auto rx = solve_lp(mx);
    REQUIRE(rx.optimal());
    CHECK(rx.objective == doctest::Approx(-3));
    CHECK(rx.row_duals[0] == doctest::Approx(-2));
  }

  TEST_CASE("integral relaxations agree and objectives recompute") {
    // Assignment polytopes are integral, so LP and MILP values coincide.
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 4;
      Model lp, mip;
      std::vector<double> cost(n * n);
      for (auto& c : cost) c = rng.uniform01();
      for (int v = 0; v < n * n; ++v) {
        lp.add_variable(0, 1, cost[v]);
        mip.add_variable(0, 1, cost[v], VarType::Binary);
      }
      for (int i = 0; i < n; ++i) {
        std::vector<Term> row, col;
        for (int j = 0; j < n; ++j) {
          row.push_back({i * n + j, 1});
          col.push_back({j * n + i, 1});
        }
        for (auto* m : {&lp, &mip}) {
          m->add_constraint(row, Relation::Equal, 1);
          m->add_constraint(col, Relation::Equal, 1);
        }
      }
      const auto a = solve_lp(lp);
      const auto b = solve_milp(mip);
      REQUIRE(a.optimal());
      REQUIRE(b.optimal());
      CHECK(std::abs(a.objective - b.objective) <= 1e-6);
      CHECK(std::abs(lp.evaluate(a.primal) - a.objective) <= 1e-6);
      CHECK(std::abs(mip.evaluate(b.primal) - b.objective) <= 1e-6);
      CHECK(mip.max_violation(b.primal) <= 1e-6);
    }
  }

  TEST_CASE("mip start is accepted") {
    Model m;
    const int a = m.add_variable(0, 1, 1.0, VarType::Binary);
    const int b = m.add_variable(0, 1, 1.0, VarType::Binary);
    m.add_constraint({{a, 1}, {b, 1}}, Relation::GreaterEqual, 1);
    m.set_start({1.0, 1.0});
    const auto r = solve_milp(m);
    REQUIRE(r.optimal());
    CHECK(r.objective == doctest::Approx(1));
  }

  TEST_CASE("time limit comes from the environment") {
    setenv("SCENRED_TIME_LIMIT", "12.5", 1);
    CHECK(SolverParams::from_environment().time_limit == doctest::Approx(12.5));
    unsetenv("SCENRED_TIME_LIMIT");
    CHECK(SolverParams::from_environment().time_limit == doctest::Approx(300));
  }
}
