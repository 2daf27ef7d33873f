#include "scenred/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "Highs.h"
#include "scenred/core.hpp"

namespace scenred {

int Model::add_variable(double lower, double upper, double objective, VarType type) {
  if (type == VarType::Binary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  lower_.push_back(lower);
  upper_.push_back(upper);
  objective_.push_back(objective);
  type_.push_back(type);
  return static_cast<int>(lower_.size()) - 1;
}

int Model::add_constraint(std::vector<Term> terms, Relation relation, double rhs) {
  for (const auto& t : terms) {
    if (t.var < 0 || static_cast<std::size_t>(t.var) >= lower_.size()) {
      throw std::out_of_range("constraint references undeclared variable " + std::to_string(t.var));
    }
  }
  row_terms_.push_back(std::move(terms));
  row_rel_.push_back(relation);
  row_rhs_.push_back(rhs);
  return static_cast<int>(row_rel_.size()) - 1;
}

void Model::set_objective(int var, double coef) { objective_.at(static_cast<std::size_t>(var)) = coef; }

void Model::set_variable_bounds(int var, double lower, double upper) {
  lower_.at(static_cast<std::size_t>(var)) = lower;
  upper_.at(static_cast<std::size_t>(var)) = upper;
}

void Model::set_start(std::vector<double> values) {
  if (values.size() != lower_.size()) {
    throw std::invalid_argument("start vector length does not match variable count");
  }
  start_ = std::move(values);
}

bool Model::has_binaries() const {
  return std::any_of(type_.begin(), type_.end(), [](VarType t) { return t == VarType::Binary; });
}

double Model::evaluate(const std::vector<double>& primal) const {
  double v = 0.0;
  for (std::size_t j = 0; j < objective_.size(); ++j) v += objective_[j] * primal.at(j);
  return v;
}

double Model::max_violation(const std::vector<double>& primal) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    const double x = primal.at(j);
    worst = std::max({worst, lower_[j] - x, x - upper_[j]});
    if (type_[j] == VarType::Binary) worst = std::max(worst, std::min(std::abs(x), std::abs(1.0 - x)));
  }
  for (std::size_t r = 0; r < row_terms_.size(); ++r) {
    double lhs = 0.0;
    for (const auto& t : row_terms_[r]) lhs += t.coef * primal[static_cast<std::size_t>(t.var)];
    const double d = lhs - row_rhs_[r];
    switch (row_rel_[r]) {
      case Relation::LessEqual: worst = std::max(worst, d); break;
      case Relation::GreaterEqual: worst = std::max(worst, -d); break;
      case Relation::Equal: worst = std::max(worst, std::abs(d)); break;
    }
  }
  return worst;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "NumericalFailure";
}

SolverParams SolverParams::from_environment() {
  SolverParams p;
  if (const char* tl = std::getenv("SCENRED_TIME_LIMIT"); tl != nullptr && *tl != '\0') {
    char* end = nullptr;
    const double v = std::strtod(tl, &end);
    if (end != tl && v > 0.0) p.time_limit = v;
  }
  if (const char* be = std::getenv("SCENRED_SOLVER"); be != nullptr && *be != '\0') {
    p.backend = be;
  }
  return p;
}

std::vector<std::string> available_backends() { return {"highs"}; }

namespace {

HighsLp to_highs(const Model& model, bool keep_integrality) {
  HighsLp lp;
  const auto n = static_cast<HighsInt>(model.num_variables());
  const auto m = static_cast<HighsInt>(model.num_constraints());
  lp.num_col_ = n;
  lp.num_row_ = m;
  lp.sense_ = model.sense() == ObjSense::Maximize ? ::ObjSense::kMaximize : ::ObjSense::kMinimize;
  lp.col_cost_ = model.objective();
  lp.col_lower_.resize(static_cast<std::size_t>(n));
  lp.col_upper_.resize(static_cast<std::size_t>(n));
  for (HighsInt j = 0; j < n; ++j) {
    const auto u = static_cast<std::size_t>(j);
    lp.col_lower_[u] = std::isinf(model.lower()[u]) ? -kHighsInf : model.lower()[u];
    lp.col_upper_[u] = std::isinf(model.upper()[u]) ? kHighsInf : model.upper()[u];
  }
  lp.row_lower_.resize(static_cast<std::size_t>(m));
  lp.row_upper_.resize(static_cast<std::size_t>(m));
  auto& a = lp.a_matrix_;
  a.format_ = MatrixFormat::kRowwise;
  a.num_col_ = n;
  a.num_row_ = m;
  a.start_.assign(1, 0);
  for (HighsInt r = 0; r < m; ++r) {
    const auto u = static_cast<std::size_t>(r);
    const double rhs = model.rhs()[u];
    switch (model.relations()[u]) {
      case Relation::LessEqual: lp.row_lower_[u] = -kHighsInf; lp.row_upper_[u] = rhs; break;
      case Relation::GreaterEqual: lp.row_lower_[u] = rhs; lp.row_upper_[u] = kHighsInf; break;
      case Relation::Equal: lp.row_lower_[u] = rhs; lp.row_upper_[u] = rhs; break;
    }
    // Merge repeated variables within a row.
    auto terms = model.rows()[u];
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.var < y.var; });
    for (std::size_t t = 0; t < terms.size();) {
      double coef = 0.0;
      const int var = terms[t].var;
      for (; t < terms.size() && terms[t].var == var; ++t) coef += terms[t].coef;
      if (coef != 0.0) {
        a.index_.push_back(var);
        a.value_.push_back(coef);
      }
    }
    a.start_.push_back(static_cast<HighsInt>(a.index_.size()));
  }
  if (keep_integrality && model.has_binaries()) {
    lp.integrality_.resize(static_cast<std::size_t>(n), HighsVarType::kContinuous);
    for (HighsInt j = 0; j < n; ++j) {
      if (model.types()[static_cast<std::size_t>(j)] == VarType::Binary) {
        lp.integrality_[static_cast<std::size_t>(j)] = HighsVarType::kInteger;
      }
    }
  }
  return lp;
}

void configure(Highs& highs, const SolverParams& params) {
  highs.setOptionValue("output_flag", false);
  highs.setOptionValue("threads", 1);
  highs.setOptionValue("random_seed", 0);
  highs.setOptionValue("time_limit", params.time_limit);
  highs.setOptionValue("mip_rel_gap", params.mip_rel_gap);
  highs.setOptionValue("primal_feasibility_tolerance", std::min(params.feasibility_tol, 1e-7));
  highs.setOptionValue("dual_feasibility_tolerance", std::min(params.feasibility_tol, 1e-7));
  highs.setOptionValue("mip_feasibility_tolerance", params.feasibility_tol);
}

SolveOutcome run(const Model& model, const SolverParams& params, bool integer) {
  if (params.backend != "highs") {
    throw BackendUnavailable("solver backend '" + params.backend + "' is not compiled in");
  }
  const auto started = std::chrono::steady_clock::now();
  SolveOutcome out;
  auto finish = [&]() {
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
  };
  if (model.num_variables() == 0) {
    // HiGHS rejects empty models; decide feasibility of constant rows here.
    bool feasible = true;
    for (std::size_t r = 0; r < model.num_constraints(); ++r) {
      const double rhs = model.rhs()[r];
      switch (model.relations()[r]) {
        case Relation::LessEqual: feasible &= 0.0 <= rhs + params.feasibility_tol; break;
        case Relation::GreaterEqual: feasible &= 0.0 >= rhs - params.feasibility_tol; break;
        case Relation::Equal: feasible &= std::abs(rhs) <= params.feasibility_tol; break;
      }
    }
    out.status = feasible ? SolveStatus::Optimal : SolveStatus::Infeasible;
    return finish();
  }

  Highs highs;
  configure(highs, params);
  HighsLp lp = to_highs(model, integer);
  if (highs.passModel(std::move(lp)) == HighsStatus::kError) {
    throw SolverFailure("backend rejected model");
  }
  if (integer && model.start()) {
    HighsSolution start;
    start.col_value = *model.start();
    start.value_valid = true;
    highs.setSolution(start);
  }
  highs.run();
  HighsModelStatus status = highs.getModelStatus();
  if (status == HighsModelStatus::kUnboundedOrInfeasible) {
    highs.setOptionValue("presolve", "off");
    highs.run();
    status = highs.getModelStatus();
  }
  const HighsInfo& info = highs.getInfo();
  switch (status) {
    case HighsModelStatus::kOptimal: out.status = SolveStatus::Optimal; break;
    case HighsModelStatus::kInfeasible: out.status = SolveStatus::Infeasible; break;
    case HighsModelStatus::kUnbounded: out.status = SolveStatus::Unbounded; break;
    case HighsModelStatus::kUnboundedOrInfeasible:
      // Presolve off resolves this for LPs; a MILP left here has an
      // unbounded relaxation, which for our bounded binaries means an
      // unbounded continuous part.
      out.status = SolveStatus::Unbounded;
      break;
    case HighsModelStatus::kTimeLimit:
    case HighsModelStatus::kIterationLimit:
    case HighsModelStatus::kSolutionLimit:
    case HighsModelStatus::kInterrupt:
      out.status = SolveStatus::TimeLimit;
      break;
    default: out.status = SolveStatus::NumericalFailure; break;
  }
  const bool has_solution = info.primal_solution_status == kSolutionStatusFeasible;
  if (out.status == SolveStatus::Optimal ||
      (out.status == SolveStatus::TimeLimit && has_solution)) {
    const HighsSolution& sol = highs.getSolution();
    out.primal = sol.col_value;
    if (integer) {
      for (std::size_t j = 0; j < out.primal.size(); ++j) {
        if (model.types()[j] == VarType::Binary) out.primal[j] = std::round(out.primal[j]);
      }
    }
    out.objective = model.evaluate(out.primal);
    out.bound = integer ? info.mip_dual_bound : out.objective;
    if (!integer && out.status == SolveStatus::Optimal && sol.dual_valid) {
      out.row_duals = sol.row_dual;
    }
  } else if (out.status == SolveStatus::Optimal) {
    out.status = SolveStatus::NumericalFailure;
  }
  return finish();
}

}  // namespace

SolveOutcome solve_lp(const Model& model, const SolverParams& params) {
  if (model.has_binaries()) {
    throw std::invalid_argument("solve_lp called on a model with binary variables");
  }
  return run(model, params, false);
}

SolveOutcome solve_milp(const Model& model, const SolverParams& params) {
  return run(model, params, true);
}

}  // namespace scenred
