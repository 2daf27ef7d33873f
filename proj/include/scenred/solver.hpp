#ifndef SCENRED_SOLVER_HPP
#define SCENRED_SOLVER_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace scenred {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarType { Continuous, Binary };
enum class ObjSense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };

struct Term {
  int var;
  double coef;
};

/// Backend-neutral LP/MILP container. Variables and rows are referenced by
/// the dense integer ids returned on creation.
class Model {
 public:
  int add_variable(double lower, double upper, double objective = 0.0,
                   VarType type = VarType::Continuous);
  /// Throws std::out_of_range if a term references an undeclared variable.
  int add_constraint(std::vector<Term> terms, Relation relation, double rhs);

  void set_sense(ObjSense sense) { sense_ = sense; }
  void set_objective(int var, double coef);
  void set_variable_bounds(int var, double lower, double upper);
  /// Full-length primal vector used as a MIP start; ignored by LP solves.
  void set_start(std::vector<double> values);

  std::size_t num_variables() const { return lower_.size(); }
  std::size_t num_constraints() const { return row_rel_.size(); }
  bool has_binaries() const;

  ObjSense sense() const { return sense_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<VarType>& types() const { return type_; }
  const std::vector<std::vector<Term>>& rows() const { return row_terms_; }
  const std::vector<Relation>& relations() const { return row_rel_; }
  const std::vector<double>& rhs() const { return row_rhs_; }
  const std::optional<std::vector<double>>& start() const { return start_; }

  /// Objective value of a primal vector under this model.
  double evaluate(const std::vector<double>& primal) const;
  /// Largest absolute violation of rows and bounds (and integrality for
  /// binaries) by a primal vector.
  double max_violation(const std::vector<double>& primal) const;

 private:
  ObjSense sense_ = ObjSense::Minimize;
  std::vector<double> lower_, upper_, objective_;
  std::vector<VarType> type_;
  std::vector<std::vector<Term>> row_terms_;
  std::vector<Relation> row_rel_;
  std::vector<double> row_rhs_;
  std::optional<std::vector<double>> start_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit, NumericalFailure };

std::string to_string(SolveStatus status);

struct SolveOutcome {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;
  /// Present when status is Optimal, or TimeLimit with an incumbent.
  std::vector<double> primal;
  /// Row duals, LP solves at Optimal only. Sign convention: for a
  /// minimisation, a binding >= row has a nonnegative dual; maximisation
  /// flips the sign.
  std::vector<double> row_duals;
  /// Best bound at termination (MILP); equals objective for LP optima.
  double bound = 0.0;
  double wall_seconds = 0.0;

  bool has_primal() const { return !primal.empty(); }
  bool optimal() const { return status == SolveStatus::Optimal; }
};

struct SolverParams {
  double feasibility_tol = 1e-6;
  double mip_rel_gap = 1e-6;
  double time_limit = 300.0;  // seconds, per model
  std::string backend = "highs";

  /// Defaults overridden by SCENRED_TIME_LIMIT and SCENRED_SOLVER.
  static SolverParams from_environment();
};

/// Names of compiled-in backends.
std::vector<std::string> available_backends();

/// Throws std::invalid_argument if the model has binary variables and
/// BackendUnavailable if params.backend is not compiled in.
SolveOutcome solve_lp(const Model& model, const SolverParams& params = SolverParams::from_environment());
SolveOutcome solve_milp(const Model& model, const SolverParams& params = SolverParams::from_environment());

}  // namespace scenred

#endif  // SCENRED_SOLVER_HPP
