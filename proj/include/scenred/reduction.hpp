#ifndef SCENRED_REDUCTION_HPP
#define SCENRED_REDUCTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "scenred/core.hpp"
#include "scenred/problems.hpp"
#include "scenred/solver.hpp"

namespace scenred {

enum class ReductionMethod { Red1, Red2, Red3, Red4, Red4S };

std::string to_string(ReductionMethod method);
/// Accepts "Red-1", "red1", "Red4S", ... Throws std::invalid_argument.
ReductionMethod parse_reduction_method(const std::string& name);

/// How scenario j is covered by the selected set.
///   Red-1, Red-3: one source with weight 1.
///   Red-2, Red-4S: convex weights over sources.
///   Red-4: per_solution[s] is the covering index for enumerated solution s.
struct ScenarioAssignment {
  IndexSet sources;
  Vector weights;
  IndexSet per_solution;
};

struct ReductionResult {
  ReductionMethod method = ReductionMethod::Red1;
  std::size_t original_size = 0;
  IndexSet selected;  // sorted
  std::vector<ScenarioAssignment> assignment;  // one per original scenario
  std::vector<Vector> dual_certificates;       // pi^j, Red-3 / Red-4S only
  SolveStatus status = SolveStatus::Optimal;
  double wall_seconds = 0.0;
  // Notes such as "core_shortcut", "milp", "filter", "time_limit",
  // "certificate_repaired".
  std::vector<std::string> flags;

  double fraction() const {
    return original_size == 0 ? 0.0
                              : 1.0 - static_cast<double>(selected.size()) / static_cast<double>(original_size);
  }
  bool has_flag(const std::string& f) const;
};

struct ReductionOptions {
  SolverParams params = SolverParams::from_environment();
  /// Skip the combinatorial shortcuts and always build the full model.
  bool force_milp = false;
  /// Feasible subset used as a MIP start.
  std::optional<IndexSet> warm_start;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
};

/// Smallest set such that every scenario is componentwise dominated by a
/// member. use_milp solves the assignment model; otherwise the Pareto filter.
ReductionResult reduce_type1(const ScenarioSet& u, bool use_milp, const ReductionOptions& opts = {});

/// Smallest set such that every scenario is dominated by a convex
/// combination of members. use_milp solves the model with continuous
/// assignment weights; otherwise the supported-point filter.
ReductionResult reduce_type2(const ScenarioSet& u, bool use_milp, const ReductionOptions& opts = {});

/// Smallest set with a single member c^k per scenario such that
/// c^k - c^j is in the dual cone of conic(X). Minimal when X.integral().
///
/// Computes the pairwise dominance relation (from X's points when the
/// description is integral and enumerable, from the dual LP otherwise) and
/// then solves the covering model. Every assignment gets a dual certificate.
ReductionResult reduce_type3(const ScenarioSet& u, const FeasibleSetDescription& x,
                             const ReductionOptions& opts = {});

/// The same set from the single MILP with binary lambda, mu and continuous
/// duals pi^j. Intended for small instances.
ReductionResult reduce_type3_literal(const ScenarioSet& u, const FeasibleSetDescription& x,
                                     const ReductionOptions& opts = {});

/// Smallest set such that for every scenario j and every listed solution x
/// some member k has (c^k)^T x >= (c^j)^T x. Solved as set cover over (j, x).
ReductionResult reduce_type4_exact(const ScenarioSet& u, const std::vector<Vector>& solutions,
                                   const ReductionOptions& opts = {});

/// Literal per-solution assignment model (binary mu^x_jk). Small instances only.
ReductionResult reduce_type4_literal(const ScenarioSet& u, const std::vector<Vector>& solutions,
                                     const ReductionOptions& opts = {});

/// Relaxed type-(iv) subset: continuous mu over the selection plus dual
/// certificates. Always sufficient, not always minimal.
ReductionResult reduce_type4_approx(const ScenarioSet& u, const FeasibleSetDescription& x,
                                    const ReductionOptions& opts = {});

/// Dispatch by method. Red-4 enumerates X with opts.enumeration_cap.
ReductionResult reduce(ReductionMethod method, const ScenarioSet& u, const FeasibleSetDescription& x,
                       const ReductionOptions& opts = {});

/// Structural checks on a result: nonempty sorted selection, one assignment
/// per scenario referencing selected indices, weights on the simplex.
/// Returns an empty string when everything holds, else a description.
std::string check_reduction_result(const ReductionResult& r);

}  // namespace scenred

#endif  // SCENRED_REDUCTION_HPP
