#ifndef SCENRED_PROBLEMS_HPP
#define SCENRED_PROBLEMS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "scenred/core.hpp"
#include "scenred/solver.hpp"

namespace scenred {

inline constexpr std::size_t kDefaultEnumerationCap = 200000;

/// Layered DAG: source s, L layers of W nodes, sink e. Node ids are
/// s = 0, layer l node w = 1 + l*W + w, e = L*W + 1. Arcs are ordered
/// source arcs, then layer-to-layer blocks (l, u) -> (l+1, v) in
/// lexicographic (l, u, v) order, then sink arcs.
struct LayeredGraph {
  LayeredGraphSpec spec;
  std::size_t node_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;  // (tail, head)

  std::size_t source() const { return 0; }
  std::size_t sink() const { return node_count - 1; }
  std::size_t node(std::size_t layer, std::size_t w) const { return 1 + layer * spec.width + w; }
  std::size_t source_arc(std::size_t w) const { return w; }
  std::size_t sink_arc(std::size_t w) const { return arcs.size() - spec.width + w; }
};

struct LayeredProblem {
  LayeredGraph graph;
  FeasibleSetDescription description;
};

/// Hull { x in [0,1]^n : sum x = p } as >=-rows. Throws std::invalid_argument
/// unless 1 <= p <= n.
FeasibleSetDescription selection_lp_description(SelectionSpec spec);

/// Flow polytope of unit s-e flow, equalities split into two >=-rows each.
LayeredProblem layered_graph(LayeredGraphSpec spec);

/// Description for a family tag from instance files.
FeasibleSetDescription family_description(const FamilySpec& family);

std::vector<Vector> enumerate_selection(SelectionSpec spec, std::size_t cap = kDefaultEnumerationCap);
std::vector<Vector> enumerate_paths(const LayeredGraph& graph, std::size_t cap = kDefaultEnumerationCap);
/// Deterministic listing of X (family enumerator or brute force).
std::vector<Vector> enumerate_solutions(const FeasibleSetDescription& x,
                                        std::size_t cap = kDefaultEnumerationCap);

/// Sub-instances of the layered family: s-e paths forced through the arc
/// s -> (0, u) and the arc (L-1, v) -> e, for all W^2 pairs (u, v), in
/// row-major (u, v) order.
std::vector<FeasibleSetDescription> layered_pair_instances(const LayeredProblem& problem);

struct RobustSolution {
  Vector x;
  double value = 0.0;
  std::size_t argmax = 0;
};

/// max_k f(x, c^k) with the lowest-index argmax. Throws DimensionMismatch.
std::pair<double, std::size_t> worst_case_value(std::span<const double> x, const ScenarioSet& u);

/// min over X of max over U of c^T x, as an epigraph MILP.
RobustSolution solve_robust(const FeasibleSetDescription& x, const ScenarioSet& u,
                            const SolverParams& params = SolverParams::from_environment());

/// min over X of max_k (u_hat^k - t c_j)^T x. Value may be negative. argmax
/// indexes u_hat.
RobustSolution solve_robust_shifted(const FeasibleSetDescription& x, const ScenarioSet& u_hat,
                                    double t, std::span<const double> c_j,
                                    const SolverParams& params = SolverParams::from_environment());

/// Same problem by scanning listed solutions; ties keep the earliest.
RobustSolution solve_robust_enumerated(const std::vector<Vector>& solutions, const ScenarioSet& u);

/// min c^T x over X; `integer` solves with binary x, otherwise over the LP
/// description.
double nominal_value(const FeasibleSetDescription& x, std::span<const double> c, bool integer,
                     const SolverParams& params = SolverParams::from_environment());

/// (n, alpha_X) with alpha_X = min { sum x : x in X } computed by MILP.
SelectionSpec selection_relaxation_for(const FeasibleSetDescription& x,
                                       const SolverParams& params = SolverParams::from_environment());

/// Set Cover encoding: items 0..n-1, scenario j is the indicator vector of
/// sets[j], and X = X_{n,1}. Every item must be covered by some set.
struct SetCoverInstance {
  ScenarioSet scenarios;
  FeasibleSetDescription feasible;
};
SetCoverInstance set_cover_instance(std::size_t items, const std::vector<std::vector<std::size_t>>& sets);

}  // namespace scenred

#endif  // SCENRED_PROBLEMS_HPP
