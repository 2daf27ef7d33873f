#ifndef SCENRED_APPROXIMATION_HPP
#define SCENRED_APPROXIMATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenred/core.hpp"
#include "scenred/problems.hpp"
#include "scenred/solver.hpp"

namespace scenred {

enum class ApproxMethod { App12, App3, App4, KMeans, ClusterRepresent };

std::string to_string(ApproxMethod method);
/// Accepts "App-1/2", "App12", "App-3", "App4", "KMeans", "ClusterRepresent"...
ApproxMethod parse_approx_method(const std::string& name);

struct TraceEntry {
  double t = 0.0;
  double improvement = 0.0;
};

struct AlternatingOpts {
  std::size_t starts = 10;
  std::size_t max_iterations = 100;
  double tolerance = 1e-6;  // stop when t improves by less
  std::uint64_t seed = 0;
  SolverParams params = SolverParams::from_environment();
  /// Extra starting hull-weight matrices (K x N), tried before the generated
  /// ones.
  std::vector<Matrix> initial_weights;
};

struct CcgOpts {
  AlternatingOpts alternating;
  std::size_t max_iterations = 500;
  double threshold = 1e-6;  // subproblem values >= -threshold terminate
  /// Subproblems scan X directly when it has an enumerator and at most this
  /// many points; otherwise they are solved as epigraph MILPs.
  std::size_t enumeration_limit = 20000;
};

struct ApproximationResult {
  ApproxMethod method = ApproxMethod::App12;
  ScenarioSet representatives;  // K vectors, each in conv(U)
  Matrix hull_weights;          // K x N, rows on the simplex
  double t = 1.0;
  double beta = 1.0;  // 1 / t
  /// N x K convex weights for App-1/2 and App-3; for cluster-then-represent
  /// a 0/1 cluster indicator. Empty for App-4 (see solution_assignment).
  Matrix assignment;
  /// App-4: final candidate set X' and, per candidate, the representative
  /// attaining max_k c_hat^k' x.
  std::vector<Vector> candidate_solutions;
  IndexSet solution_assignment;
  std::vector<TraceEntry> trace;
  IndexSet cluster_of;  // K-means based methods: cluster per scenario
  SolveStatus status = SolveStatus::Optimal;
  bool iteration_limit = false;
  double wall_seconds = 0.0;
};

/// Robust problems over one X, scanning an enumeration when it is small
/// enough and falling back to MILPs.
class RobustOracle {
 public:
  RobustOracle(const FeasibleSetDescription& x, const SolverParams& params,
               std::size_t enumeration_limit = 20000);

  bool enumerated() const { return solutions_.has_value(); }
  const FeasibleSetDescription& description() const { return *x_; }

  /// min over X of max over u of c^T x.
  RobustSolution robust(const ScenarioSet& u) const;
  /// min over X of max_k (c_hat^k - t c)^T x.
  RobustSolution shifted(const ScenarioSet& c_hat, double t, std::span<const double> c) const;

 private:
  const FeasibleSetDescription* x_;
  SolverParams params_;
  std::optional<std::vector<Vector>> solutions_;
};

/// Best guarantee of type (i'): max t with t c^j <= sum_k mu_jk c_hat^k.
/// Alternates between the assignment block and the hull-weight block.
ApproximationResult approx_type12(const ScenarioSet& u, std::size_t k, const AlternatingOpts& opts = {});

/// Type (iii'): the assignment constraint holds in the dual cone of conic(X),
/// with duals pi^j per scenario. Without opts.initial_weights the App-1/2
/// optimum is computed and used as the first start.
ApproximationResult approx_type3(const ScenarioSet& u, const FeasibleSetDescription& x, std::size_t k,
                                 const AlternatingOpts& opts = {});

/// Type (iv'): column-and-constraint generation over candidate solutions.
/// Starts: opts.alternating.initial_weights (or the App-1/2 optimum when
/// none are given) and the K-means clustering. The answer is never worse
/// than the Guarantee-T4 value of any start.
ApproximationResult approx_type4_ccg(const ScenarioSet& u, const FeasibleSetDescription& x, std::size_t k,
                                     const CcgOpts& opts = {});

/// (i') guarantee of a fixed representative set.
double evaluate_guarantee_t12(const ScenarioSet& reps, const ScenarioSet& u,
                              const SolverParams& params = SolverParams::from_environment());

/// (iii') guarantee of a fixed representative set: one LP in (t, mu, pi).
double evaluate_guarantee_t3(const ScenarioSet& reps, const ScenarioSet& u, const FeasibleSetDescription& x,
                             const SolverParams& params = SolverParams::from_environment());

struct T4Guarantee {
  double beta = 1.0;
  double t = 1.0;
  std::size_t iterations = 0;
  std::vector<Vector> candidate_solutions;
  bool iteration_limit = false;
};

/// (iv') guarantee of a fixed representative set by constraint generation.
T4Guarantee evaluate_guarantee_t4(const ScenarioSet& reps, const ScenarioSet& u,
                                  const FeasibleSetDescription& x, const CcgOpts& opts = {});
T4Guarantee evaluate_guarantee_t4(const ScenarioSet& reps, const ScenarioSet& u, const RobustOracle& oracle,
                                  const CcgOpts& opts = {});

struct KMeansClustering {
  std::vector<Vector> centroids;
  IndexSet labels;  // cluster per scenario
  std::size_t iterations = 0;
};

/// Lloyd's algorithm from a k-means++ start. Deterministic for a seed.
KMeansClustering kmeans(const ScenarioSet& u, std::size_t k, std::uint64_t seed, std::size_t max_iterations = 100);

/// K-means centroids as representatives; t is the (i') value. Callers that
/// know X evaluate Guarantee-T4 separately.
ApproximationResult kmeans_baseline(const ScenarioSet& u, std::size_t k, std::uint64_t seed,
                                    const SolverParams& params = SolverParams::from_environment());

/// Cluster with K-means, then represent each cluster by one scenario with the
/// inner method (App12 or App3; App3 needs x). beta is the worst cluster.
ApproximationResult cluster_then_represent(const ScenarioSet& u, std::size_t k, ApproxMethod inner,
                                           const FeasibleSetDescription* x, const AlternatingOpts& opts = {});
/// Same with a given clustering (labels in 0..K-1, every cluster nonempty).
ApproximationResult cluster_then_represent(const ScenarioSet& u, const IndexSet& labels, std::size_t k,
                                           ApproxMethod inner, const FeasibleSetDescription* x,
                                           const AlternatingOpts& opts = {});

/// Worst case under U of an optimal solution for the reduced set, divided by
/// the robust optimum under U. 1 when both are 0, +inf when only the optimum
/// is 0.
double ub_ratio(const ScenarioSet& reduced, const ScenarioSet& u, const RobustOracle& oracle);
double ub_ratio(const ScenarioSet& reduced, const ScenarioSet& u, const FeasibleSetDescription& x,
                const SolverParams& params = SolverParams::from_environment());

/// Largest |c_hat^k - sum_j lambda_kj c^j| over all entries.
double hull_identity_error(const ApproximationResult& r, const ScenarioSet& u);

}  // namespace scenred

#endif  // SCENRED_APPROXIMATION_HPP
