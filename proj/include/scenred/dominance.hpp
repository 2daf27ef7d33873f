#ifndef SCENRED_DOMINANCE_HPP
#define SCENRED_DOMINANCE_HPP

#include <optional>
#include <span>
#include <vector>

#include "scenred/core.hpp"
#include "scenred/problems.hpp"

namespace scenred {

/// c' >= c in every component.
bool dominates_componentwise(std::span<const double> c_prime, std::span<const double> c);

/// Exists mu in the simplex with sum_k mu_k c^k >= c (LP feasibility).
bool dominates_convex(std::span<const double> c, const ScenarioSet& s);

/// y in the cone: y = sum lambda_g g over generators (lambda >= 0), or
/// y in { x >= 0 : exists w, lambda >= 0 with A x + B w >= lambda b }.
bool cone_membership(std::span<const double> y, const ConeDescription& cone);

/// c' - c in the dual cone K*. With generators: (c' - c)^T g >= 0 for every
/// g. With an LP form: exists z >= 0, c' - c >= A^T z, B^T z = 0, b^T z >= 0.
bool dominates_dual_cone(std::span<const double> c_prime, std::span<const double> c,
                         const ConeDescription& cone);

/// Witness that sum_k mu_k c^k - c lies in K* for K = conic(X):
/// A^T pi <= sum_k mu_k c^k - c, B^T pi = 0, b^T pi >= 0, pi >= 0.
struct DominanceCertificate {
  IndexSet candidates;  // scenario indices the weights refer to
  Vector weights;       // mu, on the simplex
  Vector dual;          // pi, one entry per row of the description
};

/// Searches mu over the listed candidate indices of `u`. Without a
/// description the cone is R^n_+ and the dual vector is empty.
std::optional<DominanceCertificate> convex_dual_cone_dominance(
    std::span<const double> c, const ScenarioSet& u, const IndexSet& candidates,
    const FeasibleSetDescription* x);

/// Residual of a certificate against its constraints (max violation).
double certificate_violation(const DominanceCertificate& cert, std::span<const double> c,
                             const ScenarioSet& u, const FeasibleSetDescription* x);

/// Indices of scenarios no other scenario dominates componentwise; exact
/// ties keep the lowest index.
IndexSet pareto_filter(const ScenarioSet& u);

/// Pareto indices that no convex combination of the remaining Pareto
/// scenarios dominates.
IndexSet supported_filter(const ScenarioSet& u);

/// For every x: max over U' of f(x, c) equals max over U within
/// 1e-9 * (1 + |value|).
bool sufficiency_oracle(const ScenarioSet& reduced, const ScenarioSet& u,
                        const std::vector<Vector>& solutions,
                        const ObjectiveFn& f = linear_objective);

/// Enumerates X (capped) then runs the oracle.
bool sufficiency_oracle(const ScenarioSet& reduced, const ScenarioSet& u,
                        const FeasibleSetDescription& x, std::size_t cap = kDefaultEnumerationCap,
                        const ObjectiveFn& f = linear_objective);

enum class SufficiencyType { I, II, III, IV };

/// Brute-force check of the sufficiency criteria over enumerated solutions.
/// Types III and IV use f (the generalized criteria); I and II are
/// objective-free. Linear f makes III/IV the classic criteria.
bool satisfies_sufficiency_type(const ScenarioSet& reduced, const ScenarioSet& u,
                                SufficiencyType type, const std::vector<Vector>& solutions,
                                const ObjectiveFn& f = linear_objective);

}  // namespace scenred

#endif  // SCENRED_DOMINANCE_HPP
