#include "scenred/dominance.hpp"

#include <algorithm>
#include <cmath>

#include "scenred/solver.hpp"

namespace scenred {

namespace {

void check_dims(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a) + " and " +
                            std::to_string(b));
  }
}

SolverParams tight_params() {
  SolverParams p = SolverParams::from_environment();
  p.feasibility_tol = 1e-9;
  return p;
}

double scale_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

bool dominates_componentwise(std::span<const double> c_prime, std::span<const double> c) {
  check_dims(c_prime.size(), c.size(), "dominates_componentwise");
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c_prime[i] < c[i]) return false;
  }
  return true;
}

std::optional<DominanceCertificate> convex_dual_cone_dominance(std::span<const double> c,
                                                               const ScenarioSet& u,
                                                               const IndexSet& candidates,
                                                               const FeasibleSetDescription* x) {
  check_dims(c.size(), u.dim(), "convex_dual_cone_dominance");
  if (x != nullptr) check_dims(x->dim(), u.dim(), "convex_dual_cone_dominance");
  if (candidates.empty()) return std::nullopt;
  const std::size_t n = u.dim();
  double scale = scale_of(c);
  for (auto k : candidates) scale = std::max(scale, scale_of(u[k]));
  const double tol = 1e-9 * (1.0 + scale);

  Model m;
  m.set_sense(ObjSense::Maximize);
  std::vector<int> mu;
  for (std::size_t k = 0; k < candidates.size(); ++k) mu.push_back(m.add_variable(0.0, kInfinity));
  std::vector<int> z;
  const std::size_t rows = x != nullptr ? x->row_count() : 0;
  for (std::size_t r = 0; r < rows; ++r) z.push_back(m.add_variable(0.0, kInfinity, x->rhs()[r]));

  // A^T z - sum_k mu_k c^k <= -c
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Term> terms;
    for (std::size_t r = 0; r < rows; ++r) {
      if (x->a()(r, i) != 0.0) terms.push_back({z[r], x->a()(r, i)});
    }
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const double v = u[candidates[k]][i];
      if (v != 0.0) terms.push_back({mu[k], -v});
    }
    m.add_constraint(std::move(terms), Relation::LessEqual, -c[i]);
  }
  if (x != nullptr) {
    for (std::size_t l = 0; l < x->aux_dim(); ++l) {
      std::vector<Term> terms;
      for (std::size_t r = 0; r < rows; ++r) {
        if (x->b_aux()(r, l) != 0.0) terms.push_back({z[r], x->b_aux()(r, l)});
      }
      m.add_constraint(std::move(terms), Relation::Equal, 0.0);
    }
  }
  {
    std::vector<Term> terms;
    for (int v : mu) terms.push_back({v, 1.0});
    m.add_constraint(std::move(terms), Relation::Equal, 1.0);
  }
  // Cap b^T z at 0: nonnegative is all we need, and the cap keeps the LP
  // bounded so a certificate is always returned.
  if (rows > 0) {
    std::vector<Term> terms;
    for (std::size_t r = 0; r < rows; ++r) {
      if (x->rhs()[r] != 0.0) terms.push_back({z[r], x->rhs()[r]});
    }
    m.add_constraint(std::move(terms), Relation::LessEqual, 0.0);
  }

  const auto out = solve_lp(m, tight_params());
  if (out.status == SolveStatus::Infeasible) return std::nullopt;
  if (!out.optimal()) {
    throw SolverFailure("dominance LP ended with status " + to_string(out.status));
  }
  if (out.objective < -tol) return std::nullopt;
  DominanceCertificate cert;
  cert.candidates = candidates;
  double total = 0.0;
  for (int v : mu) {
    const double w = std::max(0.0, out.primal[static_cast<std::size_t>(v)]);
    cert.weights.push_back(w);
    total += w;
  }
  for (auto& w : cert.weights) w /= total;
  for (int v : z) cert.dual.push_back(std::max(0.0, out.primal[static_cast<std::size_t>(v)]));
  return cert;
}

double certificate_violation(const DominanceCertificate& cert, std::span<const double> c,
                             const ScenarioSet& u, const FeasibleSetDescription* x) {
  const std::size_t n = u.dim();
  double worst = 0.0;
  double total = 0.0;
  for (double w : cert.weights) {
    worst = std::max(worst, -w);
    total += w;
  }
  worst = std::max(worst, std::abs(total - 1.0));
  Vector diff(n, 0.0);
  for (std::size_t k = 0; k < cert.candidates.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) diff[i] += cert.weights[k] * u[cert.candidates[k]][i];
  }
  for (std::size_t i = 0; i < n; ++i) diff[i] -= c[i];
  if (x == nullptr) {
    for (double d : diff) worst = std::max(worst, -d);
    return worst;
  }
  const std::size_t rows = x->row_count();
  double btz = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    worst = std::max(worst, -cert.dual[r]);
    btz += x->rhs()[r] * cert.dual[r];
  }
  worst = std::max(worst, -btz);
  for (std::size_t i = 0; i < n; ++i) {
    double atz = 0.0;
    for (std::size_t r = 0; r < rows; ++r) atz += x->a()(r, i) * cert.dual[r];
    worst = std::max(worst, atz - diff[i]);
  }
  for (std::size_t l = 0; l < x->aux_dim(); ++l) {
    double btz_l = 0.0;
    for (std::size_t r = 0; r < rows; ++r) btz_l += x->b_aux()(r, l) * cert.dual[r];
    worst = std::max(worst, std::abs(btz_l));
  }
  return worst;
}

bool dominates_convex(std::span<const double> c, const ScenarioSet& s) {
  check_dims(c.size(), s.dim(), "dominates_convex");
  IndexSet all(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) all[k] = k;
  // Cheap exits before the LP.
  for (auto k : all) {
    if (dominates_componentwise(s[k], c)) return true;
  }
  return convex_dual_cone_dominance(c, s, all, nullptr).has_value();
}

bool cone_membership(std::span<const double> y, const ConeDescription& cone) {
  if (!cone.generators && !cone.lp_form) throw NoRepresentation("cone has no representation");
  check_dims(y.size(), cone.dim(), "cone_membership");
  const double tol = 1e-9 * (1.0 + scale_of(y));
  if (std::all_of(y.begin(), y.end(), [&](double v) { return std::abs(v) <= tol; })) return true;
  Model m;
  if (cone.generators) {
    const auto& gens = *cone.generators;
    std::vector<int> lambda;
    for (std::size_t g = 0; g < gens.size(); ++g) lambda.push_back(m.add_variable(0.0, kInfinity));
    for (std::size_t i = 0; i < y.size(); ++i) {
      std::vector<Term> terms;
      for (std::size_t g = 0; g < gens.size(); ++g) {
        if (gens[g][i] != 0.0) terms.push_back({lambda[g], gens[g][i]});
      }
      m.add_constraint(std::move(terms), Relation::Equal, y[i]);
    }
  } else {
    for (double v : y) {
      if (v < -tol) return false;
    }
    const auto& d = *cone.lp_form;
    const int lambda = m.add_variable(0.0, kInfinity);
    std::vector<int> w;
    for (std::size_t l = 0; l < d.aux_dim(); ++l) w.push_back(m.add_variable(-kInfinity, kInfinity));
    for (std::size_t r = 0; r < d.row_count(); ++r) {
      std::vector<Term> terms{{lambda, -d.rhs()[r]}};
      for (std::size_t l = 0; l < d.aux_dim(); ++l) {
        if (d.b_aux()(r, l) != 0.0) terms.push_back({w[l], d.b_aux()(r, l)});
      }
      m.add_constraint(std::move(terms), Relation::GreaterEqual, -dot(d.a().row(r), y));
    }
  }
  const auto out = solve_lp(m, tight_params());
  return out.optimal();
}

bool dominates_dual_cone(std::span<const double> c_prime, std::span<const double> c,
                         const ConeDescription& cone) {
  check_dims(c_prime.size(), c.size(), "dominates_dual_cone");
  if (!cone.generators && !cone.lp_form) throw NoRepresentation("cone has no representation");
  check_dims(c.size(), cone.dim(), "dominates_dual_cone");
  Vector diff(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) diff[i] = c_prime[i] - c[i];
  if (cone.generators) {
    const double tol = 1e-12 * (1.0 + scale_of(c_prime) + scale_of(c));
    return std::all_of(cone.generators->begin(), cone.generators->end(),
                       [&](const Vector& g) { return dot(diff, g) >= -tol * (1.0 + scale_of(g)); });
  }
  const ScenarioSet single(std::vector<Vector>{Vector(c_prime.begin(), c_prime.end())});
  return convex_dual_cone_dominance(c, single, {0}, &*cone.lp_form).has_value();
}

IndexSet pareto_filter(const ScenarioSet& u) {
  IndexSet keep;
  for (std::size_t j = 0; j < u.size(); ++j) {
    bool dominated = false;
    for (std::size_t k = 0; k < u.size() && !dominated; ++k) {
      if (k == j || !dominates_componentwise(u[k], u[j])) continue;
      // Equal vectors: the lowest index survives.
      const bool equal = dominates_componentwise(u[j], u[k]);
      dominated = !equal || k < j;
    }
    if (!dominated) keep.push_back(j);
  }
  return keep;
}

IndexSet supported_filter(const ScenarioSet& u) {
  const IndexSet pareto = pareto_filter(u);
  IndexSet keep;
  for (auto j : pareto) {
    IndexSet others;
    for (auto k : pareto) {
      if (k != j) others.push_back(k);
    }
    if (!convex_dual_cone_dominance(u[j], u, others, nullptr)) keep.push_back(j);
  }
  return keep;
}

namespace {

bool values_match(double reduced, double full) {
  return std::abs(reduced - full) <= 1e-9 * (1.0 + std::abs(full));
}

double worst_with(const ScenarioSet& u, std::span<const double> x, const ObjectiveFn& f) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < u.size(); ++k) best = std::max(best, f(x, u[k]));
  return best;
}

}  // namespace

bool sufficiency_oracle(const ScenarioSet& reduced, const ScenarioSet& u,
                        const std::vector<Vector>& solutions, const ObjectiveFn& f) {
  check_dims(reduced.dim(), u.dim(), "sufficiency_oracle");
  const ObjectiveFn& obj = f ? f : ObjectiveFn(linear_objective);
  for (const auto& x : solutions) {
    if (!values_match(worst_with(reduced, x, obj), worst_with(u, x, obj))) return false;
  }
  return true;
}

bool sufficiency_oracle(const ScenarioSet& reduced, const ScenarioSet& u,
                        const FeasibleSetDescription& x, std::size_t cap, const ObjectiveFn& f) {
  return sufficiency_oracle(reduced, u, x.enumerate(cap), f);
}

bool satisfies_sufficiency_type(const ScenarioSet& reduced, const ScenarioSet& u,
                                SufficiencyType type, const std::vector<Vector>& solutions,
                                const ObjectiveFn& f) {
  check_dims(reduced.dim(), u.dim(), "satisfies_sufficiency_type");
  const ObjectiveFn obj = f ? f : ObjectiveFn(linear_objective);
  auto at_least = [](double a, double b) { return a >= b - 1e-9 * (1.0 + std::abs(b)); };
  for (std::size_t j = 0; j < u.size(); ++j) {
    const auto c = u[j];
    bool ok = false;
    switch (type) {
      case SufficiencyType::I:
        for (std::size_t k = 0; k < reduced.size() && !ok; ++k) ok = dominates_componentwise(reduced[k], c);
        break;
      case SufficiencyType::II:
        ok = dominates_convex(c, reduced);
        break;
      case SufficiencyType::III:
        for (std::size_t k = 0; k < reduced.size() && !ok; ++k) {
          ok = std::all_of(solutions.begin(), solutions.end(),
                           [&](const Vector& x) { return at_least(obj(x, reduced[k]), obj(x, c)); });
        }
        break;
      case SufficiencyType::IV:
        ok = std::all_of(solutions.begin(), solutions.end(), [&](const Vector& x) {
          for (std::size_t k = 0; k < reduced.size(); ++k) {
            if (at_least(obj(x, reduced[k]), obj(x, c))) return true;
          }
          return false;
        });
        break;
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace scenred
