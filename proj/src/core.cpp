#include "scenred/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "scenred/solver.hpp"

namespace scenred {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("dot: lengths " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_norm_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("max_norm_distance: length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double linear_objective(std::span<const double> x, std::span<const double> c) { return dot(x, c); }

ScenarioSet::ScenarioSet(const std::vector<Vector>& rows, std::vector<std::string> labels) {
  if (rows.empty()) throw DimensionMismatch("scenario set must contain at least one scenario");
  dim_ = rows.front().size();
  if (dim_ == 0) throw DimensionMismatch("scenario dimension must be positive");
  count_ = rows.size();
  values_.reserve(dim_ * count_);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != dim_) {
      throw DimensionMismatch("scenario " + std::to_string(k) + " has length " +
                              std::to_string(rows[k].size()) + ", expected " + std::to_string(dim_));
    }
    for (std::size_t i = 0; i < dim_; ++i) {
      const double v = rows[k][i];
      if (!(v >= 0.0) || std::isinf(v)) {
        throw NegativeComponent("scenario " + std::to_string(k) + " component " +
                                std::to_string(i) + " is not a finite nonnegative number");
      }
      values_.push_back(v);
    }
  }
  if (!labels.empty() && labels.size() != count_) {
    throw DimensionMismatch("label count does not match scenario count");
  }
  labels_ = std::move(labels);
}

std::vector<Vector> ScenarioSet::rows() const {
  std::vector<Vector> out;
  out.reserve(count_);
  for (std::size_t k = 0; k < count_; ++k) out.push_back(scenario(k));
  return out;
}

ScenarioSet ScenarioSet::subset(const IndexSet& indices) const {
  std::vector<Vector> out;
  std::vector<std::string> labels;
  out.reserve(indices.size());
  for (auto k : indices) {
    out.push_back(scenario(k));
    if (!labels_.empty()) labels.push_back(labels_[k]);
  }
  return ScenarioSet(out, std::move(labels));
}

ScenarioSet validate_scenario_set(const std::vector<Vector>& raw, std::vector<std::string> labels) {
  return ScenarioSet(raw, std::move(labels));
}

DedupeMap dedupe_indices(const ScenarioSet& u, double tol) {
  DedupeMap map;
  map.representative.resize(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    auto hit = std::find_if(map.kept.begin(), map.kept.end(), [&](std::size_t r) {
      return max_norm_distance(u[r], u[k]) <= tol;
    });
    if (hit == map.kept.end()) {
      map.kept.push_back(k);
      map.representative[k] = k;
    } else {
      map.representative[k] = *hit;
    }
  }
  return map;
}

ScenarioSet dedupe_scenarios(const ScenarioSet& u, double tol) {
  return u.subset(dedupe_indices(u, tol).kept);
}

FeasibleSetDescription::FeasibleSetDescription(Matrix a, Matrix b_aux, Vector rhs, bool integral,
                                               FamilySpec family, Enumerator enumerator)
    : a_(std::move(a)),
      b_aux_(std::move(b_aux)),
      rhs_(std::move(rhs)),
      integral_(integral),
      family_(std::move(family)),
      enumerator_(std::move(enumerator)) {
  if (a_.cols() == 0) throw DimensionMismatch("feasible set dimension must be positive");
  if (b_aux_.rows() != a_.rows() || rhs_.size() != a_.rows()) {
    throw DimensionMismatch("A, B and b must have the same number of rows");
  }
}

bool FeasibleSetDescription::contains(std::span<const double> x, double tol) const {
  if (x.size() != dim()) throw DimensionMismatch("point dimension does not match feasible set");
  for (double v : x) {
    if (v < -tol) return false;
  }
  if (aux_dim() == 0) {
    for (std::size_t r = 0; r < row_count(); ++r) {
      if (dot(a_.row(r), x) < rhs_[r] - tol) return false;
    }
    return true;
  }
  Model m;
  std::vector<int> y;
  for (std::size_t l = 0; l < aux_dim(); ++l) y.push_back(m.add_variable(-kInfinity, kInfinity));
  for (std::size_t r = 0; r < row_count(); ++r) {
    std::vector<Term> terms;
    for (std::size_t l = 0; l < aux_dim(); ++l) {
      if (b_aux_(r, l) != 0.0) terms.push_back({y[l], b_aux_(r, l)});
    }
    m.add_constraint(std::move(terms), Relation::GreaterEqual, rhs_[r] - dot(a_.row(r), x) - tol);
  }
  return solve_lp(m).optimal();
}

std::vector<Vector> FeasibleSetDescription::enumerate(std::size_t cap) const {
  if (enumerator_) return enumerator_(*this, cap);
  const std::size_t n = dim();
  if (n > 24) {
    throw EnumerationCapExceeded("brute-force enumeration over {0,1}^" + std::to_string(n) +
                                 " is not supported; supply an enumerator");
  }
  std::vector<Vector> out;
  Vector x(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>((mask >> i) & 1U);
    if (contains(x)) {
      if (out.size() == cap) {
        throw EnumerationCapExceeded("feasible set has more than " + std::to_string(cap) +
                                     " solutions");
      }
      out.push_back(x);
    }
  }
  return out;
}

FeasibleSetDescription FeasibleSetDescription::with_fixed(
    const std::vector<std::pair<std::size_t, double>>& fixes) const {
  const std::size_t extra = 2 * fixes.size();
  Matrix a(row_count() + extra, dim());
  Matrix b(row_count() + extra, aux_dim());
  Vector rhs = rhs_;
  for (std::size_t r = 0; r < row_count(); ++r) {
    for (std::size_t i = 0; i < dim(); ++i) a(r, i) = a_(r, i);
    for (std::size_t l = 0; l < aux_dim(); ++l) b(r, l) = b_aux_(r, l);
  }
  std::size_t r = row_count();
  for (const auto& [i, v] : fixes) {
    if (i >= dim()) throw DimensionMismatch("fixed coordinate out of range");
    a(r, i) = 1.0;
    rhs.push_back(v);
    ++r;
    a(r, i) = -1.0;
    rhs.push_back(-v);
    ++r;
  }
  Enumerator filtered;
  if (enumerator_) {
    filtered = [parent = enumerator_, fixes](const FeasibleSetDescription& self, std::size_t cap) {
      auto all = parent(self, cap);
      std::erase_if(all, [&](const Vector& x) {
        return std::any_of(fixes.begin(), fixes.end(),
                           [&](const auto& f) { return std::abs(x[f.first] - f.second) > 1e-9; });
      });
      return all;
    };
  }
  // Fixing coordinates of an integral polytope at 0/1 bounds keeps it integral.
  return FeasibleSetDescription(std::move(a), std::move(b), std::move(rhs), integral_, FamilySpec{},
                                std::move(filtered));
}

ConeDescription ConeDescription::from_generators(std::vector<Vector> gens) {
  if (gens.empty()) throw NoRepresentation("cone needs at least one generator");
  const std::size_t n = gens.front().size();
  for (const auto& g : gens) {
    if (g.size() != n) throw DimensionMismatch("cone generators differ in length");
    for (double v : g) {
      if (v < 0.0) throw NegativeComponent("cone generators must be nonnegative");
    }
  }
  ConeDescription c;
  c.generators = std::move(gens);
  return c;
}

ConeDescription ConeDescription::from_lp(FeasibleSetDescription description) {
  ConeDescription c;
  c.lp_form = std::move(description);
  return c;
}

ConeDescription ConeDescription::nonnegative_orthant(std::size_t n) {
  std::vector<Vector> gens(n, Vector(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) gens[i][i] = 1.0;
  return from_generators(std::move(gens));
}

std::size_t ConeDescription::dim() const {
  if (generators) return generators->front().size();
  if (lp_form) return lp_form->dim();
  throw NoRepresentation("cone has neither generators nor an LP form");
}

RobustInstance::RobustInstance(FeasibleSetDescription x, ScenarioSet u, ObjectiveFn f)
    : feasible(std::move(x)), uncertainty(std::move(u)), objective(std::move(f)) {
  if (feasible.dim() != uncertainty.dim()) {
    throw DimensionMismatch("feasible set and uncertainty set dimensions differ");
  }
  if (!objective) objective = linear_objective;
}

}  // namespace scenred
