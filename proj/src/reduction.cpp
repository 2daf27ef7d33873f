#include "scenred/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "scenred/dominance.hpp"

namespace scenred {

std::string to_string(ReductionMethod method) {
  switch (method) {
    case ReductionMethod::Red1: return "Red-1";
    case ReductionMethod::Red2: return "Red-2";
    case ReductionMethod::Red3: return "Red-3";
    case ReductionMethod::Red4: return "Red-4";
    case ReductionMethod::Red4S: return "Red-4S";
  }
  return "?";
}

ReductionMethod parse_reduction_method(const std::string& name) {
  std::string s;
  for (char ch : name) {
    if (ch != '-' && ch != '_') s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (s == "red1") return ReductionMethod::Red1;
  if (s == "red2") return ReductionMethod::Red2;
  if (s == "red3") return ReductionMethod::Red3;
  if (s == "red4") return ReductionMethod::Red4;
  if (s == "red4s") return ReductionMethod::Red4S;
  throw std::invalid_argument("unknown reduction method '" + name + "'");
}

bool ReductionResult::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double value_tol(double v) { return 1e-9 * (1.0 + std::abs(v)); }

void require_description(const ScenarioSet& u, const FeasibleSetDescription& x) {
  if (x.dim() == 0) throw MissingLpDescription("an LP description of X is required");
  if (x.dim() != u.dim()) {
    throw DimensionMismatch("feasible set has dimension " + std::to_string(x.dim()) +
                            " but scenarios have dimension " + std::to_string(u.dim()));
  }
}

ReductionResult trivial_result(ReductionMethod method, std::size_t rows) {
  ReductionResult r;
  r.method = method;
  r.original_size = 1;
  r.selected = {0};
  r.assignment = {ScenarioAssignment{{0}, {1.0}, {}}};
  if (method == ReductionMethod::Red3 || method == ReductionMethod::Red4S) {
    r.dual_certificates = {Vector(rows, 0.0)};
  }
  r.flags.push_back("trivial");
  return r;
}

bool contains_index(const IndexSet& s, std::size_t k) { return std::binary_search(s.begin(), s.end(), k); }

void insert_sorted(IndexSet& s, std::size_t k) {
  auto it = std::lower_bound(s.begin(), s.end(), k);
  if (it == s.end() || *it != k) s.insert(it, k);
}

std::vector<double> rounded(const std::vector<double>& primal, const std::vector<int>& vars) {
  std::vector<double> out;
  for (int v : vars) out.push_back(primal[static_cast<std::size_t>(v)]);
  return out;
}

IndexSet selected_from(const std::vector<double>& values) {
  IndexSet s;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] > 0.5) s.push_back(k);
  }
  return s;
}

SolveOutcome solve_checked(const Model& m, const SolverParams& params, ReductionResult& r) {
  auto out = solve_milp(m, params);
  r.status = out.status;
  if (out.status == SolveStatus::TimeLimit && out.has_primal()) {
    r.flags.push_back("time_limit");
    return out;
  }
  if (!out.optimal()) throw SolverFailure("reduction model ended with status " + to_string(out.status));
  return out;
}

// Minimum cover: every row must contain a selected set. `forced` sets are
// always selected. Returns the selection sorted.
IndexSet set_cover(std::size_t sets, std::vector<IndexSet> rows, const IndexSet& forced,
                   const std::optional<IndexSet>& warm, const SolverParams& params, ReductionResult& r) {
  std::vector<char> is_forced(sets, 0);
  for (auto k : forced) is_forced[k] = 1;
  std::set<IndexSet> unique;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    if (row.empty()) throw SolverFailure("set cover row without any covering set");
    if (std::any_of(row.begin(), row.end(), [&](std::size_t k) { return is_forced[k] != 0; })) continue;
    unique.insert(row);
  }
  IndexSet chosen(forced.begin(), forced.end());
  std::sort(chosen.begin(), chosen.end());
  if (unique.empty()) return chosen;

  Model m;
  std::vector<int> lambda;
  for (std::size_t k = 0; k < sets; ++k) {
    const double lo = is_forced[k] != 0 ? 1.0 : 0.0;
    lambda.push_back(m.add_variable(lo, 1.0, 1.0, VarType::Binary));
  }
  for (const auto& row : unique) {
    std::vector<Term> terms;
    for (auto k : row) terms.push_back({lambda[k], 1.0});
    m.add_constraint(std::move(terms), Relation::GreaterEqual, 1.0);
  }
  if (warm) {
    std::vector<double> start(sets, 0.0);
    for (auto k : *warm) start[k] = 1.0;
    for (auto k : forced) start[k] = 1.0;
    m.set_start(std::move(start));
  }
  const auto out = solve_checked(m, params, r);
  chosen = selected_from(rounded(out.primal, lambda));
  for (auto k : forced) insert_sorted(chosen, k);

  // Prefer lower indices among equally small covers: swap a member for a
  // lower unselected index whenever the cover survives.
  std::vector<IndexSet> row_list(unique.begin(), unique.end());
  auto covered = [&](const IndexSet& sel) {
    return std::all_of(row_list.begin(), row_list.end(), [&](const IndexSet& row) {
      return std::any_of(row.begin(), row.end(), [&](std::size_t k) { return contains_index(sel, k); });
    });
  };
  if (!covered(chosen)) throw SolverFailure("set cover solution does not cover every row");
  for (std::size_t pos = 0; pos < chosen.size(); ++pos) {
    const std::size_t k = chosen[pos];
    if (is_forced[k] != 0) continue;
    for (std::size_t lower = 0; lower < k; ++lower) {
      if (contains_index(chosen, lower)) continue;
      IndexSet trial = chosen;
      trial.erase(std::find(trial.begin(), trial.end(), k));
      insert_sorted(trial, lower);
      if (covered(trial)) {
        chosen = std::move(trial);
        pos = static_cast<std::size_t>(-1);  // restart the scan
        break;
      }
    }
  }
  return chosen;
}

// Fills one-source assignments from a dominance relation dom[j][k]
// ("k covers j"). Scenarios left uncovered are added to the selection.
void assign_single(ReductionResult& r, const std::vector<std::vector<char>>& dom) {
  const std::size_t n = dom.size();
  r.assignment.assign(n, {});
  for (std::size_t j = 0; j < n; ++j) {
    if (contains_index(r.selected, j)) {
      r.assignment[j] = {{j}, {1.0}, {}};
      continue;
    }
    auto hit = std::find_if(r.selected.begin(), r.selected.end(), [&](std::size_t k) { return dom[j][k] != 0; });
    if (hit == r.selected.end()) {
      insert_sorted(r.selected, j);
      r.flags.push_back("certificate_repaired");
      r.assignment[j] = {{j}, {1.0}, {}};
    } else {
      r.assignment[j] = {{*hit}, {1.0}, {}};
    }
  }
}

// Certificates for one-source assignments in the dual cone of conic(X).
// `dom` ranks alternatives when the first choice fails numerically.
void certify_single(ReductionResult& r, const ScenarioSet& u, const FeasibleSetDescription& x,
                    const std::vector<std::vector<char>>& dom) {
  const std::size_t n = u.size();
  r.dual_certificates.assign(n, Vector(x.row_count(), 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    if (contains_index(r.selected, j)) {
      r.assignment[j] = {{j}, {1.0}, {}};
      continue;
    }
    bool done = false;
    IndexSet order{r.assignment[j].sources.front()};
    for (auto k : r.selected) {
      if (k != order.front() && dom[j][k] != 0) order.push_back(k);
    }
    for (auto k : order) {
      auto cert = convex_dual_cone_dominance(u[j], u, {k}, &x);
      if (cert && certificate_violation(*cert, u[j], u, &x) <= 1e-6) {
        r.assignment[j] = {{k}, {1.0}, {}};
        r.dual_certificates[j] = cert->dual;
        done = true;
        break;
      }
    }
    if (!done) {
      insert_sorted(r.selected, j);
      r.assignment[j] = {{j}, {1.0}, {}};
      r.flags.push_back("certificate_repaired");
    }
  }
}

// Convex assignments over the selection; x == nullptr means componentwise.
void certify_convex(ReductionResult& r, const ScenarioSet& u, const FeasibleSetDescription* x) {
  const std::size_t n = u.size();
  r.assignment.assign(n, {});
  if (x != nullptr) r.dual_certificates.assign(n, Vector(x->row_count(), 0.0));
  // Repairs only grow the selection, so one pass over the final set suffices
  // after a repair-free sweep; loop until stable.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (contains_index(r.selected, j)) {
        r.assignment[j] = {{j}, {1.0}, {}};
        continue;
      }
      auto single = std::find_if(r.selected.begin(), r.selected.end(),
                                 [&](std::size_t k) { return dominates_componentwise(u[k], u[j]); });
      if (single != r.selected.end()) {
        r.assignment[j] = {{*single}, {1.0}, {}};
        if (x != nullptr) r.dual_certificates[j] = Vector(x->row_count(), 0.0);
        continue;
      }
      auto cert = convex_dual_cone_dominance(u[j], u, r.selected, x);
      if (cert && certificate_violation(*cert, u[j], u, x) <= 1e-6) {
        ScenarioAssignment a;
        for (std::size_t q = 0; q < cert->candidates.size(); ++q) {
          if (cert->weights[q] > 0.0) {
            a.sources.push_back(cert->candidates[q]);
            a.weights.push_back(cert->weights[q]);
          }
        }
        double total = 0.0;
        for (double w : a.weights) total += w;
        for (double& w : a.weights) w /= total;
        r.assignment[j] = std::move(a);
        if (x != nullptr) r.dual_certificates[j] = cert->dual;
      } else {
        insert_sorted(r.selected, j);
        r.flags.push_back("certificate_repaired");
        changed = true;
        break;
      }
    }
  }
}

// Adds b^T pi >= 0, A^T pi - sum_k mu_k c^k <= -c^j, B^T pi = 0 for one j.
// Returns the pi variable ids.
std::vector<int> add_dual_block(Model& m, const FeasibleSetDescription& x, const ScenarioSet& u, std::size_t j,
                                const std::vector<int>& mu) {
  const std::size_t q = x.row_count();
  std::vector<int> pi;
  for (std::size_t r = 0; r < q; ++r) pi.push_back(m.add_variable(0.0, kInfinity));
  {
    std::vector<Term> terms;
    for (std::size_t r = 0; r < q; ++r) {
      if (x.rhs()[r] != 0.0) terms.push_back({pi[r], x.rhs()[r]});
    }
    if (!terms.empty()) m.add_constraint(std::move(terms), Relation::GreaterEqual, 0.0);
  }
  for (std::size_t i = 0; i < u.dim(); ++i) {
    std::vector<Term> terms;
    for (std::size_t r = 0; r < q; ++r) {
      if (x.a()(r, i) != 0.0) terms.push_back({pi[r], x.a()(r, i)});
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (u[k][i] != 0.0) terms.push_back({mu[k], -u[k][i]});
    }
    m.add_constraint(std::move(terms), Relation::LessEqual, -u[j][i]);
  }
  for (std::size_t l = 0; l < x.aux_dim(); ++l) {
    std::vector<Term> terms;
    for (std::size_t r = 0; r < q; ++r) {
      if (x.b_aux()(r, l) != 0.0) terms.push_back({pi[r], x.b_aux()(r, l)});
    }
    m.add_constraint(std::move(terms), Relation::Equal, 0.0);
  }
  return pi;
}

// lambda_k binary plus, per listed j, an assignment row mu_j (binary or
// continuous) with mu_jk <= lambda_k and sum_k mu_jk = 1.
struct AssignmentModel {
  Model m;
  std::vector<int> lambda;
  std::vector<std::vector<int>> mu;  // indexed like `rows`
};

AssignmentModel assignment_model(std::size_t n, std::size_t rows, bool binary_mu) {
  AssignmentModel am;
  for (std::size_t k = 0; k < n; ++k) am.lambda.push_back(am.m.add_variable(0.0, 1.0, 1.0, VarType::Binary));
  am.mu.resize(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    std::vector<Term> sum;
    for (std::size_t k = 0; k < n; ++k) {
      const int v = am.m.add_variable(0.0, 1.0, 0.0, binary_mu ? VarType::Binary : VarType::Continuous);
      am.mu[j].push_back(v);
      am.m.add_constraint({{v, 1.0}, {am.lambda[k], -1.0}}, Relation::LessEqual, 0.0);
      sum.push_back({v, 1.0});
    }
    am.m.add_constraint(std::move(sum), Relation::Equal, 1.0);
  }
  return am;
}

// Componentwise assignment model: c^j_i <= sum_k mu_jk c^k_i.
ReductionResult componentwise_milp(const ScenarioSet& u, bool binary_mu, ReductionMethod method,
                                   const ReductionOptions& opts) {
  const std::size_t n = u.size();
  ReductionResult r;
  r.method = method;
  r.original_size = n;
  auto am = assignment_model(n, n, binary_mu);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < u.dim(); ++i) {
      std::vector<Term> terms;
      for (std::size_t k = 0; k < n; ++k) {
        if (u[k][i] != 0.0) terms.push_back({am.mu[j][k], u[k][i]});
      }
      am.m.add_constraint(std::move(terms), Relation::GreaterEqual, u[j][i]);
    }
  }
  // Warm start from the filter answer for the binary model, where the
  // assignment is a plain lookup.
  const IndexSet warm = opts.warm_start ? *opts.warm_start : pareto_filter(u);
  if (binary_mu) {
    std::vector<double> start(am.m.num_variables(), 0.0);
    bool ok = true;
    for (auto k : warm) start[static_cast<std::size_t>(am.lambda[k])] = 1.0;
    for (std::size_t j = 0; j < n && ok; ++j) {
      auto hit = std::find_if(warm.begin(), warm.end(), [&](std::size_t k) { return dominates_componentwise(u[k], u[j]); });
      if (hit == warm.end()) {
        ok = false;
      } else {
        start[static_cast<std::size_t>(am.mu[j][*hit])] = 1.0;
      }
    }
    if (ok) am.m.set_start(std::move(start));
  }
  const auto out = solve_checked(am.m, opts.params, r);
  r.selected = selected_from(rounded(out.primal, am.lambda));
  r.flags.push_back("milp");
  return r;
}

std::vector<std::vector<char>> componentwise_relation(const ScenarioSet& u) {
  const std::size_t n = u.size();
  std::vector<std::vector<char>> dom(n, std::vector<char>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) dom[j][k] = (j == k || dominates_componentwise(u[k], u[j])) ? 1 : 0;
  }
  return dom;
}

// Pairwise type-(iii) relation dom[j][k]: c^k - c^j in the dual cone.
std::vector<std::vector<char>> dual_cone_relation(const ScenarioSet& u, const FeasibleSetDescription& x,
                                                  std::size_t cap, ReductionResult& r) {
  const std::size_t n = u.size();
  auto dom = componentwise_relation(u);
  std::optional<std::vector<Vector>> points;
  if (x.integral() && x.has_enumerator()) {
    try {
      points = x.enumerate(std::min<std::size_t>(cap, 20000));
    } catch (const EnumerationCapExceeded&) {
      points.reset();
    }
  }
  if (points && !points->empty()) {
    // For an integral bounded description conic(X) is generated by the
    // points of X, so the dual cone test is a scan over them.
    r.flags.push_back("generator_relation");
    const std::size_t m = points->size();
    std::vector<double> val(n * m);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t s = 0; s < m; ++s) val[k * m + s] = dot(u[k], (*points)[s]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (dom[j][k] != 0) continue;
        bool ok = true;
        for (std::size_t s = 0; s < m && ok; ++s) ok = val[k * m + s] >= val[j * m + s] - value_tol(val[j * m + s]);
        dom[j][k] = ok ? 1 : 0;
      }
    }
    return dom;
  }
  r.flags.push_back("lp_relation");
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (dom[j][k] != 0) continue;
      dom[j][k] = convex_dual_cone_dominance(u[j], u, {k}, &x).has_value() ? 1 : 0;
    }
  }
  return dom;
}

std::vector<IndexSet> rows_of(const std::vector<std::vector<char>>& dom) {
  std::vector<IndexSet> rows(dom.size());
  for (std::size_t j = 0; j < dom.size(); ++j) {
    for (std::size_t k = 0; k < dom.size(); ++k) {
      if (dom[j][k] != 0) rows[j].push_back(k);
    }
  }
  return rows;
}

}  // namespace

ReductionResult reduce_type1(const ScenarioSet& u, bool use_milp, const ReductionOptions& opts) {
  const auto start = Clock::now();
  if (u.size() == 1) return trivial_result(ReductionMethod::Red1, 0);
  ReductionResult r;
  if (use_milp) {
    r = componentwise_milp(u, true, ReductionMethod::Red1, opts);
  } else {
    r.method = ReductionMethod::Red1;
    r.original_size = u.size();
    r.selected = pareto_filter(u);
    r.flags.push_back("filter");
  }
  assign_single(r, componentwise_relation(u));
  r.wall_seconds = seconds_since(start);
  return r;
}

ReductionResult reduce_type2(const ScenarioSet& u, bool use_milp, const ReductionOptions& opts) {
  const auto start = Clock::now();
  if (u.size() == 1) return trivial_result(ReductionMethod::Red2, 0);
  ReductionResult r;
  if (use_milp) {
    r = componentwise_milp(u, false, ReductionMethod::Red2, opts);
  } else {
    r.method = ReductionMethod::Red2;
    r.original_size = u.size();
    r.selected = supported_filter(u);
    r.flags.push_back("filter");
  }
  certify_convex(r, u, nullptr);
  r.wall_seconds = seconds_since(start);
  return r;
}

ReductionResult reduce_type3(const ScenarioSet& u, const FeasibleSetDescription& x, const ReductionOptions& opts) {
  const auto start = Clock::now();
  require_description(u, x);
  if (u.size() == 1) return trivial_result(ReductionMethod::Red3, x.row_count());
  ReductionResult r;
  r.method = ReductionMethod::Red3;
  r.original_size = u.size();
  const auto dom = dual_cone_relation(u, x, opts.enumeration_cap, r);
  r.selected = set_cover(u.size(), rows_of(dom), {}, opts.warm_start, opts.params, r);
  assign_single(r, dom);
  certify_single(r, u, x, dom);
  if (!x.integral()) r.flags.push_back("relaxation");
  r.wall_seconds = seconds_since(start);
  return r;
}

ReductionResult reduce_type3_literal(const ScenarioSet& u, const FeasibleSetDescription& x,
                                     const ReductionOptions& opts) {
  const auto start = Clock::now();
  require_description(u, x);
  if (u.size() == 1) return trivial_result(ReductionMethod::Red3, x.row_count());
  const std::size_t n = u.size();
  ReductionResult r;
  r.method = ReductionMethod::Red3;
  r.original_size = n;
  auto am = assignment_model(n, n, true);
  for (std::size_t j = 0; j < n; ++j) add_dual_block(am.m, x, u, j, am.mu[j]);
  const auto out = solve_checked(am.m, opts.params, r);
  r.selected = selected_from(rounded(out.primal, am.lambda));
  r.flags.push_back("milp");
  r.assignment.assign(n, {});
  std::vector<std::vector<char>> dom(n, std::vector<char>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t best = r.selected.front();
    double best_val = -1.0;
    for (auto k : r.selected) {
      const double v = out.primal[static_cast<std::size_t>(am.mu[j][k])];
      dom[j][k] = 1;  // any selected index may be tried during certification
      if (v > best_val) {
        best_val = v;
        best = k;
      }
    }
    r.assignment[j] = {{best}, {1.0}, {}};
  }
  certify_single(r, u, x, dom);
  r.wall_seconds = seconds_since(start);
  return r;
}

namespace {

void check_solutions(const ScenarioSet& u, const std::vector<Vector>& solutions, std::size_t cap) {
  if (solutions.size() > cap) {
    throw EnumerationCapExceeded(std::to_string(solutions.size()) + " solutions exceed the cap of " +
                                 std::to_string(cap));
  }
  for (const auto& s : solutions) {
    if (s.size() != u.dim()) throw DimensionMismatch("solution length does not match scenario dimension");
  }
}

std::vector<double> objective_table(const ScenarioSet& u, const std::vector<Vector>& solutions) {
  const std::size_t m = solutions.size();
  std::vector<double> val(u.size() * m);
  for (std::size_t k = 0; k < u.size(); ++k) {
    for (std::size_t s = 0; s < m; ++s) val[k * m + s] = dot(u[k], solutions[s]);
  }
  return val;
}

void assign_per_solution(ReductionResult& r, const std::vector<double>& val, std::size_t m) {
  const std::size_t n = r.original_size;
  r.assignment.assign(n, {});
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j < n && !changed; ++j) {
      ScenarioAssignment a;
      for (std::size_t s = 0; s < m; ++s) {
        const double target = val[j * m + s];
        auto hit = std::find_if(r.selected.begin(), r.selected.end(),
                                [&](std::size_t k) { return val[k * m + s] >= target - value_tol(target); });
        if (hit == r.selected.end()) {
          insert_sorted(r.selected, j);
          r.flags.push_back("certificate_repaired");
          changed = true;
          break;
        }
        a.per_solution.push_back(*hit);
        if (std::find(a.sources.begin(), a.sources.end(), *hit) == a.sources.end()) a.sources.push_back(*hit);
      }
      if (!changed) {
        if (m == 0) a.sources = {r.selected.front()};
        std::sort(a.sources.begin(), a.sources.end());
        r.assignment[j] = std::move(a);
      }
    }
  }
}

}  // namespace

ReductionResult reduce_type4_exact(const ScenarioSet& u, const std::vector<Vector>& solutions,
                                   const ReductionOptions& opts) {
  const auto start = Clock::now();
  check_solutions(u, solutions, opts.enumeration_cap);
  const std::size_t n = u.size();
  const std::size_t m = solutions.size();
  ReductionResult r;
  r.method = ReductionMethod::Red4;
  r.original_size = n;
  const auto val = objective_table(u, solutions);
  if (n == 1 || m == 0) {
    r.selected = {0};
    r.flags.push_back("trivial");
  } else {
    std::vector<IndexSet> rows;
    rows.reserve(n * m);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t s = 0; s < m; ++s) {
        const double target = val[j * m + s];
        IndexSet row;
        for (std::size_t k = 0; k < n; ++k) {
          if (val[k * m + s] >= target - value_tol(target)) row.push_back(k);
        }
        rows.push_back(std::move(row));
      }
    }
    r.selected = set_cover(n, std::move(rows), {}, opts.warm_start, opts.params, r);
  }
  assign_per_solution(r, val, m);
  r.wall_seconds = seconds_since(start);
  return r;
}

ReductionResult reduce_type4_literal(const ScenarioSet& u, const std::vector<Vector>& solutions,
                                     const ReductionOptions& opts) {
  const auto start = Clock::now();
  check_solutions(u, solutions, opts.enumeration_cap);
  const std::size_t n = u.size();
  const std::size_t m = solutions.size();
  ReductionResult r;
  r.method = ReductionMethod::Red4;
  r.original_size = n;
  const auto val = objective_table(u, solutions);
  if (n == 1 || m == 0) {
    r.selected = {0};
    r.flags.push_back("trivial");
  } else {
    // One assignment row per (j, x), row index j * m + s.
    auto am = assignment_model(n, n * m, true);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t s = 0; s < m; ++s) {
        std::vector<Term> terms;
        for (std::size_t k = 0; k < n; ++k) {
          if (val[k * m + s] != 0.0) terms.push_back({am.mu[j * m + s][k], val[k * m + s]});
        }
        am.m.add_constraint(std::move(terms), Relation::GreaterEqual, val[j * m + s]);
      }
    }
    const auto out = solve_checked(am.m, opts.params, r);
    r.selected = selected_from(rounded(out.primal, am.lambda));
    r.flags.push_back("milp");
  }
  assign_per_solution(r, val, m);
  r.wall_seconds = seconds_since(start);
  return r;
}

ReductionResult reduce_type4_approx(const ScenarioSet& u, const FeasibleSetDescription& x,
                                    const ReductionOptions& opts) {
  const auto start = Clock::now();
  require_description(u, x);
  const std::size_t n = u.size();
  if (n == 1) return trivial_result(ReductionMethod::Red4S, x.row_count());
  ReductionResult r;
  r.method = ReductionMethod::Red4S;
  r.original_size = n;

  // Scenarios no combination of the others dominates must be in every
  // feasible selection.
  IndexSet core;
  IndexSet hard;
  if (opts.force_milp) {
    for (std::size_t j = 0; j < n; ++j) hard.push_back(j);
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      IndexSet others;
      bool single = false;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        others.push_back(k);
        single = single || dominates_componentwise(u[k], u[j]);
      }
      if (!single && !convex_dual_cone_dominance(u[j], u, others, &x)) core.push_back(j);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (contains_index(core, j)) continue;
      if (core.empty() || !convex_dual_cone_dominance(u[j], u, core, &x)) hard.push_back(j);
    }
  }

  if (hard.empty()) {
    r.selected = core;
    r.flags.push_back("core_shortcut");
  } else {
    auto am = assignment_model(n, hard.size(), false);
    for (auto k : core) am.m.set_variable_bounds(am.lambda[k], 1.0, 1.0);
    std::vector<std::vector<int>> pis;
    for (std::size_t h = 0; h < hard.size(); ++h) pis.push_back(add_dual_block(am.m, x, u, hard[h], am.mu[h]));
    if (opts.warm_start) {
      IndexSet warm = *opts.warm_start;
      for (auto k : core) insert_sorted(warm, k);
      std::sort(warm.begin(), warm.end());
      std::vector<double> startv(am.m.num_variables(), 0.0);
      bool ok = true;
      for (auto k : warm) startv[static_cast<std::size_t>(am.lambda[k])] = 1.0;
      for (std::size_t h = 0; h < hard.size() && ok; ++h) {
        const std::size_t j = hard[h];
        if (contains_index(warm, j)) {
          startv[static_cast<std::size_t>(am.mu[h][j])] = 1.0;
          continue;
        }
        auto cert = convex_dual_cone_dominance(u[j], u, warm, &x);
        if (!cert) {
          ok = false;
          break;
        }
        for (std::size_t q = 0; q < warm.size(); ++q) {
          startv[static_cast<std::size_t>(am.mu[h][warm[q]])] = cert->weights[q];
        }
        for (std::size_t row = 0; row < x.row_count(); ++row) {
          startv[static_cast<std::size_t>(pis[h][row])] = cert->dual[row];
        }
      }
      if (ok) am.m.set_start(std::move(startv));
    }
    const auto out = solve_checked(am.m, opts.params, r);
    r.selected = selected_from(rounded(out.primal, am.lambda));
    for (auto k : core) insert_sorted(r.selected, k);
    r.flags.push_back("milp");
  }
  certify_convex(r, u, &x);
  if (!x.integral()) r.flags.push_back("relaxation");
  r.wall_seconds = seconds_since(start);
  return r;
}

ReductionResult reduce(ReductionMethod method, const ScenarioSet& u, const FeasibleSetDescription& x,
                       const ReductionOptions& opts) {
  switch (method) {
    case ReductionMethod::Red1: return reduce_type1(u, false, opts);
    case ReductionMethod::Red2: return reduce_type2(u, false, opts);
    case ReductionMethod::Red3: return reduce_type3(u, x, opts);
    case ReductionMethod::Red4: return reduce_type4_exact(u, x.enumerate(opts.enumeration_cap), opts);
    case ReductionMethod::Red4S: return reduce_type4_approx(u, x, opts);
  }
  throw std::invalid_argument("unknown reduction method");
}

std::string check_reduction_result(const ReductionResult& r) {
  if (r.selected.empty()) return "selection is empty";
  if (!std::is_sorted(r.selected.begin(), r.selected.end()) ||
      std::adjacent_find(r.selected.begin(), r.selected.end()) != r.selected.end()) {
    return "selection is not strictly increasing";
  }
  if (r.selected.back() >= r.original_size) return "selected index out of range";
  if (r.assignment.size() != r.original_size) return "assignment count differs from scenario count";
  for (std::size_t j = 0; j < r.assignment.size(); ++j) {
    const auto& a = r.assignment[j];
    const std::string who = "scenario " + std::to_string(j) + ": ";
    if (a.sources.empty()) return who + "no source";
    for (auto k : a.sources) {
      if (!contains_index(r.selected, k)) return who + "source " + std::to_string(k) + " not selected";
    }
    for (auto k : a.per_solution) {
      if (!contains_index(r.selected, k)) return who + "per-solution source not selected";
    }
    if (!a.weights.empty()) {
      if (a.weights.size() != a.sources.size()) return who + "weight count differs from source count";
      double total = 0.0;
      for (double w : a.weights) {
        if (w < -1e-12) return who + "negative weight";
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-9) return who + "weights do not sum to 1";
    }
  }
  return {};
}

}  // namespace scenred
