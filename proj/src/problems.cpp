#include "scenred/problems.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scenred {

FeasibleSetDescription selection_lp_description(SelectionSpec spec) {
  if (spec.n == 0 || spec.p < 1 || spec.p > spec.n) {
    throw std::invalid_argument("selection requires 1 <= p <= n");
  }
  const std::size_t n = spec.n;
  Matrix a(n + 2, n);
  Vector b(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    a(0, i) = 1.0;
    a(1, i) = -1.0;
    a(2 + i, i) = -1.0;
  }
  b[0] = static_cast<double>(spec.p);
  b[1] = -static_cast<double>(spec.p);
  for (std::size_t i = 0; i < n; ++i) b[2 + i] = -1.0;
  Enumerator enumerator = [spec](const FeasibleSetDescription&, std::size_t cap) {
    return enumerate_selection(spec, cap);
  };
  return FeasibleSetDescription(std::move(a), Matrix(n + 2, 0), std::move(b), true, spec,
                                std::move(enumerator));
}

LayeredProblem layered_graph(LayeredGraphSpec spec) {
  if (spec.layers < 1 || spec.width < 1) throw std::invalid_argument("layered graph needs L, W >= 1");
  LayeredGraph g;
  g.spec = spec;
  const std::size_t L = spec.layers;
  const std::size_t W = spec.width;
  g.node_count = L * W + 2;
  for (std::size_t w = 0; w < W; ++w) g.arcs.emplace_back(g.source(), g.node(0, w));
  for (std::size_t l = 0; l + 1 < L; ++l) {
    for (std::size_t u = 0; u < W; ++u) {
      for (std::size_t v = 0; v < W; ++v) g.arcs.emplace_back(g.node(l, u), g.node(l + 1, v));
    }
  }
  for (std::size_t w = 0; w < W; ++w) g.arcs.emplace_back(g.node(L - 1, w), g.sink());

  // inflow - outflow = -1 at s, +1 at e, 0 elsewhere; each equality becomes
  // the pair (row >= rhs, -row >= -rhs).
  const std::size_t nodes = g.node_count;
  const std::size_t n = g.arcs.size();
  Matrix a(2 * nodes, n);
  Vector b(2 * nodes, 0.0);
  for (std::size_t arc = 0; arc < n; ++arc) {
    const auto [tail, head] = g.arcs[arc];
    a(2 * head, arc) += 1.0;
    a(2 * tail, arc) -= 1.0;
    a(2 * head + 1, arc) -= 1.0;
    a(2 * tail + 1, arc) += 1.0;
  }
  b[2 * g.source()] = -1.0;
  b[2 * g.source() + 1] = 1.0;
  b[2 * g.sink()] = 1.0;
  b[2 * g.sink() + 1] = -1.0;
  Enumerator enumerator = [g](const FeasibleSetDescription&, std::size_t cap) {
    return enumerate_paths(g, cap);
  };
  FeasibleSetDescription d(std::move(a), Matrix(2 * nodes, 0), std::move(b), true, spec,
                           std::move(enumerator));
  return {std::move(g), std::move(d)};
}

FeasibleSetDescription family_description(const FamilySpec& family) {
  if (const auto* s = std::get_if<SelectionSpec>(&family)) return selection_lp_description(*s);
  if (const auto* l = std::get_if<LayeredGraphSpec>(&family)) return layered_graph(*l).description;
  throw MissingLpDescription("no known family to build a description from");
}

std::vector<Vector> enumerate_selection(SelectionSpec spec, std::size_t cap) {
  if (spec.p < 1 || spec.p > spec.n) throw std::invalid_argument("selection requires 1 <= p <= n");
  // Count first so the cap check does not allocate.
  double count = 1.0;
  for (std::size_t i = 0; i < spec.p; ++i) {
    count = count * static_cast<double>(spec.n - i) / static_cast<double>(i + 1);
  }
  if (std::round(count) > static_cast<double>(cap)) {
    throw EnumerationCapExceeded("selection X_{" + std::to_string(spec.n) + "," +
                                 std::to_string(spec.p) + "} has more than " + std::to_string(cap) +
                                 " solutions");
  }
  std::vector<Vector> out;
  std::vector<std::size_t> pick(spec.p);
  for (std::size_t i = 0; i < spec.p; ++i) pick[i] = i;
  while (true) {
    Vector x(spec.n, 0.0);
    for (auto i : pick) x[i] = 1.0;
    out.push_back(std::move(x));
    std::size_t i = spec.p;
    while (i > 0 && pick[i - 1] == spec.n - spec.p + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < spec.p; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::vector<Vector> enumerate_paths(const LayeredGraph& g, std::size_t cap) {
  const std::size_t L = g.spec.layers;
  const std::size_t W = g.spec.width;
  const double count = std::pow(static_cast<double>(W), static_cast<double>(L));
  if (count > static_cast<double>(cap)) {
    throw EnumerationCapExceeded("layered graph has more than " + std::to_string(cap) + " paths");
  }
  std::vector<Vector> out;
  std::vector<std::size_t> choice(L, 0);
  const std::size_t inner_offset = W;
  while (true) {
    Vector x(g.arcs.size(), 0.0);
    x[g.source_arc(choice[0])] = 1.0;
    for (std::size_t l = 0; l + 1 < L; ++l) {
      x[inner_offset + l * W * W + choice[l] * W + choice[l + 1]] = 1.0;
    }
    x[g.sink_arc(choice[L - 1])] = 1.0;
    out.push_back(std::move(x));
    std::size_t l = L;
    while (l > 0 && choice[l - 1] == W - 1) {
      choice[l - 1] = 0;
      --l;
    }
    if (l == 0) break;
    ++choice[l - 1];
  }
  return out;
}

std::vector<Vector> enumerate_solutions(const FeasibleSetDescription& x, std::size_t cap) {
  return x.enumerate(cap);
}

std::vector<FeasibleSetDescription> layered_pair_instances(const LayeredProblem& problem) {
  const auto& g = problem.graph;
  std::vector<FeasibleSetDescription> out;
  for (std::size_t u = 0; u < g.spec.width; ++u) {
    for (std::size_t v = 0; v < g.spec.width; ++v) {
      out.push_back(problem.description.with_fixed({{g.source_arc(u), 1.0}, {g.sink_arc(v), 1.0}}));
    }
  }
  return out;
}

std::pair<double, std::size_t> worst_case_value(std::span<const double> x, const ScenarioSet& u) {
  if (x.size() != u.dim()) throw DimensionMismatch("worst_case_value: dimension mismatch");
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double v = dot(x, u[k]);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  return {best, arg};
}

namespace {

struct FeasibleVars {
  std::vector<int> x;
  std::vector<int> y;
};

FeasibleVars add_feasible_set(Model& m, const FeasibleSetDescription& d, bool integer) {
  FeasibleVars v;
  for (std::size_t i = 0; i < d.dim(); ++i) {
    v.x.push_back(integer ? m.add_variable(0.0, 1.0, 0.0, VarType::Binary)
                          : m.add_variable(0.0, kInfinity));
  }
  for (std::size_t l = 0; l < d.aux_dim(); ++l) v.y.push_back(m.add_variable(-kInfinity, kInfinity));
  for (std::size_t r = 0; r < d.row_count(); ++r) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < d.dim(); ++i) {
      if (d.a()(r, i) != 0.0) terms.push_back({v.x[i], d.a()(r, i)});
    }
    for (std::size_t l = 0; l < d.aux_dim(); ++l) {
      if (d.b_aux()(r, l) != 0.0) terms.push_back({v.y[l], d.b_aux()(r, l)});
    }
    m.add_constraint(std::move(terms), Relation::GreaterEqual, d.rhs()[r]);
  }
  return v;
}

RobustSolution solve_epigraph(const FeasibleSetDescription& d, const std::vector<Vector>& costs,
                              const SolverParams& params) {
  Model m;
  auto vars = add_feasible_set(m, d, true);
  const int z = m.add_variable(-kInfinity, kInfinity, 1.0);
  for (const auto& c : costs) {
    std::vector<Term> terms{{z, 1.0}};
    for (std::size_t i = 0; i < d.dim(); ++i) {
      if (c[i] != 0.0) terms.push_back({vars.x[i], -c[i]});
    }
    m.add_constraint(std::move(terms), Relation::GreaterEqual, 0.0);
  }
  const auto out = solve_milp(m, params);
  if (!out.has_primal()) {
    throw SolverFailure("robust epigraph MILP ended with status " + to_string(out.status));
  }
  RobustSolution sol;
  for (int xi : vars.x) sol.x.push_back(out.primal[static_cast<std::size_t>(xi)]);
  sol.value = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < costs.size(); ++k) {
    const double v = dot(sol.x, costs[k]);
    if (v > sol.value) {
      sol.value = v;
      sol.argmax = k;
    }
  }
  return sol;
}

}  // namespace

RobustSolution solve_robust(const FeasibleSetDescription& x, const ScenarioSet& u,
                            const SolverParams& params) {
  if (x.dim() != u.dim()) throw DimensionMismatch("solve_robust: dimension mismatch");
  return solve_epigraph(x, u.rows(), params);
}

RobustSolution solve_robust_shifted(const FeasibleSetDescription& x, const ScenarioSet& u_hat,
                                    double t, std::span<const double> c_j,
                                    const SolverParams& params) {
  if (x.dim() != u_hat.dim() || c_j.size() != x.dim()) {
    throw DimensionMismatch("solve_robust_shifted: dimension mismatch");
  }
  std::vector<Vector> costs = u_hat.rows();
  for (auto& c : costs) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= t * c_j[i];
  }
  return solve_epigraph(x, costs, params);
}

RobustSolution solve_robust_enumerated(const std::vector<Vector>& solutions, const ScenarioSet& u) {
  if (solutions.empty()) throw std::invalid_argument("no solutions to scan");
  RobustSolution best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& x : solutions) {
    const auto [v, arg] = worst_case_value(x, u);
    if (v < best.value) {
      best.value = v;
      best.argmax = arg;
      best.x = x;
    }
  }
  return best;
}

double nominal_value(const FeasibleSetDescription& x, std::span<const double> c, bool integer,
                     const SolverParams& params) {
  if (c.size() != x.dim()) throw DimensionMismatch("nominal_value: dimension mismatch");
  Model m;
  auto vars = add_feasible_set(m, x, integer);
  for (std::size_t i = 0; i < x.dim(); ++i) m.set_objective(vars.x[i], c[i]);
  const auto out = integer ? solve_milp(m, params) : solve_lp(m, params);
  if (!out.optimal()) throw SolverFailure("nominal problem ended with status " + to_string(out.status));
  return out.objective;
}

SelectionSpec selection_relaxation_for(const FeasibleSetDescription& x, const SolverParams& params) {
  if (const auto* s = std::get_if<SelectionSpec>(&x.family())) return *s;
  const Vector ones(x.dim(), 1.0);
  const double alpha = nominal_value(x, ones, true, params);
  return {x.dim(), static_cast<std::size_t>(std::llround(alpha))};
}

SetCoverInstance set_cover_instance(std::size_t items, const std::vector<std::vector<std::size_t>>& sets) {
  if (items == 0 || sets.empty()) throw std::invalid_argument("set cover needs items and sets");
  std::vector<Vector> rows;
  std::vector<bool> covered(items, false);
  for (const auto& s : sets) {
    Vector c(items, 0.0);
    for (auto e : s) {
      if (e >= items) throw std::out_of_range("set references unknown item");
      c[e] = 1.0;
      covered[e] = true;
    }
    rows.push_back(std::move(c));
  }
  for (bool b : covered) {
    if (!b) throw std::invalid_argument("every item must belong to some set");
  }
  return {ScenarioSet(rows), selection_lp_description({items, 1})};
}

}  // namespace scenred
