#include "scenred/approximation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "scenred/dominance.hpp"
#include "scenred/rng.hpp"

namespace scenred {

std::string to_string(ApproxMethod method) {
  switch (method) {
    case ApproxMethod::App12: return "App-1/2";
    case ApproxMethod::App3: return "App-3";
    case ApproxMethod::App4: return "App-4";
    case ApproxMethod::KMeans: return "KMeans";
    case ApproxMethod::ClusterRepresent: return "ClusterRepresent";
  }
  return "?";
}

ApproxMethod parse_approx_method(const std::string& name) {
  std::string s;
  for (char ch : name) {
    if (ch != '-' && ch != '_' && ch != '/' && ch != ' ') {
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (s == "app12" || s == "app1" || s == "app2") return ApproxMethod::App12;
  if (s == "app3") return ApproxMethod::App3;
  if (s == "app4") return ApproxMethod::App4;
  if (s == "kmeans") return ApproxMethod::KMeans;
  if (s == "clusterrepresent" || s == "cluster") return ApproxMethod::ClusterRepresent;
  throw std::invalid_argument("unknown approximation method '" + name + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double beta_of(double t) { return t > 0.0 ? 1.0 / t : kInfinity; }

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("representative count K=" + std::to_string(k) + " must lie in [1, " +
                                std::to_string(n) + "]");
  }
}

void check_x(const ScenarioSet& u, const FeasibleSetDescription& x) {
  if (x.dim() == 0) throw MissingLpDescription("an LP description of X is required");
  if (x.dim() != u.dim()) throw DimensionMismatch("feasible set and scenario dimensions differ");
}

std::vector<Vector> reps_from(const Matrix& lambda, const ScenarioSet& u) {
  std::vector<Vector> reps(lambda.rows(), Vector(u.dim(), 0.0));
  for (std::size_t k = 0; k < lambda.rows(); ++k) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double w = lambda(k, j);
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < u.dim(); ++i) reps[k][i] += w * u[j][i];
    }
  }
  return reps;
}

// Clamp tiny negatives from LP round-off and renormalise rows.
void normalise_rows(Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double total = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      m(r, c) = std::max(0.0, m(r, c));
      total += m(r, c);
    }
    if (total <= 0.0) continue;
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) /= total;
  }
}

// Lexicographic order of scenarios; position p holds original index order[p].
struct Canonical {
  ScenarioSet u;
  IndexSet order;
};

Canonical canonicalise(const ScenarioSet& u) {
  Canonical c;
  c.order.resize(u.size());
  std::iota(c.order.begin(), c.order.end(), std::size_t{0});
  std::stable_sort(c.order.begin(), c.order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(u[a].begin(), u[a].end(), u[b].begin(), u[b].end());
  });
  c.u = u.subset(c.order);
  return c;
}

Matrix weights_to_canonical(const Matrix& lambda, const Canonical& c) {
  Matrix out(lambda.rows(), lambda.cols());
  for (std::size_t k = 0; k < lambda.rows(); ++k) {
    for (std::size_t p = 0; p < c.order.size(); ++p) out(k, p) = lambda(k, c.order[p]);
  }
  return out;
}

Matrix weights_from_canonical(const Matrix& lambda, const Canonical& c) {
  Matrix out(lambda.rows(), lambda.cols());
  for (std::size_t k = 0; k < lambda.rows(); ++k) {
    for (std::size_t p = 0; p < c.order.size(); ++p) out(k, c.order[p]) = lambda(k, p);
  }
  return out;
}

Matrix assignment_from_canonical(const Matrix& mu, const Canonical& c) {
  Matrix out(mu.rows(), mu.cols());
  for (std::size_t p = 0; p < c.order.size(); ++p) {
    for (std::size_t k = 0; k < mu.cols(); ++k) out(c.order[p], k) = mu(p, k);
  }
  return out;
}

// ---- LP blocks ---------------------------------------------------------

struct BlockResult {
  double t = 0.0;
  Matrix lambda;  // K x N (B-steps)
  Matrix mu;      // N x K (A-steps)
};

SolveOutcome solve_or_throw(const Model& m, const SolverParams& params, const char* what) {
  auto out = solve_lp(m, params);
  if (!out.optimal()) throw SolverFailure(std::string(what) + " LP ended with status " + to_string(out.status));
  return out;
}

// Dual block for scenario j: variables pi >= 0 with b^T pi >= 0 and
// B^T pi = 0. Returns the pi ids; callers add the A^T pi rows.
std::vector<int> add_pi(Model& m, const FeasibleSetDescription& x) {
  std::vector<int> pi;
  for (std::size_t r = 0; r < x.row_count(); ++r) pi.push_back(m.add_variable(0.0, kInfinity));
  std::vector<Term> btp;
  for (std::size_t r = 0; r < x.row_count(); ++r) {
    if (x.rhs()[r] != 0.0) btp.push_back({pi[r], x.rhs()[r]});
  }
  if (!btp.empty()) m.add_constraint(std::move(btp), Relation::GreaterEqual, 0.0);
  for (std::size_t l = 0; l < x.aux_dim(); ++l) {
    std::vector<Term> terms;
    for (std::size_t r = 0; r < x.row_count(); ++r) {
      if (x.b_aux()(r, l) != 0.0) terms.push_back({pi[r], x.b_aux()(r, l)});
    }
    m.add_constraint(std::move(terms), Relation::Equal, 0.0);
  }
  return pi;
}

void add_atpi(std::vector<Term>& terms, const std::vector<int>& pi, const FeasibleSetDescription& x, std::size_t i) {
  for (std::size_t r = 0; r < x.row_count(); ++r) {
    if (x.a()(r, i) != 0.0) terms.push_back({pi[r], x.a()(r, i)});
  }
}

// Fixed representatives: max t over (t, mu[, pi]).
BlockResult assignment_step(const std::vector<Vector>& reps, const ScenarioSet& u, const FeasibleSetDescription* x,
                            const SolverParams& params) {
  const std::size_t n_sc = u.size();
  const std::size_t kk = reps.size();
  Model m;
  m.set_sense(ObjSense::Maximize);
  const int t = m.add_variable(0.0, 1.0, 1.0);
  std::vector<std::vector<int>> mu(n_sc);
  for (std::size_t j = 0; j < n_sc; ++j) {
    std::vector<Term> sum;
    for (std::size_t k = 0; k < kk; ++k) {
      mu[j].push_back(m.add_variable(0.0, 1.0));
      sum.push_back({mu[j][k], 1.0});
    }
    m.add_constraint(std::move(sum), Relation::Equal, 1.0);
    std::vector<int> pi;
    if (x != nullptr) pi = add_pi(m, *x);
    for (std::size_t i = 0; i < u.dim(); ++i) {
      // [A^T pi]_i - sum_k mu_jk c_hat^k_i + t c^j_i <= 0
      std::vector<Term> terms;
      if (x != nullptr) add_atpi(terms, pi, *x, i);
      for (std::size_t k = 0; k < kk; ++k) {
        if (reps[k][i] != 0.0) terms.push_back({mu[j][k], -reps[k][i]});
      }
      if (u[j][i] != 0.0) terms.push_back({t, u[j][i]});
      if (!terms.empty()) m.add_constraint(std::move(terms), Relation::LessEqual, 0.0);
    }
  }
  const auto out = solve_or_throw(m, params, "assignment");
  BlockResult r;
  r.t = std::clamp(out.primal[static_cast<std::size_t>(t)], 0.0, 1.0);
  r.mu = Matrix(n_sc, kk);
  for (std::size_t j = 0; j < n_sc; ++j) {
    for (std::size_t k = 0; k < kk; ++k) r.mu(j, k) = out.primal[static_cast<std::size_t>(mu[j][k])];
  }
  normalise_rows(r.mu);
  return r;
}

// Fixed assignment mu: max t over (t, lambda[, pi]).
BlockResult weight_step(const Matrix& mu, const ScenarioSet& u, const FeasibleSetDescription* x,
                        const SolverParams& params) {
  const std::size_t n_sc = u.size();
  const std::size_t kk = mu.cols();
  Model m;
  m.set_sense(ObjSense::Maximize);
  const int t = m.add_variable(0.0, 1.0, 1.0);
  std::vector<std::vector<int>> lambda(kk);
  for (std::size_t k = 0; k < kk; ++k) {
    std::vector<Term> sum;
    for (std::size_t l = 0; l < n_sc; ++l) {
      lambda[k].push_back(m.add_variable(0.0, 1.0));
      sum.push_back({lambda[k][l], 1.0});
    }
    m.add_constraint(std::move(sum), Relation::Equal, 1.0);
  }
  for (std::size_t j = 0; j < n_sc; ++j) {
    std::vector<int> pi;
    if (x != nullptr) pi = add_pi(m, *x);
    for (std::size_t i = 0; i < u.dim(); ++i) {
      std::vector<Term> terms;
      if (x != nullptr) add_atpi(terms, pi, *x, i);
      for (std::size_t k = 0; k < kk; ++k) {
        const double w = mu(j, k);
        if (w <= 0.0) continue;
        for (std::size_t l = 0; l < n_sc; ++l) {
          if (u[l][i] != 0.0) terms.push_back({lambda[k][l], -w * u[l][i]});
        }
      }
      if (u[j][i] != 0.0) terms.push_back({t, u[j][i]});
      if (!terms.empty()) m.add_constraint(std::move(terms), Relation::LessEqual, 0.0);
    }
  }
  const auto out = solve_or_throw(m, params, "hull weight");
  BlockResult r;
  r.t = out.primal[static_cast<std::size_t>(t)];
  r.lambda = Matrix(kk, n_sc);
  for (std::size_t k = 0; k < kk; ++k) {
    for (std::size_t l = 0; l < n_sc; ++l) r.lambda(k, l) = out.primal[static_cast<std::size_t>(lambda[k][l])];
  }
  normalise_rows(r.lambda);
  return r;
}

struct AlternatingRun {
  Matrix lambda;
  Matrix mu;
  double t = 0.0;
  std::vector<TraceEntry> trace;
};

AlternatingRun alternate(const ScenarioSet& u, const FeasibleSetDescription* x, Matrix lambda,
                         const AlternatingOpts& opts) {
  AlternatingRun run;
  auto a = assignment_step(reps_from(lambda, u), u, x, opts.params);
  run.lambda = std::move(lambda);
  run.mu = a.mu;
  run.t = a.t;
  run.trace.push_back({run.t, 0.0});
  for (std::size_t it = 0; it < opts.max_iterations && run.t < 1.0 - 1e-12; ++it) {
    auto b = weight_step(run.mu, u, x, opts.params);
    auto a2 = assignment_step(reps_from(b.lambda, u), u, x, opts.params);
    const double improvement = a2.t - run.t;
    if (improvement > 0.0) {
      run.lambda = std::move(b.lambda);
      run.mu = std::move(a2.mu);
      run.t = a2.t;
    }
    run.trace.push_back({run.t, improvement});
    if (improvement < opts.tolerance) break;
  }
  return run;
}

Matrix indicator_weights(const std::vector<IndexSet>& clusters, std::size_t n) {
  Matrix lambda(clusters.size(), n);
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    for (auto j : clusters[k]) lambda(k, j) = 1.0 / static_cast<double>(clusters[k].size());
  }
  return lambda;
}

std::vector<IndexSet> clusters_of(const IndexSet& labels, std::size_t k) {
  std::vector<IndexSet> cl(k);
  for (std::size_t j = 0; j < labels.size(); ++j) cl[labels[j]].push_back(j);
  return cl;
}

// Starting hull weights in canonical order.
std::vector<Matrix> generate_starts(const Canonical& c, std::size_t k, const AlternatingOpts& opts,
                                    const std::vector<Matrix>& extra) {
  const std::size_t n = c.u.size();
  std::vector<Matrix> starts;
  for (const auto& w : opts.initial_weights) {
    if (w.rows() != k || w.cols() != n) throw DimensionMismatch("initial hull weights must be K x N");
    starts.push_back(weights_to_canonical(w, c));
  }
  for (const auto& w : extra) starts.push_back(w);
  const std::size_t budget = std::max<std::size_t>(opts.starts, 1);
  std::size_t generated = 0;
  auto push = [&](Matrix m) {
    if (generated < budget) {
      starts.push_back(std::move(m));
      ++generated;
    }
  };
  {
    const auto km = kmeans(c.u, k, opts.seed);
    push(indicator_weights(clusters_of(km.labels, k), n));
  }
  const IndexSet supported = supported_filter(c.u);
  Rng rng(substream_seed(opts.seed, 0x5eed));
  auto unit_rows = [&](const IndexSet& pick) {
    Matrix m(k, n);
    for (std::size_t r = 0; r < k; ++r) m(r, pick[r]) = 1.0;
    return m;
  };
  if (supported.size() <= k) {
    IndexSet pick = supported;
    for (std::size_t j = 0; j < n && pick.size() < k; ++j) {
      if (std::find(pick.begin(), pick.end(), j) == pick.end()) pick.push_back(j);
    }
    push(unit_rows(pick));
  }
  for (std::size_t s = 1; generated < budget; ++s) {
    if (s % 2 == 1 && supported.size() > k) {
      IndexSet pool = supported;
      IndexSet pick;
      for (std::size_t r = 0; r < k; ++r) {
        const auto idx = static_cast<std::size_t>(rng.below(pool.size()));
        pick.push_back(pool[idx]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
      }
      push(unit_rows(pick));
    } else {
      const auto km = kmeans(c.u, k, substream_seed(opts.seed, s));
      push(indicator_weights(clusters_of(km.labels, k), n));
    }
    if (s > 4 * budget + 8) break;
  }
  return starts;
}

ApproximationResult finish(ApproxMethod method, const ScenarioSet& u, const Canonical& c, const AlternatingRun& best,
                           std::vector<TraceEntry> trace, Clock::time_point start) {
  ApproximationResult r;
  r.method = method;
  r.hull_weights = weights_from_canonical(best.lambda, c);
  r.representatives = ScenarioSet(reps_from(r.hull_weights, u));
  r.assignment = assignment_from_canonical(best.mu, c);
  r.t = best.t;
  r.beta = beta_of(best.t);
  r.trace = std::move(trace);
  r.wall_seconds = seconds_since(start);
  return r;
}

ApproximationResult identity_result(ApproxMethod method, const ScenarioSet& u, Clock::time_point start) {
  ApproximationResult r;
  r.method = method;
  const std::size_t n = u.size();
  r.hull_weights = Matrix(n, n);
  r.assignment = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    r.hull_weights(j, j) = 1.0;
    r.assignment(j, j) = 1.0;
  }
  r.representatives = u;
  r.t = 1.0;
  r.beta = 1.0;
  r.trace.push_back({1.0, 0.0});
  r.wall_seconds = seconds_since(start);
  return r;
}

ApproximationResult alternating_method(ApproxMethod method, const ScenarioSet& u, const FeasibleSetDescription* x,
                                       std::size_t k, const AlternatingOpts& opts, const std::vector<Matrix>& extra) {
  const auto start = Clock::now();
  check_k(k, u.size());
  if (k == u.size()) return identity_result(method, u, start);
  const auto c = canonicalise(u);
  const auto starts = generate_starts(c, k, opts, extra);
  AlternatingRun best;
  best.t = -1.0;
  std::vector<TraceEntry> trace;
  for (const auto& s : starts) {
    auto run = alternate(c.u, x, s, opts);
    trace.insert(trace.end(), run.trace.begin(), run.trace.end());
    if (run.t > best.t + 1e-12) best = std::move(run);
    if (best.t >= 1.0 - 1e-12) break;
  }
  return finish(method, u, c, best, std::move(trace), start);
}

// ---- constraint generation ---------------------------------------------

void add_unique(std::vector<Vector>& pool, const Vector& x) {
  if (std::find(pool.begin(), pool.end(), x) == pool.end()) pool.push_back(x);
}

// max over (x in X', j) side: per candidate, M(x) = max_j c^j^T x.
std::vector<double> candidate_maxima(const std::vector<Vector>& pool, const ScenarioSet& u) {
  std::vector<double> mx;
  for (const auto& x : pool) mx.push_back(worst_case_value(x, u).first);
  return mx;
}

// Closed form of the master at fixed representatives:
// t = min over X' of max_k c_hat^k^T x / M(x), capped at 1.
double master_t(const std::vector<Vector>& reps, const std::vector<Vector>& pool, const std::vector<double>& mx,
                IndexSet* argmax) {
  double t = 1.0;
  if (argmax != nullptr) argmax->assign(pool.size(), 0);
  for (std::size_t s = 0; s < pool.size(); ++s) {
    double best = -kInfinity;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < reps.size(); ++k) {
      const double v = dot(reps[k], pool[s]);
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    if (argmax != nullptr) (*argmax)[s] = arg;
    if (mx[s] > 0.0) t = std::min(t, best / mx[s]);
  }
  return std::max(t, 0.0);
}

// Fixed per-candidate assignment: max t over hull weights.
std::pair<double, Matrix> master_weight_step(const ScenarioSet& u, std::size_t k, const std::vector<Vector>& pool,
                                             const std::vector<double>& mx, const IndexSet& argmax,
                                             const SolverParams& params) {
  const std::size_t n = u.size();
  Model m;
  m.set_sense(ObjSense::Maximize);
  const int t = m.add_variable(0.0, 1.0, 1.0);
  std::vector<std::vector<int>> lambda(k);
  for (std::size_t r = 0; r < k; ++r) {
    std::vector<Term> sum;
    for (std::size_t l = 0; l < n; ++l) {
      lambda[r].push_back(m.add_variable(0.0, 1.0));
      sum.push_back({lambda[r][l], 1.0});
    }
    m.add_constraint(std::move(sum), Relation::Equal, 1.0);
  }
  for (std::size_t s = 0; s < pool.size(); ++s) {
    if (mx[s] <= 0.0) continue;
    std::vector<Term> terms{{t, mx[s]}};
    for (std::size_t l = 0; l < n; ++l) {
      const double v = dot(u[l], pool[s]);
      if (v != 0.0) terms.push_back({lambda[argmax[s]][l], -v});
    }
    m.add_constraint(std::move(terms), Relation::LessEqual, 0.0);
  }
  const auto out = solve_or_throw(m, params, "master");
  Matrix w(k, n);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t l = 0; l < n; ++l) w(r, l) = out.primal[static_cast<std::size_t>(lambda[r][l])];
  }
  normalise_rows(w);
  return {out.primal[static_cast<std::size_t>(t)], std::move(w)};
}

// Adds violating subproblem minimisers to the pool; true if any was new.
bool separate(const std::vector<Vector>& reps, double t, const ScenarioSet& u, const RobustOracle& oracle,
              double threshold, std::vector<Vector>& pool) {
  const ScenarioSet c_hat(reps);
  bool added = false;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const auto sol = oracle.shifted(c_hat, t, u[j]);
    if (sol.value < -threshold) {
      const std::size_t before = pool.size();
      add_unique(pool, sol.x);
      added = added || pool.size() > before;
    }
  }
  return added;
}

struct CcgRun {
  Matrix lambda;
  double t = 0.0;
  std::vector<Vector> pool;
  IndexSet argmax;
  std::vector<TraceEntry> trace;
  bool iteration_limit = false;
};

CcgRun ccg_from(const ScenarioSet& u, std::size_t k, Matrix lambda, const RobustOracle& oracle, const CcgOpts& opts) {
  CcgRun run;
  run.lambda = std::move(lambda);
  run.pool.push_back(oracle.robust(ScenarioSet(reps_from(run.lambda, u))).x);
  double prev = 1.0;
  for (std::size_t it = 0;; ++it) {
    auto mx = candidate_maxima(run.pool, u);
    run.t = master_t(reps_from(run.lambda, u), run.pool, mx, &run.argmax);
    for (std::size_t inner = 0; inner < opts.alternating.max_iterations && run.t < 1.0 - 1e-12; ++inner) {
      Matrix w = master_weight_step(u, k, run.pool, mx, run.argmax, opts.alternating.params).second;
      IndexSet arg;
      const double ta = master_t(reps_from(w, u), run.pool, mx, &arg);
      const double improvement = ta - run.t;
      if (improvement > 0.0) {
        run.lambda = std::move(w);
        run.t = ta;
        run.argmax = std::move(arg);
      }
      if (improvement < opts.alternating.tolerance) break;
    }
    run.trace.push_back({run.t, run.t - prev});
    prev = run.t;
    if (!separate(reps_from(run.lambda, u), run.t, u, oracle, opts.threshold, run.pool)) break;
    if (it + 1 >= opts.max_iterations) {
      run.iteration_limit = true;
      break;
    }
  }
  return run;
}

T4Guarantee t4_impl(const std::vector<Vector>& reps, const ScenarioSet& u, const RobustOracle& oracle,
                    const CcgOpts& opts) {
  T4Guarantee g;
  g.candidate_solutions.push_back(oracle.robust(ScenarioSet(reps)).x);
  for (std::size_t it = 0;; ++it) {
    g.t = master_t(reps, g.candidate_solutions, candidate_maxima(g.candidate_solutions, u), nullptr);
    g.iterations = it + 1;
    if (!separate(reps, g.t, u, oracle, opts.threshold, g.candidate_solutions)) break;
    if (it + 1 >= opts.max_iterations) {
      g.iteration_limit = true;
      break;
    }
  }
  g.beta = beta_of(g.t);
  return g;
}

}  // namespace

RobustOracle::RobustOracle(const FeasibleSetDescription& x, const SolverParams& params, std::size_t enumeration_limit)
    : x_(&x), params_(params) {
  if (x.has_enumerator()) {
    try {
      solutions_ = x.enumerate(enumeration_limit);
      if (solutions_->empty()) solutions_.reset();
    } catch (const EnumerationCapExceeded&) {
      solutions_.reset();
    }
  }
}

RobustSolution RobustOracle::robust(const ScenarioSet& u) const {
  if (solutions_) return solve_robust_enumerated(*solutions_, u);
  return solve_robust(*x_, u, params_);
}

RobustSolution RobustOracle::shifted(const ScenarioSet& c_hat, double t, std::span<const double> c) const {
  if (!solutions_) return solve_robust_shifted(*x_, c_hat, t, c, params_);
  RobustSolution best;
  best.value = kInfinity;
  for (const auto& x : *solutions_) {
    const double base = t * dot(c, x);
    double worst = -kInfinity;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < c_hat.size(); ++k) {
      const double v = dot(c_hat[k], x) - base;
      if (v > worst) {
        worst = v;
        arg = k;
      }
    }
    if (worst < best.value) {
      best.value = worst;
      best.x = x;
      best.argmax = arg;
    }
  }
  return best;
}

ApproximationResult approx_type12(const ScenarioSet& u, std::size_t k, const AlternatingOpts& opts) {
  return alternating_method(ApproxMethod::App12, u, nullptr, k, opts, {});
}

ApproximationResult approx_type3(const ScenarioSet& u, const FeasibleSetDescription& x, std::size_t k,
                                 const AlternatingOpts& opts) {
  check_x(u, x);
  check_k(k, u.size());
  if (k == u.size()) return identity_result(ApproxMethod::App3, u, Clock::now());
  // The (i') optimum is feasible for (iii'), so starting there keeps App-3
  // at least as good. Callers passing their own starts are trusted to
  // include it.
  if (!opts.initial_weights.empty()) return alternating_method(ApproxMethod::App3, u, &x, k, opts, {});
  const auto base = approx_type12(u, k, opts);
  const auto c = canonicalise(u);
  return alternating_method(ApproxMethod::App3, u, &x, k, opts, {weights_to_canonical(base.hull_weights, c)});
}

ApproximationResult approx_type4_ccg(const ScenarioSet& u, const FeasibleSetDescription& x, std::size_t k,
                                     const CcgOpts& opts) {
  const auto start = Clock::now();
  check_x(u, x);
  check_k(k, u.size());
  if (k == u.size()) {
    auto r = identity_result(ApproxMethod::App4, u, start);
    r.assignment = Matrix();
    return r;
  }
  const RobustOracle oracle(x, opts.alternating.params, opts.enumeration_limit);
  std::vector<Matrix> starts = opts.alternating.initial_weights;
  {
    const auto km = kmeans(u, k, opts.alternating.seed);
    starts.push_back(indicator_weights(clusters_of(km.labels, k), u.size()));
  }
  if (opts.alternating.initial_weights.empty()) starts.push_back(approx_type12(u, k, opts.alternating).hull_weights);

  ApproximationResult best;
  best.method = ApproxMethod::App4;
  best.t = -1.0;
  for (const auto& s : starts) {
    if (s.rows() != k || s.cols() != u.size()) throw DimensionMismatch("initial hull weights must be K x N");
    auto run = ccg_from(u, k, s, oracle, opts);
    best.trace.insert(best.trace.end(), run.trace.begin(), run.trace.end());
    double t = run.t;
    bool limit = false;
    std::vector<Vector> pool = run.pool;
    if (run.iteration_limit) {
      const auto g = t4_impl(reps_from(run.lambda, u), u, oracle, opts);
      t = g.t;
      limit = g.iteration_limit;
      pool = g.candidate_solutions;
    }
    if (t > best.t + 1e-12) {
      best.t = t;
      best.hull_weights = run.lambda;
      best.candidate_solutions = std::move(pool);
      best.iteration_limit = limit;
    }
    // The start itself is a valid answer; never report worse than it.
    const auto g0 = t4_impl(reps_from(s, u), u, oracle, opts);
    if (g0.t > best.t + 1e-12) {
      best.t = g0.t;
      best.hull_weights = s;
      best.candidate_solutions = g0.candidate_solutions;
      best.iteration_limit = g0.iteration_limit;
    }
  }
  normalise_rows(best.hull_weights);
  const auto reps = reps_from(best.hull_weights, u);
  best.representatives = ScenarioSet(reps);
  master_t(reps, best.candidate_solutions, candidate_maxima(best.candidate_solutions, u), &best.solution_assignment);
  best.beta = beta_of(best.t);
  best.wall_seconds = seconds_since(start);
  return best;
}

double evaluate_guarantee_t12(const ScenarioSet& reps, const ScenarioSet& u, const SolverParams& params) {
  if (reps.dim() != u.dim()) throw DimensionMismatch("representative and scenario dimensions differ");
  return beta_of(assignment_step(reps.rows(), u, nullptr, params).t);
}

double evaluate_guarantee_t3(const ScenarioSet& reps, const ScenarioSet& u, const FeasibleSetDescription& x,
                             const SolverParams& params) {
  if (reps.dim() != u.dim()) throw DimensionMismatch("representative and scenario dimensions differ");
  check_x(u, x);
  return beta_of(assignment_step(reps.rows(), u, &x, params).t);
}

T4Guarantee evaluate_guarantee_t4(const ScenarioSet& reps, const ScenarioSet& u, const RobustOracle& oracle,
                                  const CcgOpts& opts) {
  if (reps.dim() != u.dim()) throw DimensionMismatch("representative and scenario dimensions differ");
  check_x(u, oracle.description());
  return t4_impl(reps.rows(), u, oracle, opts);
}

T4Guarantee evaluate_guarantee_t4(const ScenarioSet& reps, const ScenarioSet& u, const FeasibleSetDescription& x,
                                  const CcgOpts& opts) {
  const RobustOracle oracle(x, opts.alternating.params, opts.enumeration_limit);
  return evaluate_guarantee_t4(reps, u, oracle, opts);
}

KMeansClustering kmeans(const ScenarioSet& u, std::size_t k, std::uint64_t seed, std::size_t max_iterations) {
  check_k(k, u.size());
  const std::size_t n = u.size();
  const std::size_t d = u.dim();
  auto dist2 = [&](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
  };
  Rng rng(seed);
  KMeansClustering km;
  // k-means++ seeding.
  IndexSet chosen{static_cast<std::size_t>(rng.below(n))};
  std::vector<double> nearest(n, kInfinity);
  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      nearest[j] = std::min(nearest[j], dist2(u[j], u[chosen.back()]));
      total += nearest[j];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      double target = rng.uniform01() * total;
      for (std::size_t j = 0; j < n; ++j) {
        if (nearest[j] <= 0.0) continue;
        pick = j;
        target -= nearest[j];
        if (target < 0.0) break;
      }
    }
    if (pick == n || std::find(chosen.begin(), chosen.end(), pick) != chosen.end()) {
      // All remaining points coincide with a centre: take unused indices.
      IndexSet unused;
      for (std::size_t j = 0; j < n; ++j) {
        if (std::find(chosen.begin(), chosen.end(), j) == chosen.end()) unused.push_back(j);
      }
      pick = unused[static_cast<std::size_t>(rng.below(unused.size()))];
    }
    chosen.push_back(pick);
  }
  for (auto j : chosen) km.centroids.push_back(u.scenario(j));
  km.labels.assign(n, 0);

  for (std::size_t it = 0; it < std::max<std::size_t>(max_iterations, 1); ++it) {
    bool changed = it == 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t best = 0;
      double best_d = kInfinity;
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = dist2(u[j], km.centroids[c]);
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      if (km.labels[j] != best) {
        km.labels[j] = best;
        changed = true;
      }
    }
    // Empty clusters take the point farthest from its centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (std::find(km.labels.begin(), km.labels.end(), c) != km.labels.end()) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t j = 0; j < n; ++j) {
        const auto owner = km.labels[j];
        if (std::count(km.labels.begin(), km.labels.end(), owner) <= 1) continue;
        const double dd = dist2(u[j], km.centroids[owner]);
        if (dd > far_d) {
          far_d = dd;
          far = j;
        }
      }
      km.labels[far] = c;
      changed = true;
    }
    std::vector<Vector> next(k, Vector(d, 0.0));
    std::vector<std::size_t> count(k, 0);
    for (std::size_t j = 0; j < n; ++j) {
      ++count[km.labels[j]];
      for (std::size_t i = 0; i < d; ++i) next[km.labels[j]][i] += u[j][i];
    }
    for (std::size_t c = 0; c < k; ++c) {
      for (auto& v : next[c]) v /= static_cast<double>(count[c]);
    }
    km.centroids = std::move(next);
    km.iterations = it + 1;
    if (!changed) break;
  }
  return km;
}

ApproximationResult kmeans_baseline(const ScenarioSet& u, std::size_t k, std::uint64_t seed,
                                    const SolverParams& params) {
  const auto start = Clock::now();
  const auto km = kmeans(u, k, seed);
  ApproximationResult r;
  r.method = ApproxMethod::KMeans;
  r.hull_weights = indicator_weights(clusters_of(km.labels, k), u.size());
  const auto reps = reps_from(r.hull_weights, u);
  r.representatives = ScenarioSet(reps);
  const auto a = assignment_step(reps, u, nullptr, params);
  r.assignment = a.mu;
  r.t = a.t;
  r.beta = beta_of(a.t);
  r.cluster_of = km.labels;
  r.trace.push_back({a.t, 0.0});
  r.wall_seconds = seconds_since(start);
  return r;
}

ApproximationResult cluster_then_represent(const ScenarioSet& u, const IndexSet& labels, std::size_t k,
                                           ApproxMethod inner, const FeasibleSetDescription* x,
                                           const AlternatingOpts& opts) {
  const auto start = Clock::now();
  check_k(k, u.size());
  if (labels.size() != u.size()) throw DimensionMismatch("one cluster label per scenario is required");
  if (inner != ApproxMethod::App12 && inner != ApproxMethod::App3) {
    throw std::invalid_argument("cluster-then-represent supports App-1/2 or App-3 inside");
  }
  if (inner == ApproxMethod::App3 && x == nullptr) throw MissingLpDescription("App-3 needs an LP description");
  const auto cl = clusters_of(labels, k);
  ApproximationResult r;
  r.method = ApproxMethod::ClusterRepresent;
  r.hull_weights = Matrix(k, u.size());
  r.assignment = Matrix(u.size(), k);
  r.cluster_of = labels;
  r.t = 1.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (cl[c].empty()) throw std::invalid_argument("cluster " + std::to_string(c) + " is empty");
    const auto sub = u.subset(cl[c]);
    const auto part = inner == ApproxMethod::App12 ? approx_type12(sub, 1, opts) : approx_type3(sub, *x, 1, opts);
    for (std::size_t q = 0; q < cl[c].size(); ++q) {
      r.hull_weights(c, cl[c][q]) = part.hull_weights(0, q);
      r.assignment(cl[c][q], c) = 1.0;
    }
    r.t = std::min(r.t, part.t);
    r.trace.insert(r.trace.end(), part.trace.begin(), part.trace.end());
  }
  r.representatives = ScenarioSet(reps_from(r.hull_weights, u));
  r.beta = beta_of(r.t);
  r.wall_seconds = seconds_since(start);
  return r;
}

ApproximationResult cluster_then_represent(const ScenarioSet& u, std::size_t k, ApproxMethod inner,
                                           const FeasibleSetDescription* x, const AlternatingOpts& opts) {
  const auto km = kmeans(u, k, opts.seed);
  return cluster_then_represent(u, km.labels, k, inner, x, opts);
}

double ub_ratio(const ScenarioSet& reduced, const ScenarioSet& u, const RobustOracle& oracle) {
  if (reduced.dim() != u.dim()) throw DimensionMismatch("reduced and original dimensions differ");
  const auto x_hat = oracle.robust(reduced);
  const double num = worst_case_value(x_hat.x, u).first;
  const double opt = oracle.robust(u).value;
  if (opt <= 1e-12) return num <= 1e-12 ? 1.0 : kInfinity;
  return num / opt;
}

double ub_ratio(const ScenarioSet& reduced, const ScenarioSet& u, const FeasibleSetDescription& x,
                const SolverParams& params) {
  const RobustOracle oracle(x, params);
  return ub_ratio(reduced, u, oracle);
}

double hull_identity_error(const ApproximationResult& r, const ScenarioSet& u) {
  const auto reps = reps_from(r.hull_weights, u);
  double err = 0.0;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    for (std::size_t i = 0; i < u.dim(); ++i) err = std::max(err, std::abs(reps[k][i] - r.representatives[k][i]));
  }
  return err;
}

}  // namespace scenred
