#include "scenred/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "scenred/dominance.hpp"
#include "scenred/rng.hpp"

namespace scenred {

std::string to_string(CostDistribution d) {
  return d == CostDistribution::UniformReal01 ? "UniformReal01" : "UniformInt1to100";
}

CostDistribution parse_distribution(const std::string& name) {
  std::string s;
  for (char ch : name) {
    if (std::isalnum(static_cast<unsigned char>(ch))) s.push_back(static_cast<char>(std::tolower(ch)));
  }
  if (s == "real" || s == "uniform01" || s == "uniformreal01" || s == "real01") return CostDistribution::UniformReal01;
  if (s == "int" || s == "int1to100" || s == "uniformint1to100" || s == "integer") {
    return CostDistribution::UniformInt1to100;
  }
  throw std::invalid_argument("unknown cost distribution '" + name + "'");
}

ScenarioSet sample_scenarios(std::size_t n, std::size_t count, CostDistribution dist, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> rows(count, Vector(n));
  for (auto& row : rows) {
    for (auto& v : row) {
      v = dist == CostDistribution::UniformReal01 ? rng.uniform01() : static_cast<double>(rng.uniform_int(1, 100));
    }
  }
  return ScenarioSet(rows);
}

std::string family_label(const FamilySpec& f) {
  if (const auto* s = std::get_if<SelectionSpec>(&f)) {
    return "selection(n=" + std::to_string(s->n) + ",p=" + std::to_string(s->p) + ")";
  }
  if (const auto* l = std::get_if<LayeredGraphSpec>(&f)) {
    return "layered(L=" + std::to_string(l->layers) + ",W=" + std::to_string(l->width) + ")";
  }
  return "custom";
}

std::size_t family_dim(const FamilySpec& f) {
  if (const auto* s = std::get_if<SelectionSpec>(&f)) return s->n;
  if (const auto* l = std::get_if<LayeredGraphSpec>(&f)) {
    return (l->layers - 1) * l->width * l->width + 2 * l->width;
  }
  throw std::invalid_argument("family has no dimension");
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t instance) { return substream_seed(seed, instance); }

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs task(i) for i in [0, count) on `jobs` threads. Each task writes only
// its own output slot, so ordering of results does not depend on scheduling.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct FamilyContext {
  FamilySpec spec;
  FeasibleSetDescription x;
  std::optional<FeasibleSetDescription> relaxed;
  std::optional<std::vector<Vector>> oracle_solutions;
  std::optional<std::vector<Vector>> solutions;  // for Red-4
  std::string solutions_error;
};

FamilyContext prepare_family(const FamilySpec& f, const ReductionConfig& config) {
  FamilyContext ctx;
  ctx.spec = f;
  ctx.x = family_description(f);
  if (config.relaxation) ctx.relaxed = selection_lp_description(selection_relaxation_for(ctx.x, config.params));
  try {
    ctx.solutions = ctx.x.enumerate(config.enumeration_cap);
  } catch (const EnumerationCapExceeded& e) {
    ctx.solutions_error = e.what();
  }
  if (ctx.solutions && ctx.solutions->size() <= config.oracle_cap) ctx.oracle_solutions = ctx.solutions;
  return ctx;
}

bool contains_method(const std::vector<ReductionMethod>& ms, ReductionMethod m) {
  return std::find(ms.begin(), ms.end(), m) != ms.end();
}

std::vector<ReductionRecord> run_reduction_instance(const FamilyContext& ctx, std::size_t instance,
                                                    const ReductionConfig& config) {
  const std::size_t dim = ctx.x.dim();
  const ScenarioSet full = sample_scenarios(dim, config.scenarios, config.dist, instance_seed(config.seed, instance));
  const auto dd = dedupe_indices(full, 0.0);
  const ScenarioSet u = full.subset(dd.kept);

  std::vector<ReductionRecord> out;
  std::map<std::string, IndexSet> sets;  // "<method>/<variant>" -> selection
  auto run = [&](ReductionMethod m, const std::string& variant, const std::function<ReductionResult()>& fn) {
    ReductionRecord rec;
    rec.family = family_label(ctx.spec);
    rec.dim = dim;
    rec.instance = instance;
    rec.method = to_string(m);
    rec.variant = variant;
    rec.original = full.size();
    const auto start = Clock::now();
    try {
      const auto r = fn();
      rec.selected = r.selected.size();
      rec.fraction = 1.0 - static_cast<double>(rec.selected) / static_cast<double>(full.size());
      if (r.has_flag("time_limit")) rec.status = "time_limit";
      sets[rec.method + "/" + variant] = r.selected;
      if (ctx.oracle_solutions) {
        rec.oracle = sufficiency_oracle(u.subset(r.selected), full, *ctx.oracle_solutions) ? "pass" : "fail";
      }
    } catch (const std::exception& e) {
      rec.status = "error";
      rec.error = e.what();
    }
    rec.seconds = seconds_since(start);
    out.push_back(std::move(rec));
  };
  auto pick_smaller = [&](std::initializer_list<std::string> keys) -> std::optional<IndexSet> {
    std::optional<IndexSet> best;
    for (const auto& k : keys) {
      auto it = sets.find(k);
      if (it != sets.end() && (!best || it->second.size() < best->size())) best = it->second;
    }
    return best;
  };

  ReductionOptions base;
  base.params = config.params;
  base.enumeration_cap = config.enumeration_cap;
  const auto& ms = config.methods;
  if (contains_method(ms, ReductionMethod::Red1)) {
    run(ReductionMethod::Red1, "exact", [&] { return reduce_type1(u, false, base); });
  }
  if (contains_method(ms, ReductionMethod::Red2)) {
    run(ReductionMethod::Red2, "exact", [&] { return reduce_type2(u, false, base); });
  }
  if (contains_method(ms, ReductionMethod::Red3)) {
    run(ReductionMethod::Red3, "exact", [&] { return reduce_type3(u, ctx.x, base); });
  }
  if (contains_method(ms, ReductionMethod::Red4S)) {
    run(ReductionMethod::Red4S, "exact", [&] {
      auto o = base;
      o.warm_start = pick_smaller({"Red-2/exact", "Red-3/exact"});
      return reduce_type4_approx(u, ctx.x, o);
    });
  }
  if (contains_method(ms, ReductionMethod::Red4)) {
    run(ReductionMethod::Red4, "exact", [&] {
      if (!ctx.solutions) throw EnumerationCapExceeded(ctx.solutions_error);
      auto o = base;
      o.warm_start = pick_smaller({"Red-4S/exact"});
      return reduce_type4_exact(u, *ctx.solutions, o);
    });
  }
  if (ctx.relaxed) {
    if (contains_method(ms, ReductionMethod::Red3)) {
      run(ReductionMethod::Red3, "relaxation", [&] { return reduce_type3(u, *ctx.relaxed, base); });
    }
    if (contains_method(ms, ReductionMethod::Red4S)) {
      run(ReductionMethod::Red4S, "relaxation", [&] {
        auto o = base;
        o.warm_start = pick_smaller({"Red-2/exact", "Red-3/relaxation"});
        return reduce_type4_approx(u, *ctx.relaxed, o);
      });
    }
  }
  return out;
}

const std::vector<ReductionMethod> kReductionOrder{ReductionMethod::Red1, ReductionMethod::Red2, ReductionMethod::Red3,
                                                   ReductionMethod::Red4, ReductionMethod::Red4S};

}  // namespace

std::vector<ReductionSummaryRow> summarize_reduction(const std::vector<ReductionRecord>& records,
                                                     const std::vector<FamilySpec>& families) {
  std::vector<ReductionSummaryRow> rows;
  for (const auto& f : families) {
    const std::string label = family_label(f);
    for (const std::string variant : {"exact", "relaxation"}) {
      ReductionSummaryRow row;
      row.family = f;
      row.variant = variant;
      for (auto m : kReductionOrder) {
        double sum = 0.0;
        std::size_t count = 0;
        bool seen = false;
        for (const auto& r : records) {
          if (r.family != label || r.variant != variant || r.method != to_string(m)) continue;
          seen = true;
          if (r.status != "error") {
            sum += r.fraction;
            ++count;
          }
        }
        if (!seen) continue;
        row.methods.push_back(to_string(m));
        row.mean_fraction.push_back(count > 0 ? sum / static_cast<double>(count) : std::nan(""));
      }
      if (!row.methods.empty()) rows.push_back(std::move(row));
    }
  }
  return rows;
}

ReductionExperiment run_reduction_experiment(const ReductionConfig& config) {
  if (config.samples < 1) throw std::invalid_argument("sample count must be at least 1");
  if (config.scenarios < 1) throw std::invalid_argument("scenario count must be at least 1");
  ReductionExperiment e;
  e.config = config;
  std::vector<FamilyContext> contexts;
  for (const auto& f : config.families) contexts.push_back(prepare_family(f, config));

  const std::size_t tasks = contexts.size() * config.samples;
  std::vector<std::vector<ReductionRecord>> slots(tasks);
  parallel_for(tasks, config.jobs, [&](std::size_t i) {
    slots[i] = run_reduction_instance(contexts[i / config.samples], i % config.samples, config);
  });
  for (auto& s : slots) {
    for (auto& r : s) e.records.push_back(std::move(r));
  }
  for (const auto& r : e.records) {
    if (r.status == "error") ++e.failed_cells;
  }

  std::vector<FamilySpec> families;
  for (const auto& ctx : contexts) families.push_back(ctx.spec);
  e.summary = summarize_reduction(e.records, families);
  return e;
}

namespace {

struct MethodOutput {
  ScenarioSet reps;
  double beta = 0.0;
  double seconds = 0.0;
  bool beta_from_t4 = false;
};

void evaluate_on(const std::string& family, std::size_t dim, std::size_t instance, const std::string& pair,
                 const std::string& method, const MethodOutput& m, double aggregation, const ScenarioSet& u,
                 const FeasibleSetDescription& x, bool with_t3, const ApproximationConfig& config,
                 std::vector<ApproximationRecord>& out) {
  ApproximationRecord rec;
  rec.family = family;
  rec.dim = dim;
  rec.instance = instance;
  rec.method = method;
  rec.pair = pair;
  rec.aggregation_seconds = aggregation;
  rec.guarantee_t3 = std::nan("");
  try {
    const RobustOracle oracle(x, config.alternating.params, config.ccg.enumeration_limit);
    const auto t4 = evaluate_guarantee_t4(m.reps, u, oracle, config.ccg);
    rec.guarantee_t4 = t4.beta;
    if (t4.iteration_limit) rec.status = "iteration_limit";
    if (with_t3) rec.guarantee_t3 = evaluate_guarantee_t3(m.reps, u, x, config.alternating.params);
    rec.beta = m.beta_from_t4 ? t4.beta : m.beta;
    const auto start = Clock::now();
    const auto x_hat = oracle.robust(m.reps);
    rec.solution_seconds = seconds_since(start);
    const double num = worst_case_value(x_hat.x, u).first;
    const double opt = oracle.robust(u).value;
    rec.ub_ratio = opt <= 1e-12 ? (num <= 1e-12 ? 1.0 : kInfinity) : num / opt;
  } catch (const std::exception& e) {
    rec.status = "error";
    rec.error = e.what();
  }
  rec.process_seconds = rec.aggregation_seconds + rec.solution_seconds;
  out.push_back(std::move(rec));
}

std::vector<ApproximationRecord> run_approximation_instance(const FamilySpec& f, std::size_t instance,
                                                            const ApproximationConfig& config) {
  const FeasibleSetDescription x = family_description(f);
  const std::size_t dim = x.dim();
  const std::string label = family_label(f);
  const ScenarioSet u =
      sample_scenarios(dim, config.scenarios, config.dist, instance_seed(config.seed, instance));
  const std::size_t k = config.representatives;
  const bool layered = std::holds_alternative<LayeredGraphSpec>(f);

  std::vector<std::pair<std::string, FeasibleSetDescription>> targets;
  if (config.multi_pair && layered) {
    const auto problem = layered_graph(std::get<LayeredGraphSpec>(f));
    const auto subs = layered_pair_instances(problem);
    const std::size_t w = problem.graph.spec.width;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      targets.emplace_back(std::to_string(i / w) + "-" + std::to_string(i % w), subs[i]);
    }
  } else {
    targets.emplace_back("", x);
  }

  std::vector<ApproximationRecord> out;
  std::optional<Matrix> app12_weights;
  std::optional<Matrix> app3_weights;
  auto alt = config.alternating;
  alt.seed = instance_seed(config.alternating.seed, instance);
  for (auto method : config.methods) {
    MethodOutput m;
    const auto start = Clock::now();
    try {
      switch (method) {
        case ApproxMethod::App12: {
          const auto r = approx_type12(u, k, alt);
          app12_weights = r.hull_weights;
          m.reps = r.representatives;
          m.beta = r.beta;
          break;
        }
        case ApproxMethod::App3: {
          auto o = alt;
          if (app12_weights) o.initial_weights = {*app12_weights};
          const auto r = approx_type3(u, x, k, o);
          app3_weights = r.hull_weights;
          m.reps = r.representatives;
          m.beta = r.beta;
          break;
        }
        case ApproxMethod::App4: {
          auto o = config.ccg;
          o.alternating = alt;
          if (app3_weights) o.alternating.initial_weights.push_back(*app3_weights);
          if (app12_weights) o.alternating.initial_weights.push_back(*app12_weights);
          const auto r = approx_type4_ccg(u, x, k, o);
          m.reps = r.representatives;
          m.beta = r.beta;
          break;
        }
        case ApproxMethod::KMeans: {
          const auto r = kmeans_baseline(u, k, alt.seed, alt.params);
          m.reps = r.representatives;
          m.beta_from_t4 = true;
          break;
        }
        case ApproxMethod::ClusterRepresent: {
          const auto r = cluster_then_represent(u, k, ApproxMethod::App12, nullptr, alt);
          m.reps = r.representatives;
          m.beta = r.beta;
          break;
        }
      }
    } catch (const std::exception& e) {
      ApproximationRecord rec;
      rec.family = label;
      rec.dim = dim;
      rec.instance = instance;
      rec.method = to_string(method);
      rec.status = "error";
      rec.error = e.what();
      rec.guarantee_t3 = std::nan("");
      out.push_back(std::move(rec));
      continue;
    }
    m.seconds = seconds_since(start);
    // With several pairs the one aggregation serves all of them.
    const double aggregation = m.seconds / static_cast<double>(targets.size());
    for (const auto& [pair, tx] : targets) {
      evaluate_on(label, dim, instance, pair, to_string(method), m, aggregation, u, tx, layered, config, out);
    }
  }
  return out;
}

}  // namespace

ApproximationExperiment run_approximation_experiment(const ApproximationConfig& config) {
  if (config.samples < 1) throw std::invalid_argument("sample count must be at least 1");
  if (config.representatives < 1 || config.representatives > config.scenarios) {
    throw std::invalid_argument("K must lie in [1, N]");
  }
  ApproximationExperiment e;
  e.config = config;
  const std::size_t tasks = config.families.size() * config.samples;
  std::vector<std::vector<ApproximationRecord>> slots(tasks);
  parallel_for(tasks, config.jobs, [&](std::size_t i) {
    slots[i] = run_approximation_instance(config.families[i / config.samples], i % config.samples, config);
  });
  for (auto& s : slots) {
    for (auto& r : s) e.records.push_back(std::move(r));
  }
  for (const auto& r : e.records) {
    if (r.status == "error") ++e.failed_cells;
  }
  return e;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot open " + p.string() + " for writing");
  f << content;
  if (!f) throw IoError("failed writing " + p.string());
}

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Plot per-method means from an approximation or reduction records CSV.

Usage: python3 %STEM%_plot.py [records.csv]
"""
import re
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

path = sys.argv[1] if len(sys.argv) > 1 else "%STEM%_records.csv"
df = pd.read_csv(path)


def parameter(label):
    m = re.search(r"p=(\d+)", label) or re.search(r"L=(\d+)", label)
    return int(m.group(1)) if m else 0


df["x"] = df["family"].map(parameter)
df = df[df["status"] != "error"]
if "beta" in df.columns:
    panels = [("beta", "Guarantee"), ("ub_ratio", "UB ratio"), ("process_seconds", "Process time [s]")]
else:
    panels = [("fraction", "Reduction fraction"), ("seconds", "Time [s]")]
panels = [p for p in panels if p[0] in df.columns]
fig, axes = plt.subplots(1, len(panels), figsize=(5 * len(panels), 4), squeeze=False)
for ax, (col, title) in zip(axes[0], panels):
    for method, g in df.groupby("method"):
        means = g.groupby("x")[col].mean()
        ax.plot(means.index, means.values, marker="o", label=method)
    ax.set_title(title)
    ax.set_xlabel("p" if df["family"].str.startswith("selection").any() else "L")
    ax.grid(alpha=0.3)
axes[0][0].legend()
fig.tight_layout()
fig.savefig("%STEM%_plot.png", dpi=150)
)PY";

std::string plot_script(const std::string& stem) {
  std::string s = kPlotScript;
  for (std::size_t pos; (pos = s.find("%STEM%")) != std::string::npos;) s.replace(pos, 6, stem);
  return s;
}

}  // namespace

std::string records_csv(const std::vector<ReductionRecord>& records, bool timing) {
  std::ostringstream os;
  os << "family,dim,instance,method,variant,original,selected,fraction,status,oracle,error";
  if (timing) os << ",seconds";
  os << "\n";
  for (const auto& r : records) {
    os << quoted(r.family) << ',' << r.dim << ',' << r.instance << ',' << r.method << ',' << r.variant << ','
       << r.original << ',' << r.selected << ',' << num(r.fraction) << ',' << r.status << ',' << r.oracle << ','
       << quoted(r.error);
    if (timing) os << ',' << num(r.seconds);
    os << "\n";
  }
  return os.str();
}

std::string summary_csv(const std::vector<ReductionSummaryRow>& rows) {
  // Method columns: every method appearing in any row, in Red-1..Red-4S
  // order; a row leaves the cells of methods it did not run empty.
  std::vector<std::string> columns;
  for (auto m : kReductionOrder) {
    const auto name = to_string(m);
    for (const auto& row : rows) {
      if (std::find(row.methods.begin(), row.methods.end(), name) != row.methods.end()) {
        columns.push_back(name);
        break;
      }
    }
  }
  std::ostringstream os;
  std::string header;
  for (const auto& row : rows) {
    std::string h = std::holds_alternative<LayeredGraphSpec>(row.family) ? "L,W,dim" : "n,p,dim";
    for (const auto& m : columns) h += "," + m;
    h += ",variant";
    if (h != header) {
      os << h << "\n";
      header = h;
    }
    if (const auto* l = std::get_if<LayeredGraphSpec>(&row.family)) {
      os << l->layers << ',' << l->width;
    } else if (const auto* sel = std::get_if<SelectionSpec>(&row.family)) {
      os << sel->n << ',' << sel->p;
    } else {
      os << ',';
    }
    os << ',' << family_dim(row.family);
    for (const auto& m : columns) {
      os << ',';
      const auto it = std::find(row.methods.begin(), row.methods.end(), m);
      if (it != row.methods.end()) os << num(row.mean_fraction[static_cast<std::size_t>(it - row.methods.begin())]);
    }
    os << ',' << row.variant << "\n";
  }
  return os.str();
}

std::string records_csv(const std::vector<ApproximationRecord>& records, bool timing) {
  std::ostringstream os;
  os << "family,dim,instance,method,pair,beta,guarantee_t3,guarantee_t4,ub_ratio,status,error";
  if (timing) os << ",aggregation_seconds,solution_seconds,process_seconds";
  os << "\n";
  for (const auto& r : records) {
    os << quoted(r.family) << ',' << r.dim << ',' << r.instance << ',' << r.method << ',' << r.pair << ','
       << num(r.beta) << ',' << num(r.guarantee_t3) << ',' << num(r.guarantee_t4) << ',' << num(r.ub_ratio) << ','
       << r.status << ',' << quoted(r.error);
    if (timing) {
      os << ',' << num(r.aggregation_seconds) << ',' << num(r.solution_seconds) << ',' << num(r.process_seconds);
    }
    os << "\n";
  }
  return os.str();
}

std::vector<std::filesystem::path> emit_report(const ReductionExperiment& e, const ReportOptions& opts) {
  if (e.records.empty()) throw IoError("NoData: no reduction records to report");
  std::error_code ec;
  std::filesystem::create_directories(opts.directory, ec);
  std::vector<std::filesystem::path> paths{opts.directory / (opts.stem + "_records.csv"),
                                           opts.directory / (opts.stem + "_summary.csv")};
  write_file(paths[0], records_csv(e.records, opts.timing));
  write_file(paths[1], summary_csv(e.summary));
  if (opts.plot_script) {
    paths.push_back(opts.directory / (opts.stem + "_plot.py"));
    write_file(paths.back(), plot_script(opts.stem));
  }
  return paths;
}

std::vector<std::filesystem::path> emit_report(const ApproximationExperiment& e, const ReportOptions& opts) {
  if (e.records.empty()) throw IoError("NoData: no approximation records to report");
  std::error_code ec;
  std::filesystem::create_directories(opts.directory, ec);
  std::vector<std::filesystem::path> paths{opts.directory / (opts.stem + "_records.csv")};
  write_file(paths[0], records_csv(e.records, opts.timing));
  if (opts.plot_script) {
    paths.push_back(opts.directory / (opts.stem + "_plot.py"));
    write_file(paths.back(), plot_script(opts.stem));
  }
  return paths;
}

}  // namespace scenred
