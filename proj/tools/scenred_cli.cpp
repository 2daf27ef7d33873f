// scenred: sample instances, reduce or approximate scenario sets, and run
// the experiment campaigns. Exit status: 0 success, 2 some cells failed,
// 1 bad configuration or input.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scenred/approximation.hpp"
#include "scenred/experiments.hpp"
#include "scenred/json_io.hpp"
#include "scenred/problems.hpp"
#include "scenred/reduction.hpp"

namespace fs = std::filesystem;
using namespace scenred;

namespace {

struct FamilyFlags {
  std::string family = "selection";
  std::vector<std::size_t> n, p, layers, width;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& f, bool lists) {
  cmd->add_option("--family", f.family, "selection or layered (layered_sp)")
      ->check(CLI::IsMember({"selection", "layered", "layered_sp"}));
  const std::string suffix = lists ? " (comma list)" : "";
  auto* n = cmd->add_option("--n", f.n, "selection: item count" + suffix);
  auto* p = cmd->add_option("--p", f.p, "selection: items to pick" + suffix);
  auto* l = cmd->add_option("--L", f.layers, "layered: layer count" + suffix);
  auto* w = cmd->add_option("--W", f.width, "layered: layer width" + suffix);
  for (auto* o : {n, p, l, w}) {
    if (lists) {
      o->delimiter(',');
    } else {
      o->expected(1);
    }
  }
}

// Cross product of the listed parameters. Selection without --p runs every
// p in 1..n-1.
std::vector<FamilySpec> families_from(const FamilyFlags& f) {
  std::vector<FamilySpec> out;
  if (f.family == "selection") {
    if (f.n.empty()) throw std::invalid_argument("selection family needs --n");
    for (auto n : f.n) {
      std::vector<std::size_t> ps = f.p;
      if (ps.empty()) {
        for (std::size_t p = 1; p + 1 <= n; ++p) ps.push_back(p);
      }
      for (auto p : ps) {
        if (p < 1 || p > n) throw std::invalid_argument("need 1 <= p <= n");
        out.push_back(SelectionSpec{n, p});
      }
    }
  } else {
    if (f.layers.empty() || f.width.empty()) throw std::invalid_argument("layered family needs --L and --W");
    for (auto l : f.layers) {
      for (auto w : f.width) {
        if (l < 1 || w < 1) throw std::invalid_argument("need L, W >= 1");
        out.push_back(LayeredGraphSpec{l, w});
      }
    }
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit_json(const Json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json_file(out, j);
  }
}

struct Instance {
  FeasibleSetDescription x;
  ScenarioSet u;
};

Instance load_instance(const std::string& path) {
  const Json j = read_json_file(path);
  if (!j.contains("family")) throw IoError(path + ": missing \"family\"");
  return {description_from_json(j), scenario_set_from_json(j)};
}

SolverParams params_with(std::optional<double> time_limit) {
  auto p = SolverParams::from_environment();
  if (time_limit) p.time_limit = *time_limit;
  return p;
}

int cmd_generate(const FamilyFlags& ff, std::size_t count, const std::string& dist, std::uint64_t seed,
                 const std::string& out) {
  const auto families = families_from(ff);
  if (families.size() != 1) throw std::invalid_argument("generate takes exactly one family");
  const auto& f = families.front();
  const auto u = sample_scenarios(family_dim(f), count, parse_distribution(dist), seed);
  Json j = to_json(u);
  j.update(to_json(f));
  j["seed"] = seed;
  j["distribution"] = to_string(parse_distribution(dist));
  emit_json(j, out);
  return 0;
}

int cmd_reduce(const std::string& in, const std::string& methods, bool milp, std::optional<double> time_limit,
               const std::string& out) {
  const auto inst = load_instance(in);
  ReductionOptions opts;
  opts.params = params_with(time_limit);
  Json results = Json::array();
  int status = 0;
  for (const auto& name : split_list(methods)) {
    const auto m = parse_reduction_method(name);
    try {
      ReductionResult r;
      if (m == ReductionMethod::Red1) {
        r = reduce_type1(inst.u, milp, opts);
      } else if (m == ReductionMethod::Red2) {
        r = reduce_type2(inst.u, milp, opts);
      } else {
        r = reduce(m, inst.u, inst.x, opts);
      }
      results.push_back(to_json(r));
    } catch (const Error& e) {
      results.push_back({{"method", to_string(m)}, {"status", "error"}, {"error", e.what()}});
      status = 2;
    }
  }
  emit_json({{"input", in}, {"results", results}}, out);
  return status;
}

int cmd_approximate(const std::string& in, std::size_t k, const std::string& methods, const std::string& inner,
                    std::uint64_t seed, std::size_t starts, std::optional<double> time_limit,
                    const std::string& out) {
  const auto inst = load_instance(in);
  if (k < 1 || k > inst.u.size()) throw std::invalid_argument("need 1 <= K <= N");
  AlternatingOpts alt;
  alt.seed = seed;
  alt.starts = starts;
  alt.params = params_with(time_limit);
  CcgOpts ccg;
  ccg.alternating = alt;
  const auto inner_method = parse_approx_method(inner);
  Json results = Json::array();
  int status = 0;
  for (const auto& name : split_list(methods)) {
    const auto m = parse_approx_method(name);
    try {
      ApproximationResult r;
      switch (m) {
        case ApproxMethod::App12: r = approx_type12(inst.u, k, alt); break;
        case ApproxMethod::App3: r = approx_type3(inst.u, inst.x, k, alt); break;
        case ApproxMethod::App4: r = approx_type4_ccg(inst.u, inst.x, k, ccg); break;
        case ApproxMethod::KMeans: r = kmeans_baseline(inst.u, k, seed, alt.params); break;
        case ApproxMethod::ClusterRepresent:
          r = cluster_then_represent(inst.u, k, inner_method, &inst.x, alt);
          break;
      }
      Json j = to_json(r);
      j["ub_ratio"] = ub_ratio(r.representatives, inst.u, inst.x, alt.params);
      results.push_back(std::move(j));
    } catch (const Error& e) {
      results.push_back({{"method", to_string(m)}, {"status", "error"}, {"error", e.what()}});
      status = 2;
    }
  }
  emit_json({{"input", in}, {"K", k}, {"results", results}}, out);
  return status;
}

int cmd_evaluate(const std::string& in, const std::string& reps_path, std::optional<double> time_limit,
                 const std::string& out) {
  const auto inst = load_instance(in);
  const Json rj = read_json_file(reps_path);
  ScenarioSet reps;
  if (rj.contains("representatives")) {
    reps = ScenarioSet(rj.at("representatives").get<std::vector<Vector>>());
  } else {
    reps = scenario_set_from_json(rj);
  }
  const auto params = params_with(time_limit);
  CcgOpts ccg;
  ccg.alternating.params = params;
  const auto t4 = evaluate_guarantee_t4(reps, inst.u, inst.x, ccg);
  Json j;
  j["guarantee_t12"] = evaluate_guarantee_t12(reps, inst.u, params);
  j["guarantee_t3"] = evaluate_guarantee_t3(reps, inst.u, inst.x, params);
  j["guarantee_t4"] = t4.beta;
  j["t4_iterations"] = t4.iterations;
  j["t4_iteration_limit"] = t4.iteration_limit;
  j["ub_ratio"] = ub_ratio(reps, inst.u, inst.x, params);
  emit_json(j, out);
  return 0;
}

struct ExperimentFlags {
  std::string kind;
  std::size_t scenarios = 0;
  std::size_t k = 5;
  std::size_t samples = 10;
  std::uint64_t seed = 1;
  std::string methods;
  std::string dist;
  std::optional<double> time_limit;
  std::string out = ".";
  std::string stem;
  std::size_t jobs = 1;
  bool relaxation = false;
  bool multi_pair = false;
  bool plot = false;
  std::size_t starts = 10;
};

Json experiment_header(const std::string& kind, const std::vector<FamilySpec>& families) {
  Json fam = Json::array();
  for (const auto& f : families) fam.push_back(to_json(f));
  return {{"kind", kind}, {"families", fam}};
}

void print_paths(const std::vector<fs::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << "\n";
}

int cmd_experiment(const FamilyFlags& ff, const ExperimentFlags& ef) {
  const auto families = families_from(ff);
  if (ef.samples < 1) throw std::invalid_argument("--seeds must be at least 1");
  fs::create_directories(ef.out);
  ReportOptions ro;
  ro.directory = ef.out;
  ro.plot_script = ef.plot;
  ro.stem = ef.stem.empty() ? ef.kind : ef.stem;

  if (ef.kind == "reduction") {
    ReductionConfig c;
    c.families = families;
    if (ef.scenarios > 0) c.scenarios = ef.scenarios;
    c.samples = ef.samples;
    c.seed = ef.seed;
    if (!ef.dist.empty()) c.dist = parse_distribution(ef.dist);
    if (!ef.methods.empty()) {
      c.methods.clear();
      for (const auto& m : split_list(ef.methods)) c.methods.push_back(parse_reduction_method(m));
    }
    c.relaxation = ef.relaxation;
    c.jobs = ef.jobs;
    c.params = params_with(ef.time_limit);
    const auto e = run_reduction_experiment(c);
    Json j = experiment_header("reduction", families);
    Json recs = Json::array();
    for (const auto& r : e.records) recs.push_back(to_json(r));
    j["records"] = std::move(recs);
    write_json_file(fs::path(ef.out) / (ro.stem + ".json"), j);
    print_paths(emit_report(e, ro));
    std::cout << summary_csv(e.summary);
    return e.failed_cells > 0 ? 2 : 0;
  }

  ApproximationConfig c;
  c.families = families;
  if (ef.scenarios > 0) c.scenarios = ef.scenarios;
  c.representatives = ef.k;
  if (c.representatives < 1 || c.representatives > c.scenarios) throw std::invalid_argument("need 1 <= K <= N");
  c.samples = ef.samples;
  c.seed = ef.seed;
  if (!ef.dist.empty()) c.dist = parse_distribution(ef.dist);
  if (!ef.methods.empty()) {
    c.methods.clear();
    for (const auto& m : split_list(ef.methods)) c.methods.push_back(parse_approx_method(m));
  }
  c.multi_pair = ef.multi_pair;
  c.jobs = ef.jobs;
  c.alternating.params = params_with(ef.time_limit);
  c.alternating.seed = ef.seed;
  c.alternating.starts = ef.starts;
  c.ccg.alternating = c.alternating;
  const auto e = run_approximation_experiment(c);
  Json j = experiment_header("approximation", families);
  Json recs = Json::array();
  for (const auto& r : e.records) recs.push_back(to_json(r));
  j["records"] = std::move(recs);
  write_json_file(fs::path(ef.out) / (ro.stem + ".json"), j);
  print_paths(emit_report(e, ro));
  return e.failed_cells > 0 ? 2 : 0;
}

int cmd_report(const std::string& in, const std::string& out, const std::string& stem, bool plot,
               bool no_timing) {
  const Json j = read_json_file(in);
  ReportOptions ro;
  ro.directory = out;
  ro.plot_script = plot;
  ro.timing = !no_timing;
  const std::string kind = j.value("kind", std::string());
  ro.stem = stem.empty() ? kind : stem;
  fs::create_directories(out);
  std::vector<FamilySpec> families;
  for (const auto& f : j.at("families")) families.push_back(family_from_json(f));
  if (kind == "reduction") {
    ReductionExperiment e;
    e.config.families = families;
    for (const auto& r : j.at("records")) e.records.push_back(reduction_record_from_json(r));
    e.summary = summarize_reduction(e.records, families);
    print_paths(emit_report(e, ro));
  } else if (kind == "approximation") {
    ApproximationExperiment e;
    e.config.families = families;
    for (const auto& r : j.at("records")) e.records.push_back(approximation_record_from_json(r));
    print_paths(emit_report(e, ro));
  } else {
    throw IoError(in + ": unknown experiment kind '" + kind + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario reduction and approximation for min-max robust problems"};
  app.require_subcommand(1);

  FamilyFlags ff;
  std::size_t count = 100;
  std::string dist = "real";
  std::uint64_t seed = 1;
  std::string out;
  std::string in;
  std::optional<double> time_limit;

  auto* gen = app.add_subcommand("generate", "Sample a scenario set for a family");
  add_family_flags(gen, ff, false);
  gen->add_option("--N", count, "number of scenarios");
  gen->add_option("--dist", dist, "real (U[0,1]) or int (1..100)");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--out", out, "output file (default stdout)");

  std::string red_methods = "Red-1,Red-2,Red-3,Red-4,Red-4S";
  bool milp = false;
  auto* red = app.add_subcommand("reduce", "Reduce the scenario set of an instance file");
  red->add_option("--in", in, "instance JSON")->required();
  red->add_option("--methods", red_methods, "comma list of Red-1..Red-4S");
  red->add_flag("--milp", milp, "solve Red-1/Red-2 as MILPs instead of filters");
  red->add_option("--time-limit", time_limit, "seconds per solver call");
  red->add_option("--out", out, "output file (default stdout)");

  std::size_t k = 1;
  std::string app_methods = "App-1/2";
  std::string inner = "App-1/2";
  std::size_t starts = 10;
  auto* apx = app.add_subcommand("approximate", "Compute K representative scenarios");
  apx->add_option("--in", in, "instance JSON")->required();
  apx->add_option("--K", k, "number of representatives")->required();
  apx->add_option("--methods", app_methods, "comma list of App-1/2, App-3, App-4, KMeans, ClusterRepresent");
  apx->add_option("--inner", inner, "per-cluster method for ClusterRepresent");
  apx->add_option("--seed", seed, "RNG seed");
  apx->add_option("--starts", starts, "multi-start budget");
  apx->add_option("--time-limit", time_limit, "seconds per solver call");
  apx->add_option("--out", out, "output file (default stdout)");

  std::string reps_path;
  auto* ev = app.add_subcommand("evaluate", "Guarantees and UB ratio of a representative set");
  ev->add_option("--in", in, "instance JSON")->required();
  ev->add_option("--reps", reps_path, "JSON with \"representatives\" or \"scenarios\"")->required();
  ev->add_option("--time-limit", time_limit, "seconds per solver call");
  ev->add_option("--out", out, "output file (default stdout)");

  ExperimentFlags ef;
  FamilyFlags eff;
  auto* ex = app.add_subcommand("experiment", "Run a reduction or approximation campaign");
  ex->add_option("kind", ef.kind, "reduction or approximation")
      ->required()
      ->check(CLI::IsMember({"reduction", "approximation"}));
  add_family_flags(ex, eff, true);
  ex->add_option("--N", ef.scenarios, "scenarios per instance (default 100 / 50)");
  ex->add_option("--K", ef.k, "representatives (approximation)");
  ex->add_option("--seeds", ef.samples, "instances per family");
  ex->add_option("--seed", ef.seed, "base RNG seed");
  ex->add_option("--methods", ef.methods, "comma list of methods");
  ex->add_option("--dist", ef.dist, "real or int");
  ex->add_option("--time-limit", ef.time_limit, "seconds per solver call");
  ex->add_option("--out", ef.out, "output directory");
  ex->add_option("--stem", ef.stem, "file name stem (default: kind)");
  ex->add_option("--jobs", ef.jobs, "worker threads");
  ex->add_option("--starts", ef.starts, "multi-start budget (approximation)");
  ex->add_flag("--relaxation", ef.relaxation, "also reduce over the selection relaxation");
  ex->add_flag("--multi-pair", ef.multi_pair, "layered: evaluate on every first/last-layer pair");
  ex->add_flag("--plot", ef.plot, "write a plotting script next to the CSV files");

  std::string report_dir = ".";
  std::string report_stem;
  bool plot = false;
  bool no_timing = false;
  auto* rep = app.add_subcommand("report", "Write CSV tables from an experiment JSON file");
  rep->add_option("--in", in, "experiment JSON written by `experiment`")->required();
  rep->add_option("--out", report_dir, "output directory");
  rep->add_option("--stem", report_stem, "file name stem");
  rep->add_flag("--plot", plot, "write a plotting script");
  rep->add_flag("--no-timing", no_timing, "drop timing columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gen) return cmd_generate(ff, count, dist, seed, out);
    if (*red) return cmd_reduce(in, red_methods, milp, time_limit, out);
    if (*apx) return cmd_approximate(in, k, app_methods, inner, seed, starts, time_limit, out);
    if (*ev) return cmd_evaluate(in, reps_path, time_limit, out);
    if (*ex) return cmd_experiment(eff, ef);
    if (*rep) return cmd_report(in, report_dir, report_stem, plot, no_timing);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
