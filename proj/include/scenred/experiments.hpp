#ifndef SCENRED_EXPERIMENTS_HPP
#define SCENRED_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scenred/approximation.hpp"
#include "scenred/core.hpp"
#include "scenred/reduction.hpp"

namespace scenred {

enum class CostDistribution { UniformReal01, UniformInt1to100 };

std::string to_string(CostDistribution d);
/// "real", "uniform01", "int", "int1to100" and the enum names.
CostDistribution parse_distribution(const std::string& name);

/// N vectors of dimension n from the seeded stream of Rng.
ScenarioSet sample_scenarios(std::size_t n, std::size_t count, CostDistribution dist, std::uint64_t seed);

/// Short text for a family: "selection(n=8,p=3)", "layered(L=2,W=2)".
std::string family_label(const FamilySpec& f);
std::size_t family_dim(const FamilySpec& f);

/// Instance index -> scenario seed used by both experiment drivers.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t instance);

struct ReductionConfig {
  std::vector<FamilySpec> families;
  std::size_t scenarios = 100;  // N
  std::size_t samples = 10;
  CostDistribution dist = CostDistribution::UniformReal01;
  std::uint64_t seed = 1;
  std::vector<ReductionMethod> methods{ReductionMethod::Red1, ReductionMethod::Red2, ReductionMethod::Red3,
                                       ReductionMethod::Red4, ReductionMethod::Red4S};
  /// Also run Red-3 and Red-4S over the selection relaxation of X.
  bool relaxation = false;
  /// Check every reduced set by enumeration when |X| is at most this.
  std::size_t oracle_cap = 10000;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t jobs = 1;
  SolverParams params = SolverParams::from_environment();
};

struct ReductionRecord {
  std::string family;
  std::size_t dim = 0;
  std::size_t instance = 0;
  std::string method;
  std::string variant = "exact";  // or "relaxation"
  std::size_t original = 0;
  std::size_t selected = 0;
  double fraction = 0.0;
  std::string status = "ok";  // ok | time_limit | error
  std::string oracle = "skipped";  // pass | fail | skipped
  std::string error;
  double seconds = 0.0;
};

struct ReductionSummaryRow {
  FamilySpec family;
  std::string variant;
  std::vector<std::string> methods;
  std::vector<double> mean_fraction;  // NaN where no instance succeeded
};

struct ReductionExperiment {
  ReductionConfig config;
  std::vector<ReductionRecord> records;
  std::vector<ReductionSummaryRow> summary;
  std::size_t failed_cells = 0;
};

/// Samples `samples` scenario sets per family and runs every method on each.
/// Cell failures are recorded, not thrown.
ReductionExperiment run_reduction_experiment(const ReductionConfig& config);

/// Mean fraction per (family, variant) and method, methods in Red-1..Red-4S
/// order; errors are left out of the means.
std::vector<ReductionSummaryRow> summarize_reduction(const std::vector<ReductionRecord>& records,
                                                     const std::vector<FamilySpec>& families);

struct ApproximationConfig {
  std::vector<FamilySpec> families;
  std::size_t scenarios = 50;  // N
  std::size_t representatives = 5;  // K
  std::size_t samples = 10;
  CostDistribution dist = CostDistribution::UniformInt1to100;
  std::uint64_t seed = 1;
  std::vector<ApproxMethod> methods{ApproxMethod::App12, ApproxMethod::App3, ApproxMethod::App4,
                                    ApproxMethod::KMeans};
  /// Layered families: approximate once on the full graph, then evaluate on
  /// every first-layer / last-layer pair sub-instance.
  bool multi_pair = false;
  std::size_t jobs = 1;
  AlternatingOpts alternating;
  CcgOpts ccg;
};

struct ApproximationRecord {
  std::string family;
  std::size_t dim = 0;
  std::size_t instance = 0;
  std::string method;
  std::string pair;  // "u-v" in multi-pair mode
  double beta = 0.0;
  double guarantee_t3 = 0.0;  // NaN when not computed
  double guarantee_t4 = 0.0;
  double ub_ratio = 0.0;
  std::string status = "ok";
  std::string error;
  double aggregation_seconds = 0.0;
  double solution_seconds = 0.0;
  double process_seconds = 0.0;
};

struct ApproximationExperiment {
  ApproximationConfig config;
  std::vector<ApproximationRecord> records;
  std::size_t failed_cells = 0;
};

ApproximationExperiment run_approximation_experiment(const ApproximationConfig& config);

struct ReportOptions {
  std::filesystem::path directory = ".";
  std::string stem = "report";
  bool plot_script = false;
  bool timing = true;  // include timing columns
};

std::string records_csv(const std::vector<ReductionRecord>& records, bool timing = true);
/// Layered rows: L,W,dim,<methods>,variant; selection rows: n,p,dim,<methods>,variant.
std::string summary_csv(const std::vector<ReductionSummaryRow>& rows);
std::string records_csv(const std::vector<ApproximationRecord>& records, bool timing = true);

/// Writes <stem>_records.csv and <stem>_summary.csv (or <stem>_records.csv
/// for approximation), plus <stem>_plot.py when requested. Returns the paths.
/// Throws IoError on empty input or write failure.
std::vector<std::filesystem::path> emit_report(const ReductionExperiment& e, const ReportOptions& opts);
std::vector<std::filesystem::path> emit_report(const ApproximationExperiment& e, const ReportOptions& opts);

}  // namespace scenred

#endif  // SCENRED_EXPERIMENTS_HPP
