#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sppa/engine.hpp"

namespace sppa {

enum class ProblemKind {
  Median,          // f(x) = |x - b|, 1-D data
  AbsRegression,   // f(x) = |<a,x> - b|
  LeastSquares,    // f(x) = (<a,x> - b)^2 / 2
  RegLeastSquares, // least squares + mu |x|^2
  SpiderMean,      // f(x) = d(x,t)^2 on the spider
  SpiderMedian,    // f(x) = d(x,t) on the spider
};

const char* problem_name(ProblemKind kind);
ProblemKind problem_from_name(const std::string& name);

struct ScheduleSpec {
  double c = 1.0;
  double p = 1.0;
  long i0 = 1;
};

// Either inline data or a generator spec; see README for the per-problem
// fields.
struct DataSpec {
  long count = 0;  // generator row/value count; 0 means inline data
  std::uint64_t seed = 0;
  double range = 1.0;
  std::vector<std::vector<double>> rows;  // regression: a_1..a_d b
  std::vector<double> values;             // median: 1-D sample
  std::vector<SpiderPoint> points;        // spider problems
  std::vector<double> weights;            // spider problems; empty = uniform
};

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::LeastSquares;
  int dimension = 1;  // Euclidean problems
  int legs = 3;       // spider problems
  double mu = 0.0;    // reg-least-squares only
  DataSpec data;
  ScheduleSpec schedule;
  long iterations = 1000;
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "sppa_out";
};

// Flat INI-style config; see README for the format. Throws
// std::invalid_argument with line context on malformed input.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// CLI override hooks. seeds_csv is a comma- or space-separated list; empty
// strings / zero values leave the config untouched.
void apply_overrides(ExperimentConfig& config, const std::string& seeds_csv,
                     long iterations, const std::string& out_dir);

struct ProblemInstance {
  SpaceDesc space{EuclideanSpace(1)};
  std::vector<Marginal> support;
  std::vector<double> weights;
  SpacePoint start;                      // origin of the space
  std::optional<SpacePoint> reference;   // oracle minimizer, when one exists
  std::optional<double> inf_objective;   // objective at the reference
};

// Builds marginals and the matching oracle reference: least squares via the
// normal equations, 1-D median via the middle order statistic (odd count),
// spider problems via the Frechet oracles. abs-regression has no reference.
// Degenerate instances (singular normal equations, ambiguous median) raise
// std::domain_error.
ProblemInstance build_instance(const ExperimentConfig& config);

// Canonical key=value echo of a config (excluding the output directory) and
// its FNV-1a 64 hash; every output file embeds both.
std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

struct SummaryRow {
  std::uint64_t seed = 0;
  double final_dist = 0.0;  // NaN when the problem has no reference
  // Objective gap F(x_N) - inf F; for abs-regression (no oracle) the best
  // objective value reached instead.
  double final_gap = 0.0;
  long iterations = 0;
  double wall_seconds = 0.0;  // reported on stdout, never written to files
};

struct ExperimentResult {
  std::vector<std::string> trace_files;  // one per seed, config order
  std::string summary_file;
  std::vector<SummaryRow> rows;
};

// Runs SPPA once per seed; writes trace_seed<seed>.csv per seed plus
// summary.csv. Outputs are byte-identical across re-runs of the same
// config.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct CompareRow {
  std::uint64_t seed = 0;
  double sppa_final_dist = 0.0;
  double subgrad_final_dist = 0.0;
  bool sppa_diverged = false;     // some iterate left the 1e6 ball (or NaN)
  bool subgrad_diverged = false;
};

struct CompareResult {
  std::vector<std::string> compare_files;
  std::string summary_file;
  std::vector<CompareRow> rows;
};

// Runs SPPA and the subgradient baseline on identical draw streams and
// writes per-iteration distance-to-reference for both. Requires a Euclidean
// problem with a reference minimizer.
CompareResult compare_methods(const ExperimentConfig& config);

}  // namespace sppa
