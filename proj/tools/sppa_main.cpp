// Experiment harness: `run` and `compare` execute a config over its seed
// batch and write CSV traces; `check` runs the invariant/property suite.
// Exit codes: 0 success, 1 usage/config/I-O error, 2 property-suite failure.

#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sppa/check.hpp"
#include "sppa/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string seed_override;
  long iterations_override = 0;
  std::string out_override;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("config", flags.config_path, "experiment config file (INI)")
      ->required();
  cmd->add_option("--seed-override", flags.seed_override,
                  "comma- or space-separated seeds replacing [run] seeds");
  cmd->add_option("--iterations-override", flags.iterations_override,
                  "iteration budget replacing [run] iterations");
  cmd->add_option("--out", flags.out_override, "output directory override");
}

sppa::ExperimentConfig load(const CommonFlags& flags) {
  auto config = sppa::parse_config_file(flags.config_path);
  sppa::apply_overrides(config, flags.seed_override, flags.iterations_override,
                        flags.out_override);
  return config;
}

int run_command(const CommonFlags& flags) {
  const auto config = load(flags);
  const auto result = sppa::run_experiment(config);
  for (const auto& row : result.rows) {
    std::printf("seed %llu: final_dist=%s final_gap=%.6g wall=%.3fs\n",
                static_cast<unsigned long long>(row.seed),
                std::isnan(row.final_dist) ? "NA" : std::to_string(row.final_dist).c_str(),
                row.final_gap, row.wall_seconds);
  }
  std::printf("wrote %zu trace files and %s\n", result.trace_files.size(),
              result.summary_file.c_str());
  return 0;
}

int compare_command(const CommonFlags& flags) {
  const auto config = load(flags);
  const auto result = sppa::compare_methods(config);
  for (const auto& row : result.rows) {
    std::printf("seed %llu: sppa_dist=%.6g%s subgrad_dist=%.6g%s\n",
                static_cast<unsigned long long>(row.seed), row.sppa_final_dist,
                row.sppa_diverged ? " (diverged)" : "", row.subgrad_final_dist,
                row.subgrad_diverged ? " (diverged)" : "");
  }
  std::printf("wrote %zu compare files and %s\n", result.compare_files.size(),
              result.summary_file.c_str());
  return 0;
}

int check_command() {
  const auto results = sppa::check::run_all();
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%zu properties, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic proximal point optimization on geodesic spaces"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment config over its seeds");
  add_common(run_cmd, run_flags);

  CommonFlags compare_flags;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run SPPA against the subgradient baseline");
  add_common(compare_cmd, compare_flags);

  CLI::App* check_cmd =
      app.add_subcommand("check", "run the invariant/property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run_cmd->parsed()) return run_command(run_flags);
    if (compare_cmd->parsed()) return compare_command(compare_flags);
    if (check_cmd->parsed()) return check_command();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
