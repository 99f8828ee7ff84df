#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sppa/experiment.hpp"

#include <algorithm>
#include <cmath>

using namespace sppa;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

const std::string kSpiderMeanConfig = R"(
[problem]
kind = spider-mean
legs = 3
[data]
point = 1:3
point = 2:1
weights = 0.5 0.5
[run]
iterations = 500
seeds = 1 2 3
)";

}  // namespace

TEST_CASE("parse_config_text: full round trip") {
  const auto config = parse_config_text(R"(
# comment
[problem]
kind = least-squares
dimension = 5
[data]
count = 20
seed = 42
range = 2.0
[schedule]
c = 1
p = 1
i0 = 1
[run]
iterations = 1000
seeds = 1, 2, 3
out = somewhere
)");
  CHECK(config.problem == ProblemKind::LeastSquares);
  CHECK(config.dimension == 5);
  CHECK(config.data.count == 20);
  CHECK(config.data.seed == 42);
  CHECK(config.data.range == doctest::Approx(2.0));
  CHECK(config.iterations == 1000);
  CHECK(config.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(config.out_dir == "somewhere");
}

TEST_CASE("parse_config_text: malformed inputs") {
  CHECK_THROWS_AS(parse_config_text("[run]\niterations = 10\nseeds = 1\n"),
                  std::invalid_argument);  // missing problem kind
  CHECK_THROWS_AS(parse_config_text("[problem]\nkind = nonsense\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config_text("[problem]\nkind = median\ntypo = 1\n"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config_text("[problem]\nkind = median\n[data]\nvalues = 0 1\nbroken line\n"),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text(R"(
[problem]
kind = median
[data]
values = 0 1 10
[run]
iterations = 0
seeds = 1
)"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text(R"(
[problem]
kind = median
[data]
values = 0 1 10
[run]
iterations = 5
seeds = 1 1
)"),
                  std::invalid_argument);  // duplicate seeds
  // reg-least-squares without mu
  CHECK_THROWS_AS(parse_config_text(R"(
[problem]
kind = reg-least-squares
dimension = 2
[data]
count = 4
[run]
iterations = 5
seeds = 1
)"),
                  std::invalid_argument);
}

TEST_CASE("apply_overrides") {
  auto config = parse_config_text(kSpiderMeanConfig);
  apply_overrides(config, "7, 8", 42, "elsewhere");
  CHECK(config.seeds == std::vector<std::uint64_t>{7, 8});
  CHECK(config.iterations == 42);
  CHECK(config.out_dir == "elsewhere");
  apply_overrides(config, "", 0, "");
  CHECK(config.seeds == std::vector<std::uint64_t>{7, 8});
  CHECK(config.iterations == 42);
}

TEST_CASE("build_instance: identity least squares has an exact reference") {
  auto config = parse_config_text(R"(
[problem]
kind = least-squares
dimension = 2
[data]
row = 1 0 1
row = 0 1 2
[run]
iterations = 10
seeds = 1
)");
  const auto instance = build_instance(config);
  REQUIRE(instance.reference.has_value());
  const auto& ref = std::get<EuclideanPoint>(*instance.reference);
  CHECK(ref.coords[0] == doctest::Approx(1.0));
  CHECK(ref.coords[1] == doctest::Approx(2.0));
  CHECK(*instance.inf_objective == doctest::Approx(0.0));
  CHECK(instance.support.size() == 2);
}

TEST_CASE("build_instance: 1-D median instance") {
  auto config = parse_config_text(R"(
[problem]
kind = median
[data]
values = 0 1 10
[run]
iterations = 10
seeds = 1
)");
  const auto instance = build_instance(config);
  REQUIRE(instance.reference.has_value());
  CHECK(std::get<EuclideanPoint>(*instance.reference).coords[0] ==
        doctest::Approx(1.0));
  // F(1) = (1 + 0 + 9) / 3.
  CHECK(*instance.inf_objective == doctest::Approx(10.0 / 3.0));
}

TEST_CASE("build_instance: spider mean uses the Frechet oracle") {
  auto config = parse_config_text(kSpiderMeanConfig);
  const auto instance = build_instance(config);
  REQUIRE(instance.reference.has_value());
  CHECK(*instance.reference == spider(1, 1.0));
  CHECK(instance.start == spider(0, 0.0));
}

TEST_CASE("build_instance: ridge reference is a stationary point") {
  auto config = parse_config_text(R"(
[problem]
kind = reg-least-squares
dimension = 3
mu = 0.2
[data]
count = 10
seed = 3
range = 1.5
[run]
iterations = 10
seeds = 1
)");
  const auto instance = build_instance(config);
  REQUIRE(instance.reference.has_value());
  // The averaged subgradient field vanishes at the solve's output: one unit
  // explicit step per marginal, weight-averaged, should land back on x*.
  const auto& ref = std::get<EuclideanPoint>(*instance.reference).coords;
  std::vector<double> mean_step(ref.size(), 0.0);
  for (std::size_t j = 0; j < instance.support.size(); ++j) {
    const SpacePoint stepped =
        subgradient_step(*instance.reference, instance.support[j], 1.0);
    const auto& coords = std::get<EuclideanPoint>(stepped).coords;
    for (std::size_t i = 0; i < ref.size(); ++i)
      mean_step[i] += instance.weights[j] * (coords[i] - ref[i]);
  }
  for (const double g : mean_step) CHECK(std::abs(g) <= 1e-12);
  CHECK(*instance.inf_objective ==
        doctest::Approx(estimate_objective(
            *instance.reference,
            Sampler(instance.support, instance.weights, 1))));
}

TEST_CASE("build_instance: degenerate instances raise build errors") {
  // Rank-deficient rows: both constraints probe the same direction.
  CHECK_THROWS_AS(build_instance(parse_config_text(R"(
[problem]
kind = least-squares
dimension = 2
[data]
row = 1 1 1
row = 2 2 2
[run]
iterations = 5
seeds = 1
)")),
                  std::domain_error);
  // Even sample count has no unique median.
  CHECK_THROWS_AS(build_instance(parse_config_text(R"(
[problem]
kind = median
[data]
values = 0 1
[run]
iterations = 5
seeds = 1
)")),
                  std::domain_error);
  // Spider median with leg weight exactly 1/2.
  CHECK_THROWS_AS(build_instance(parse_config_text(R"(
[problem]
kind = spider-median
legs = 3
[data]
point = 1:1
point = 2:1
weights = 0.5 0.5
[run]
iterations = 5
seeds = 1
)")),
                  std::domain_error);
}

TEST_CASE("run_experiment: file-count contract and CSV schema") {
  auto config = parse_config_text(kSpiderMeanConfig);
  config.out_dir = fresh_dir("sppa_test_run").string();
  const auto result = run_experiment(config);
  CHECK(result.trace_files.size() == 3);
  CHECK(fs::exists(result.summary_file));
  int files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(config.out_dir))
    ++files;
  CHECK(files == 4);  // 3 traces + 1 summary

  const std::string trace = slurp(result.trace_files[0]);
  CHECK(trace.find("# config-hash = ") != std::string::npos);
  CHECK(trace.find("iter,lambda,marginal_index,step_length,dist_to_reference,objective\n") !=
        std::string::npos);
  const std::string summary = slurp(result.summary_file);
  CHECK(summary.find("seed,final_dist,final_gap,iterations\n") != std::string::npos);
  CHECK(summary.find("# config-hash = ") != std::string::npos);

  for (const auto& row : result.rows) {
    CHECK(row.final_dist >= 0.0);
    CHECK(row.final_gap >= 0.0);
    CHECK(row.iterations == 500);
  }
}

TEST_CASE("run_experiment: byte-identical re-runs, independent of out dir") {
  auto config = parse_config_text(kSpiderMeanConfig);
  config.out_dir = fresh_dir("sppa_test_detA").string();
  const auto first = run_experiment(config);
  auto again = config;
  again.out_dir = fresh_dir("sppa_test_detB").string();
  const auto second = run_experiment(again);
  REQUIRE(first.trace_files.size() == second.trace_files.size());
  for (std::size_t i = 0; i < first.trace_files.size(); ++i)
    CHECK(slurp(first.trace_files[i]) == slurp(second.trace_files[i]));
  CHECK(slurp(first.summary_file) == slurp(second.summary_file));
}

TEST_CASE("run_experiment: abs-regression reports NA distance, best objective") {
  auto config = parse_config_text(R"(
[problem]
kind = abs-regression
dimension = 2
[data]
row = 1 0 1
row = 0 1 -1
row = 1 1 0.5
[run]
iterations = 300
seeds = 5
)");
  config.out_dir = fresh_dir("sppa_test_abs").string();
  const auto result = run_experiment(config);
  CHECK(std::isnan(result.rows[0].final_dist));
  CHECK(result.rows[0].final_gap >= 0.0);  // best objective value reached
  const std::string summary = slurp(result.summary_file);
  CHECK(summary.find("5,NA,") != std::string::npos);
}

TEST_CASE("compare_methods: row count and error paths") {
  auto config = parse_config_text(R"(
[problem]
kind = least-squares
dimension = 2
[data]
row = 1 0 1
row = 0 1 2
[run]
iterations = 200
seeds = 3
)");
  config.out_dir = fresh_dir("sppa_test_cmp").string();
  const auto result = compare_methods(config);
  REQUIRE(result.compare_files.size() == 1);
  const std::string text = slurp(result.compare_files[0]);
  // Header block + column header + exactly one row per iteration.
  long rows = 0;
  std::istringstream lines(text);
  std::string line;
  bool seen_header = false;
  while (std::getline(lines, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!seen_header) {
      CHECK(line == "iter,lambda,marginal_index,sppa_dist,subgrad_dist");
      seen_header = true;
      continue;
    }
    ++rows;
  }
  CHECK(rows == 200);
  CHECK_FALSE(result.rows[0].sppa_diverged);

  auto spider_config = parse_config_text(kSpiderMeanConfig);
  spider_config.out_dir = fresh_dir("sppa_test_cmp_spider").string();
  CHECK_THROWS_AS(compare_methods(spider_config), std::invalid_argument);
}

TEST_CASE("compare_methods: both methods converge on the stable instance") {
  auto config = parse_config_file(std::string(SPPA_TEST_CONFIG_DIR) +
                                  "/compare_stable.ini");
  apply_overrides(config, "", 100000, fresh_dir("sppa_test_cmp_stable").string());
  const auto result = compare_methods(config);
  std::vector<double> prox_dists, grad_dists;
  for (const auto& row : result.rows) {
    CHECK_FALSE(row.sppa_diverged);
    CHECK_FALSE(row.subgrad_diverged);
    prox_dists.push_back(row.sppa_final_dist);
    grad_dists.push_back(row.subgrad_final_dist);
  }
  const auto median_of = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };
  CHECK(median_of(prox_dists) <= 1e-2);
  CHECK(median_of(grad_dists) <= 1e-2);
}

TEST_CASE("compare_methods: large steps blow up the subgradient method only") {
  auto config = parse_config_file(std::string(SPPA_TEST_CONFIG_DIR) +
                                  "/compare_unstable.ini");
  apply_overrides(config, "", 0, fresh_dir("sppa_test_cmp_unstable").string());
  const auto result = compare_methods(config);
  int flagged = 0;
  for (const auto& row : result.rows) {
    CHECK_FALSE(row.sppa_diverged);  // the implicit step is unconditionally stable
    CHECK(row.sppa_final_dist <= 1e-1);
    if (row.subgrad_diverged) ++flagged;
  }
  CHECK(flagged >= 8);
  const std::string summary = slurp(result.summary_file);
  CHECK(summary.find("seed,sppa_final_dist,subgrad_final_dist,sppa_diverged,"
                     "subgrad_diverged\n") != std::string::npos);
}

TEST_CASE("cyclic baseline converges on the generated least-squares instance") {
  auto config = parse_config_text(R"(
[problem]
kind = least-squares
dimension = 5
[data]
count = 20
seed = 42
range = 2.0
[run]
iterations = 1
seeds = 1
)");
  const auto instance = build_instance(config);
  REQUIRE(instance.reference.has_value());
  const StepSchedule schedule(1.0, 1.0, 1);
  const RunTrace trace =
      cyclic_ppa_run(instance.start, instance.support, schedule, 5000,
                     instance.reference);
  CHECK(trace.records.back().dist_to_reference <= 1e-2);
  // The per-step inequality holds along the whole deterministic sweep.
  for (const auto& rec : trace.records) CHECK(rec.residual >= -1e-9);
}

TEST_CASE("config_echo excludes the output directory") {
  auto config = parse_config_text(kSpiderMeanConfig);
  config.out_dir = "one";
  const auto hash_one = config_hash(config);
  config.out_dir = "two";
  CHECK(config_hash(config) == hash_one);
}
