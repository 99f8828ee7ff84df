#include "sppa/experiment.hpp"

#include "sppa/spider.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "vec_ops.hpp"

namespace fs = std::filesystem;

namespace sppa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDivergenceBall = 1e6;

// ---------------------------------------------------------------------------
// formatting

std::string g17(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex16(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// INI parsing

struct IniEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string token;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!token.empty()) out.push_back(std::move(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(std::move(token));
  return out;
}

[[noreturn]] void config_error(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

std::vector<IniEntry> parse_ini(const std::string& text) {
  std::vector<IniEntry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') config_error("unterminated section at line " + std::to_string(line));
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      config_error("expected key = value at line " + std::to_string(line));
    entries.push_back(
        IniEntry{section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line});
  }
  return entries;
}

class IniView {
 public:
  explicit IniView(const std::vector<IniEntry>& entries) : entries_(&entries) {}

  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const {
    std::optional<std::string> found;
    for (const auto& e : *entries_)
      if (e.section == section && e.key == key) found = e.value;
    return found;
  }

  std::vector<std::string> get_all(const std::string& section,
                                   const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& e : *entries_)
      if (e.section == section && e.key == key) out.push_back(e.value);
    return out;
  }

 private:
  const std::vector<IniEntry>* entries_;
};

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    config_error(what + ": not a finite number: '" + s + "'");
  }
}

long to_long(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    config_error(what + ": not an integer: '" + s + "'");
  }
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    config_error(what + ": not an unsigned integer: '" + s + "'");
  }
}

SpiderPoint parse_spider_point(const std::string& s) {
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos)
    config_error("data.point: expected leg:radius, got '" + s + "'");
  const long leg = to_long(s.substr(0, colon), "data.point leg");
  const double radius = to_double(s.substr(colon + 1), "data.point radius");
  return spider_point(static_cast<int>(leg), radius);
}

bool is_spider_problem(ProblemKind kind) {
  return kind == ProblemKind::SpiderMean || kind == ProblemKind::SpiderMedian;
}

// ---------------------------------------------------------------------------
// data generation

// Rows follow a planted linear model: coefficients and the planted point are
// uniform in [-range, range]^d and the response carries uniform noise of a
// tenth of the range, so generated systems are well conditioned with a small
// optimal residual.
std::vector<std::vector<double>> generate_rows(int dimension, long count,
                                               std::uint64_t seed, double range) {
  SplitMix64 rng(seed);
  std::vector<double> planted(static_cast<std::size_t>(dimension));
  for (double& c : planted) c = rng.uniform(-range, range);
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(count));
  for (long r = 0; r < count; ++r) {
    std::vector<double> row(static_cast<std::size_t>(dimension) + 1);
    double dot = 0.0;
    for (int i = 0; i < dimension; ++i) {
      row[static_cast<std::size_t>(i)] = rng.uniform(-range, range);
      dot += row[static_cast<std::size_t>(i)] * planted[static_cast<std::size_t>(i)];
    }
    row.back() = dot + rng.uniform(-range / 10.0, range / 10.0);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> generate_values(long count, std::uint64_t seed, double range) {
  SplitMix64 rng(seed);
  std::vector<double> values(static_cast<std::size_t>(count));
  for (double& v : values) v = rng.uniform(-range, range);
  return values;
}

// ---------------------------------------------------------------------------
// oracle solves

std::vector<double> solve_normal_equations(const std::vector<std::vector<double>>& rows,
                                           int dimension, double ridge) {
  const auto n = static_cast<double>(rows.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dimension, dimension);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dimension);
  for (const auto& row : rows) {
    for (int i = 0; i < dimension; ++i) {
      rhs(i) += row.back() * row[static_cast<std::size_t>(i)];
      for (int j = 0; j < dimension; ++j)
        m(i, j) += row[static_cast<std::size_t>(i)] * row[static_cast<std::size_t>(j)];
    }
  }
  m /= n;
  rhs /= n;
  for (int i = 0; i < dimension; ++i) m(i, i) += ridge;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible())
    throw std::domain_error(
        "build_instance: singular normal equations, reference minimizer undefined");
  const Eigen::VectorXd x = lu.solve(rhs);
  return std::vector<double>(x.data(), x.data() + dimension);
}

// ---------------------------------------------------------------------------
// output plumbing

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

void finish_write(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_header(std::ostream& out, const char* kind, const ExperimentConfig& config,
                  std::optional<std::uint64_t> seed) {
  out << "# sppa " << kind << " v1\n";
  out << "# config-hash = " << hex16(config_hash(config)) << "\n";
  for (const auto& [key, value] : config_echo(config))
    out << "# " << key << " = " << value << "\n";
  if (seed.has_value()) out << "# seed = " << *seed << "\n";
}

double running_min_objective(const RunTrace& trace) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rec : trace.records) best = std::min(best, rec.objective);
  return best;
}

}  // namespace

const char* problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Median: return "median";
    case ProblemKind::AbsRegression: return "abs-regression";
    case ProblemKind::LeastSquares: return "least-squares";
    case ProblemKind::RegLeastSquares: return "reg-least-squares";
    case ProblemKind::SpiderMean: return "spider-mean";
    case ProblemKind::SpiderMedian: return "spider-median";
  }
  return "unknown";
}

ProblemKind problem_from_name(const std::string& name) {
  if (name == "median") return ProblemKind::Median;
  if (name == "abs-regression") return ProblemKind::AbsRegression;
  if (name == "least-squares") return ProblemKind::LeastSquares;
  if (name == "reg-least-squares") return ProblemKind::RegLeastSquares;
  if (name == "spider-mean") return ProblemKind::SpiderMean;
  if (name == "spider-median") return ProblemKind::SpiderMedian;
  config_error("unknown problem kind '" + name + "'");
}

ExperimentConfig parse_config_text(const std::string& text) {
  const auto entries = parse_ini(text);
  static const std::set<std::pair<std::string, std::string>> known = {
      {"problem", "kind"},   {"problem", "dimension"}, {"problem", "legs"},
      {"problem", "mu"},     {"data", "count"},        {"data", "seed"},
      {"data", "range"},     {"data", "row"},          {"data", "values"},
      {"data", "point"},     {"data", "weights"},      {"schedule", "c"},
      {"schedule", "p"},     {"schedule", "i0"},       {"run", "iterations"},
      {"run", "seeds"},      {"run", "out"},
  };
  for (const auto& e : entries) {
    if (!known.count({e.section, e.key}))
      config_error("unknown key [" + e.section + "] " + e.key + " at line " +
                   std::to_string(e.line));
  }
  const IniView view(entries);

  ExperimentConfig config;
  const auto kind = view.get("problem", "kind");
  if (!kind.has_value()) config_error("missing [problem] kind");
  config.problem = problem_from_name(*kind);

  if (is_spider_problem(config.problem)) {
    if (const auto legs = view.get("problem", "legs"))
      config.legs = static_cast<int>(to_long(*legs, "problem.legs"));
    if (config.legs < 3) config_error("problem.legs must be >= 3");
  } else {
    if (const auto dim = view.get("problem", "dimension"))
      config.dimension = static_cast<int>(to_long(*dim, "problem.dimension"));
    if (config.dimension < 1) config_error("problem.dimension must be >= 1");
    if (config.problem == ProblemKind::Median && config.dimension != 1)
      config_error("median supports dimension 1 only");
  }
  if (config.problem == ProblemKind::RegLeastSquares) {
    const auto mu = view.get("problem", "mu");
    if (!mu.has_value()) config_error("reg-least-squares requires problem.mu");
    config.mu = to_double(*mu, "problem.mu");
    if (config.mu <= 0.0) config_error("problem.mu must be positive");
  }

  if (const auto count = view.get("data", "count"))
    config.data.count = to_long(*count, "data.count");
  if (const auto seed = view.get("data", "seed"))
    config.data.seed = to_u64(*seed, "data.seed");
  if (const auto range = view.get("data", "range"))
    config.data.range = to_double(*range, "data.range");
  for (const auto& row : view.get_all("data", "row")) {
    std::vector<double> parsed;
    for (const auto& token : split_tokens(row))
      parsed.push_back(to_double(token, "data.row entry"));
    config.data.rows.push_back(std::move(parsed));
  }
  if (const auto values = view.get("data", "values")) {
    for (const auto& token : split_tokens(*values))
      config.data.values.push_back(to_double(token, "data.values entry"));
  }
  for (const auto& point : view.get_all("data", "point"))
    config.data.points.push_back(parse_spider_point(point));
  if (const auto weights = view.get("data", "weights")) {
    for (const auto& token : split_tokens(*weights))
      config.data.weights.push_back(to_double(token, "data.weights entry"));
  }

  if (const auto c = view.get("schedule", "c"))
    config.schedule.c = to_double(*c, "schedule.c");
  if (const auto p = view.get("schedule", "p"))
    config.schedule.p = to_double(*p, "schedule.p");
  if (const auto i0 = view.get("schedule", "i0"))
    config.schedule.i0 = to_long(*i0, "schedule.i0");

  const auto iterations = view.get("run", "iterations");
  if (!iterations.has_value()) config_error("missing [run] iterations");
  config.iterations = to_long(*iterations, "run.iterations");
  if (config.iterations < 1) config_error("run.iterations must be >= 1");

  const auto seeds = view.get("run", "seeds");
  if (!seeds.has_value()) config_error("missing [run] seeds");
  for (const auto& token : split_tokens(*seeds))
    config.seeds.push_back(to_u64(token, "run.seeds entry"));
  if (config.seeds.empty()) config_error("run.seeds must list at least one seed");
  if (std::set<std::uint64_t>(config.seeds.begin(), config.seeds.end()).size() !=
      config.seeds.size())
    config_error("run.seeds must be distinct");

  if (const auto out = view.get("run", "out")) config.out_dir = *out;
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

void apply_overrides(ExperimentConfig& config, const std::string& seeds_csv,
                     long iterations, const std::string& out_dir) {
  if (!seeds_csv.empty()) {
    config.seeds.clear();
    for (const auto& token : split_tokens(seeds_csv))
      config.seeds.push_back(to_u64(token, "--seed-override entry"));
    if (config.seeds.empty()) config_error("--seed-override lists no seeds");
  }
  if (iterations != 0) {
    if (iterations < 1) config_error("--iterations-override must be >= 1");
    config.iterations = iterations;
  }
  if (!out_dir.empty()) config.out_dir = out_dir;
}

ProblemInstance build_instance(const ExperimentConfig& config) {
  ProblemInstance instance{EuclideanSpace(1), {}, {}, SpacePoint{}, std::nullopt,
                           std::nullopt};

  if (is_spider_problem(config.problem)) {
    if (config.data.points.empty())
      config_error("spider problems need inline data.point entries");
    std::vector<double> weights = config.data.weights;
    if (weights.empty())
      weights.assign(config.data.points.size(),
                     1.0 / static_cast<double>(config.data.points.size()));
    if (weights.size() != config.data.points.size())
      config_error("data.weights length must match the number of points");
    double sum = 0.0;
    for (double w : weights) {
      if (w <= 0.0) config_error("data.weights must be strictly positive");
      sum += w;
    }
    for (double& w : weights) w /= sum;

    const SpiderSpace space(config.legs);
    const auto sample = weighted_sample(config.data.points, weights);
    for (const auto& p : sample.points) {
      if (p.leg >= space.legs) config_error("data.point leg outside the space");
    }
    const int q = config.problem == ProblemKind::SpiderMean ? 2 : 1;
    for (std::size_t j = 0; j < sample.points.size(); ++j)
      instance.support.push_back(
          power_dist(sample.points[j].leg, sample.points[j].radius, q));
    instance.weights = sample.weights;
    instance.space = space;
    instance.start = space_origin(instance.space);
    const SpacePoint reference = q == 2 ? frechet_mean_oracle(sample)
                                        : frechet_median_oracle(sample);
    instance.reference = reference;
    instance.inf_objective =
        sample_objective(sample, std::get<SpiderPoint>(reference), q);
    return instance;
  }

  if (config.problem == ProblemKind::Median) {
    std::vector<double> values = config.data.values;
    if (values.empty()) {
      if (config.data.count < 1)
        config_error("median needs data.values or a generator data.count");
      values = generate_values(config.data.count, config.data.seed, config.data.range);
    }
    if (values.size() % 2 == 0)
      throw std::domain_error(
          "build_instance: median needs an odd sample count for a unique minimizer");
    for (double v : values) instance.support.push_back(norm_dist({v}));
    instance.weights.assign(values.size(), 1.0 / static_cast<double>(values.size()));
    instance.space = EuclideanSpace(1);
    instance.start = space_origin(instance.space);
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    instance.reference = euclidean({sorted[sorted.size() / 2]});
    double inf_value = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j)
      inf_value += instance.weights[j] * std::abs(sorted[sorted.size() / 2] - values[j]);
    instance.inf_objective = inf_value;
    return instance;
  }

  // Row-based regression problems.
  std::vector<std::vector<double>> rows = config.data.rows;
  if (rows.empty()) {
    if (config.data.count < 1)
      config_error("regression problems need data.row entries or a generator data.count");
    rows = generate_rows(config.dimension, config.data.count, config.data.seed,
                         config.data.range);
  }
  for (const auto& row : rows) {
    if (row.size() != static_cast<std::size_t>(config.dimension) + 1)
      config_error("data.row must hold dimension + 1 numbers (a_1..a_d b)");
  }
  const double weight = 1.0 / static_cast<double>(rows.size());
  for (const auto& row : rows) {
    std::vector<double> a(row.begin(), row.end() - 1);
    switch (config.problem) {
      case ProblemKind::AbsRegression:
        instance.support.push_back(abs_affine(std::move(a), row.back()));
        break;
      case ProblemKind::LeastSquares:
        instance.support.push_back(sq_affine(std::move(a), row.back()));
        break;
      case ProblemKind::RegLeastSquares:
        instance.support.push_back(reg_sq_affine(std::move(a), row.back(), config.mu));
        break;
      default:
        config_error("unreachable problem kind");
    }
  }
  instance.weights.assign(rows.size(), weight);
  instance.space = EuclideanSpace(config.dimension);
  instance.start = space_origin(instance.space);

  if (config.problem != ProblemKind::AbsRegression) {
    const double ridge =
        config.problem == ProblemKind::RegLeastSquares ? 2.0 * config.mu : 0.0;
    const auto solution = solve_normal_equations(rows, config.dimension, ridge);
    instance.reference = euclidean(solution);
    double inf_value = 0.0;
    for (std::size_t j = 0; j < instance.support.size(); ++j)
      inf_value +=
          instance.weights[j] * marginal_value(instance.support[j], *instance.reference);
    instance.inf_objective = inf_value;
  }
  return instance;
}

std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::string>> echo;
  echo.emplace_back("problem", problem_name(config.problem));
  if (is_spider_problem(config.problem)) {
    echo.emplace_back("legs", std::to_string(config.legs));
    for (const auto& p : config.data.points)
      echo.emplace_back("data.point",
                        std::to_string(p.leg) + ":" + g17(p.radius));
    if (!config.data.weights.empty()) {
      std::string weights;
      for (const auto& w : config.data.weights) {
        if (!weights.empty()) weights += " ";
        weights += g17(w);
      }
      echo.emplace_back("data.weights", weights);
    }
  } else {
    echo.emplace_back("dimension", std::to_string(config.dimension));
    if (config.problem == ProblemKind::RegLeastSquares)
      echo.emplace_back("mu", g17(config.mu));
    if (!config.data.rows.empty()) {
      for (const auto& row : config.data.rows) {
        std::string line;
        for (double v : row) {
          if (!line.empty()) line += " ";
          line += g17(v);
        }
        echo.emplace_back("data.row", line);
      }
    } else if (!config.data.values.empty()) {
      std::string line;
      for (double v : config.data.values) {
        if (!line.empty()) line += " ";
        line += g17(v);
      }
      echo.emplace_back("data.values", line);
    } else {
      echo.emplace_back("data.count", std::to_string(config.data.count));
      echo.emplace_back("data.seed", std::to_string(config.data.seed));
      echo.emplace_back("data.range", g17(config.data.range));
    }
  }
  echo.emplace_back("schedule.c", g17(config.schedule.c));
  echo.emplace_back("schedule.p", g17(config.schedule.p));
  echo.emplace_back("schedule.i0", std::to_string(config.schedule.i0));
  echo.emplace_back("iterations", std::to_string(config.iterations));
  std::string seeds;
  for (const auto& s : config.seeds) {
    if (!seeds.empty()) seeds += " ";
    seeds += std::to_string(s);
  }
  echo.emplace_back("seeds", seeds);
  return echo;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::string text;
  for (const auto& [key, value] : config_echo(config))
    text += key + " = " + value + "\n";
  return fnv1a64(text);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto instance = build_instance(config);
  const StepSchedule schedule(config.schedule.c, config.schedule.p, config.schedule.i0);
  fs::create_directories(config.out_dir);

  ExperimentResult result;
  for (const std::uint64_t seed : config.seeds) {
    const Sampler sampler(instance.support, instance.weights, seed);
    const auto t0 = std::chrono::steady_clock::now();
    const RunTrace trace =
        run(instance.start, sampler, schedule, config.iterations, instance.reference);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path path =
        fs::path(config.out_dir) / ("trace_seed" + std::to_string(seed) + ".csv");
    auto out = open_for_write(path);
    write_header(out, "trace", config, seed);
    out << "iter,lambda,marginal_index,step_length,dist_to_reference,objective\n";
    for (const auto& rec : trace.records) {
      out << rec.iter << ',' << g17(rec.lambda) << ',' << rec.marginal_index << ','
          << g17(rec.step_length) << ',' << g17(rec.dist_to_reference) << ','
          << g17(rec.objective) << '\n';
    }
    finish_write(out, path);
    result.trace_files.push_back(path.string());

    SummaryRow row;
    row.seed = seed;
    row.iterations = config.iterations;
    row.wall_seconds = wall;
    row.final_dist = trace.records.back().dist_to_reference;
    if (instance.inf_objective.has_value())
      row.final_gap =
          std::max(0.0, trace.records.back().objective - *instance.inf_objective);
    else
      row.final_gap = running_min_objective(trace);
    result.rows.push_back(row);
  }

  const fs::path summary_path = fs::path(config.out_dir) / "summary.csv";
  auto out = open_for_write(summary_path);
  write_header(out, "summary", config, std::nullopt);
  out << "seed,final_dist,final_gap,iterations\n";
  for (const auto& row : result.rows) {
    out << row.seed << ',' << g17(row.final_dist) << ',' << g17(row.final_gap) << ','
        << row.iterations << '\n';
  }
  finish_write(out, summary_path);
  result.summary_file = summary_path.string();
  return result;
}

CompareResult compare_methods(const ExperimentConfig& config) {
  const auto instance = build_instance(config);
  if (!std::holds_alternative<EuclideanSpace>(instance.space))
    throw std::invalid_argument(
        "compare_methods: spider problems are unsupported, the subgradient baseline "
        "needs linear structure");
  if (!instance.reference.has_value())
    throw std::invalid_argument(
        "compare_methods: the problem has no reference minimizer to measure against");
  const StepSchedule schedule(config.schedule.c, config.schedule.p, config.schedule.i0);
  fs::create_directories(config.out_dir);

  CompareResult result;
  for (const std::uint64_t seed : config.seeds) {
    const Sampler sampler(instance.support, instance.weights, seed);
    auto stream = sampler.stream();
    SpacePoint x_prox = instance.start;
    SpacePoint x_grad = instance.start;
    CompareRow row;
    row.seed = seed;

    const fs::path path =
        fs::path(config.out_dir) / ("compare_seed" + std::to_string(seed) + ".csv");
    auto out = open_for_write(path);
    write_header(out, "compare", config, seed);
    out << "iter,lambda,marginal_index,sppa_dist,subgrad_dist\n";
    for (long i = 1; i <= config.iterations; ++i) {
      const double lambda = schedule.lambda(i);
      const std::size_t j = stream.next_index();
      const Marginal& m = sampler.support()[j];
      x_prox = prox(ProxRequest{x_prox, lambda, m});
      x_grad = subgradient_step(x_grad, m, lambda);
      const double d_prox = distance(x_prox, *instance.reference);
      const double d_grad = distance(x_grad, *instance.reference);
      if (!(d_prox <= kDivergenceBall)) row.sppa_diverged = true;
      if (!(d_grad <= kDivergenceBall)) row.subgrad_diverged = true;
      out << i << ',' << g17(lambda) << ',' << static_cast<int>(j) << ','
          << g17(d_prox) << ',' << g17(d_grad) << '\n';
      if (i == config.iterations) {
        row.sppa_final_dist = d_prox;
        row.subgrad_final_dist = d_grad;
      }
    }
    finish_write(out, path);
    result.compare_files.push_back(path.string());
    result.rows.push_back(row);
  }

  const fs::path summary_path = fs::path(config.out_dir) / "compare_summary.csv";
  auto out = open_for_write(summary_path);
  write_header(out, "compare-summary", config, std::nullopt);
  out << "seed,sppa_final_dist,subgrad_final_dist,sppa_diverged,subgrad_diverged\n";
  for (const auto& row : result.rows) {
    out << row.seed << ',' << g17(row.sppa_final_dist) << ','
        << g17(row.subgrad_final_dist) << ',' << (row.sppa_diverged ? 1 : 0) << ','
        << (row.subgrad_diverged ? 1 : 0) << '\n';
  }
  finish_write(out, summary_path);
  result.summary_file = summary_path.string();
  return result;
}

}  // namespace sppa
