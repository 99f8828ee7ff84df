#include "sppa/spider.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace sppa {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kDegenerateTol = 1e-12;

void require_valid(const WeightedSample& sample, const char* op) {
  if (sample.points.empty())
    throw std::invalid_argument(std::string(op) + ": empty sample");
  if (sample.points.size() != sample.weights.size())
    throw std::invalid_argument(std::string(op) + ": points/weights length mismatch");
}

int max_leg(const WeightedSample& sample) {
  int m = 0;
  for (const auto& p : sample.points) m = std::max(m, p.leg);
  return m;
}

}  // namespace

WeightedSample weighted_sample(std::vector<SpiderPoint> points,
                               std::vector<double> weights) {
  WeightedSample sample{std::move(points), std::move(weights)};
  require_valid(sample, "weighted_sample");
  double sum = 0.0;
  for (double w : sample.weights) {
    if (!std::isfinite(w) || w <= 0.0)
      throw std::invalid_argument("weighted_sample: weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol)
    throw std::invalid_argument("weighted_sample: weights must sum to 1");
  for (auto& p : sample.points) p = spider_point(p.leg, p.radius);
  return sample;
}

double sample_objective(const WeightedSample& sample, const SpiderPoint& x, int q) {
  require_valid(sample, "sample_objective");
  if (q != 1 && q != 2)
    throw std::invalid_argument("sample_objective: q must be 1 or 2");
  double value = 0.0;
  for (std::size_t j = 0; j < sample.points.size(); ++j) {
    const SpiderPoint& t = sample.points[j];
    const double d = (x.leg == t.leg) ? std::abs(x.radius - t.radius)
                                      : x.radius + t.radius;
    value += sample.weights[j] * (q == 1 ? d : d * d);
  }
  return value;
}

SpacePoint frechet_mean_oracle(const WeightedSample& sample) {
  require_valid(sample, "frechet_mean_oracle");
  std::vector<double> pull(static_cast<std::size_t>(max_leg(sample)) + 1, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < sample.points.size(); ++j) {
    const double p = sample.weights[j] * sample.points[j].radius;
    pull[static_cast<std::size_t>(sample.points[j].leg)] += p;
    total += p;
  }
  for (std::size_t k = 0; k < pull.size(); ++k) {
    const double surplus = pull[k] - (total - pull[k]);
    if (surplus > 0.0) return spider(static_cast<int>(k), surplus);
  }
  return spider(0, 0.0);
}

SpacePoint frechet_median_oracle(const WeightedSample& sample) {
  require_valid(sample, "frechet_median_oracle");
  // Weight strictly on each leg; radius-0 points sit at the cone point and
  // count toward no leg.
  std::vector<double> leg_weight(static_cast<std::size_t>(max_leg(sample)) + 1, 0.0);
  for (std::size_t j = 0; j < sample.points.size(); ++j) {
    if (sample.points[j].radius > 0.0)
      leg_weight[static_cast<std::size_t>(sample.points[j].leg)] += sample.weights[j];
  }
  int dominant = -1;
  for (std::size_t k = 0; k < leg_weight.size(); ++k) {
    if (std::abs(leg_weight[k] - 0.5) <= kDegenerateTol)
      throw std::domain_error(
          "frechet_median_oracle: degenerate median (leg weight exactly 1/2)");
    if (leg_weight[k] > 0.5) dominant = static_cast<int>(k);
  }
  if (dominant < 0) return spider(0, 0.0);

  // 1-D problem on the dominant leg: all off-leg mass acts like a point at
  // radius 0 with the complementary weight.
  std::vector<std::pair<double, double>> atoms;  // (radius, weight)
  const double off_leg = 1.0 - leg_weight[static_cast<std::size_t>(dominant)];
  atoms.emplace_back(0.0, off_leg);
  for (std::size_t j = 0; j < sample.points.size(); ++j) {
    if (sample.points[j].leg == dominant && sample.points[j].radius > 0.0)
      atoms.emplace_back(sample.points[j].radius, sample.weights[j]);
  }
  std::sort(atoms.begin(), atoms.end());
  // Merge equal radii so the cumulative scan sees each breakpoint once.
  std::vector<std::pair<double, double>> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().first == a.first)
      merged.back().second += a.second;
    else
      merged.push_back(a);
  }
  double cumulative = 0.0;
  for (const auto& [radius, weight] : merged) {
    cumulative += weight;
    if (std::abs(cumulative - 0.5) <= kDegenerateTol)
      throw std::domain_error(
          "frechet_median_oracle: degenerate median (flat weighted-median interval)");
    if (cumulative > 0.5) return spider(dominant, radius);
  }
  return spider(dominant, merged.back().first);  // unreachable: cumulative ends at 1
}

SpacePoint grid_search_oracle(const SpiderSpace& space, const WeightedSample& sample,
                              int q, double step) {
  require_valid(sample, "grid_search_oracle");
  if (!(step > 0.0))
    throw std::invalid_argument("grid_search_oracle: step must be positive");
  for (const auto& p : sample.points) {
    if (p.leg >= space.legs)
      throw std::invalid_argument("grid_search_oracle: sample leg outside the space");
  }
  double max_radius = 0.0;
  for (const auto& p : sample.points) max_radius = std::max(max_radius, p.radius);

  SpiderPoint best = spider_point(0, 0.0);
  double best_value = sample_objective(sample, best, q);
  const long max_index = static_cast<long>(std::ceil(max_radius / step));
  for (int leg = 0; leg < space.legs; ++leg) {
    for (long m = 1; m <= max_index; ++m) {
      const SpiderPoint candidate = spider_point(leg, static_cast<double>(m) * step);
      const double value = sample_objective(sample, candidate, q);
      if (value < best_value) {
        best_value = value;
        best = candidate;
      }
    }
  }
  return best;
}

}  // namespace sppa
